#include <numbers>

#include "doctest.h"
#include "qhelly/rng.hpp"
#include "qhelly/tverberg.hpp"

using namespace qh;

namespace {

Mat random_spd(int d, CounterRng& rng) {
  Mat g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  }
  return g * g.transpose() + 0.05 * Mat::Identity(d, d);
}

double max_support_error(const Body& a, const Body& b, const std::vector<Vec>& dirs) {
  double e = 0.0;
  for (const auto& u : dirs) e = std::max(e, std::abs(support(a, u) - support(b, u)));
  return e;
}

std::vector<Vec> directions(int d, int m, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<Vec> out;
  for (int k = 0; k < m; ++k) out.push_back(rng.unit_vector(d));
  return out;
}

struct ChartCase {
  std::unique_ptr<Chart> chart;
  std::function<Body(CounterRng&)> sample;
};

std::vector<ChartCase> chart_cases(int d) {
  std::vector<ChartCase> out;
  Mat dirs(d, d + 1);
  dirs.leftCols(d) = Mat::Identity(d, d);
  dirs.col(d) = Vec::Ones(d).normalized();
  out.push_back({zonotope_chart(dirs), [d, dirs](CounterRng& rng) {
                   Vec c(d), a(d + 1);
                   for (int i = 0; i < d; ++i) c[i] = rng.uniform(-1, 1);
                   for (int i = 0; i <= d; ++i) a[i] = rng.uniform(0.1, 2);
                   return Body(Zonotope(c, dirs, a));
                 }});
  out.push_back({zonotope_chart(Mat::Identity(d, d), true), [d](CounterRng& rng) {
                   Vec c(d), h(d);
                   for (int i = 0; i < d; ++i) {
                     c[i] = rng.uniform(-1, 1);
                     h[i] = rng.uniform(0.1, 2);
                   }
                   return Body(AxisBox(c, h));
                 }});
  out.push_back({ellipsoid_det_chart(d, 0.0), [d](CounterRng& rng) {
                   Vec c(d);
                   for (int i = 0; i < d; ++i) c[i] = rng.uniform(-1, 1);
                   return Body(Ellipsoid(c, random_spd(d, rng)));
                 }});
  out.push_back({ellipsoid_sum_chart(d), [d](CounterRng& rng) {
                   // the sum of entries must stay positive for the chart
                   Mat a = random_spd(d, rng) + 2.0 * Mat::Ones(d, d);
                   return Body(Ellipsoid(Vec::Zero(d), a));
                 }});
  out.push_back({segment_chart(d, 1.0), [d](CounterRng& rng) {
                   Vec c(d);
                   Mat w(d, 1);
                   for (int i = 0; i < d; ++i) {
                     c[i] = rng.uniform(-1, 1);
                     w(i, 0) = rng.uniform(0.05, 1);
                   }
                   return Body(Zonotope(c, w / w.sum(), Vec::Ones(1)));
                 }});
  if (d == 2) {
    Mat hex(2, 6);
    for (int k = 0; k < 6; ++k) hex.col(k) << std::cos(std::numbers::pi * k / 3), std::sin(std::numbers::pi * k / 3);
    out.push_back({hconvex_chart(hex), [hex](CounterRng& rng) {
                     Vec s(6);
                     for (int k = 0; k < 6; ++k) s[k] = rng.uniform(0.7, 1.3);
                     // tighten to the true supports so the set is represented canonically
                     const HConvexSet raw(hex, s);
                     for (int k = 0; k < 6; ++k) s[k] = support(raw, Vec(hex.col(k)));
                     return Body(HConvexSet(hex, s));
                   }});
  }
  return out;
}

}  // namespace

TEST_CASE("chart round trip: decode(lift(K)) reproduces K") {
  for (int d : {2, 3}) {
    const auto dirs = directions(d, 32, 1);
    for (auto& cc : chart_cases(d)) {
      CounterRng rng(100 + static_cast<std::uint64_t>(d));
      const int cases = cc.chart->name() == "hconvex" ? 300 : 1000;
      double worst = 0.0;
      for (int t = 0; t < cases; ++t) {
        const Body k = cc.chart->prepare(cc.sample(rng));
        worst = std::max(worst, max_support_error(cc.chart->decode(cc.chart->lift(k)), k, dirs));
      }
      INFO(cc.chart->name(), " d=", d);
      CHECK(worst < 1e-9);
    }
  }
}

TEST_CASE("chart transport: combined parameters decode inside the hull of the pair") {
  for (int d : {2, 3}) {
    const auto dirs = directions(d, 128, 2);
    for (auto& cc : chart_cases(d)) {
      CounterRng rng(200 + static_cast<std::uint64_t>(d));
      double worst = -1e300;
      for (int t = 0; t < 250; ++t) {
        const Body p = cc.chart->prepare(cc.sample(rng));
        const Body q = cc.chart->prepare(cc.sample(rng));
        const Vec lp = cc.chart->lift(p), lq = cc.chart->lift(q);
        for (double lam : {0.0, 0.25, 0.5, 1.0}) {
          Vec w(2);
          w << lam, 1 - lam;
          const Body m = cc.chart->decode(cc.chart->combine({lp, lq}, w));
          for (const auto& u : dirs) worst = std::max(worst, support(m, u) - std::max(support(p, u), support(q, u)));
        }
      }
      INFO(cc.chart->name(), " d=", d);
      CHECK(worst <= 1e-9);
    }
  }
}

TEST_CASE("zonotope volume is log-concave in the coefficients") {
  CounterRng rng(300);
  double worst = 1e300;
  for (int t = 0; t < 1000; ++t) {
    const int d = rng.uniform_int(1, 3);
    const int k = rng.uniform_int(1, 6);
    Mat dirs(d, k);
    for (int i = 0; i < k; ++i) dirs.col(i) = rng.unit_vector(d);
    Vec a(k), b(k);
    for (int i = 0; i < k; ++i) {
      a[i] = rng.uniform(0, 2);
      b[i] = rng.uniform(0, 2);
    }
    const double lam = rng.uniform();
    const double mid = zonotope_volume(dirs, lam * a + (1 - lam) * b);
    const double bound = std::pow(zonotope_volume(dirs, a), lam) * std::pow(zonotope_volume(dirs, b), 1 - lam);
    worst = std::min(worst, mid - bound);
  }
  CHECK(worst >= -1e-9);
}

TEST_CASE("determinant is log-concave on SPD matrices") {
  CounterRng rng(301);
  double worst = 1e300;
  for (int t = 0; t < 1000; ++t) {
    const int d = rng.uniform_int(1, 4);
    const Mat a = random_spd(d, rng), b = random_spd(d, rng);
    const double lam = rng.uniform();
    const double mid = (lam * a + (1 - lam) * b).determinant();
    worst = std::min(worst, mid - std::pow(a.determinant(), lam) * std::pow(b.determinant(), 1 - lam));
  }
  CHECK(worst >= -1e-9);
}

TEST_CASE("audit directions are unit and spread out") {
  for (int d : {2, 3, 4}) {
    const auto dirs = audit_directions(d, default_audit_directions(d));
    for (const auto& u : dirs) CHECK(u.norm() == doctest::Approx(1.0).epsilon(1e-12));
    Vec mean = Vec::Zero(d);
    for (const auto& u : dirs) mean += u;
    CHECK(mean.norm() / static_cast<double>(dirs.size()) < 0.1);
  }
  CHECK_THROWS_AS(audit_directions(2, 10), Error);
}
