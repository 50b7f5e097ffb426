#include <algorithm>
#include <numbers>

#include "doctest.h"
#include "qhelly/generators.hpp"
#include "qhelly/lp_type.hpp"
#include "qhelly/rng.hpp"
#include "qhelly/solvers.hpp"

using namespace qh;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

/// Independent feasibility oracle for centered boxes on symmetric families:
/// with the translate at the common center, eps is feasible iff some halfwidth
/// vector fits inside every member and (1+eps) times it covers every member.
bool centered_box_feasible(const std::vector<std::vector<Vec>>& vertex_lists, const std::vector<double>& inner_x,
                           const std::vector<double>& inner_y, double eps) {
  double need_x = 0, need_y = 0;
  for (const auto& vs : vertex_lists) {
    for (const auto& v : vs) {
      need_x = std::max(need_x, std::abs(v[0]));
      need_y = std::max(need_y, std::abs(v[1]));
    }
  }
  // scan inner boxes on a fine grid of the allowed region
  for (std::size_t i = 0; i < inner_x.size(); ++i) {
    if ((1 + eps) * inner_x[i] >= need_x - 1e-12 && (1 + eps) * inner_y[i] >= need_y - 1e-12) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("approximating a single box needs eps zero") {
  const std::vector<HPolytope> fam = {HPolytope::box(v2(0, 0), v2(1, 1))};
  const ApproxResult r = simultaneous_approx(fam, ApproxClass::box(2), 0.0);
  CHECK(r.feasible);
  CHECK(min_eps_approx(fam, ApproxClass::box(2)).eps < 1e-6);
  const auto& box = std::get<AxisBox>(*r.witness);
  CHECK((r.translate + box.center - v2(0.5, 0.5)).norm() < 1e-9);
  CHECK((box.halfwidths - v2(0.5, 0.5)).norm() < 1e-9);
}

TEST_CASE("two-box family has eps star one") {
  const std::vector<HPolytope> fam = {HPolytope::box(v2(0, 0), v2(1, 1)), HPolytope::box(v2(0.25, 0), v2(0.75, 1))};
  CHECK_FALSE(simultaneous_approx(fam, ApproxClass::box(2), 0.99).feasible);
  CHECK(simultaneous_approx(fam, ApproxClass::box(2), 1.0).feasible);
  CHECK(min_eps_approx(fam, ApproxClass::box(2)).eps == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("square with its 45 degree rotation has eps star one") {
  const double s = std::sqrt(2.0);
  const std::vector<HPolytope> fam = {HPolytope::box(v2(-1, -1), v2(1, 1)),
                                      HPolytope::polygon({v2(s, 0), v2(0, s), v2(-s, 0), v2(0, -s)})};
  const double eps = min_eps_approx(fam, ApproxClass::box(2)).eps;
  // oracle: inner boxes must fit in the diamond (hx + hy <= sqrt 2) and the square
  std::vector<double> hx, hy;
  for (int i = 0; i <= 2000; ++i) {
    const double x = std::min(1.0, s * i / 2000);
    hx.push_back(x);
    hy.push_back(std::min(1.0, s - x));
  }
  const std::vector<std::vector<Vec>> verts = {vertices(fam[0]), vertices(fam[1])};
  double lo = 0, hi = 4;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (centered_box_feasible(verts, hx, hy, mid) ? hi : lo) = mid;
  }
  CHECK(hi == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(eps == doctest::Approx(hi).epsilon(1e-5));
}

TEST_CASE("approximation errors") {
  CHECK_THROWS_AS(min_eps_approx(std::vector<HPolytope>{}, ApproxClass::box(2)), Error);
  const std::vector<HPolytope> half = {HPolytope(2, {Halfspace::make(v2(1, 0), 1)})};
  try {
    min_eps_approx(half, ApproxClass::box(2));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::NoFiniteEps || e.kind() == ErrorKind::Unbounded));
  }
}

TEST_CASE("LP-type box solver equals exhaustive basis enumeration") {
  const auto gen = max_box_generator(2);
  CounterRng master(17);
  for (int t = 0; t < 10; ++t) {
    CounterRng rng = master.split(static_cast<std::uint64_t>(t));
    const LpTypeProblem prob = gen(10, rng);
    const LpTypeResult res = solve(prob, 1000 + static_cast<std::uint64_t>(t));
    // the optimum is the largest value over all combinatorial-dimension subsets
    double best = -1e300;
    std::vector<int> idx(4);
    for (idx[0] = 0; idx[0] < 10; ++idx[0])
      for (idx[1] = idx[0] + 1; idx[1] < 10; ++idx[1])
        for (idx[2] = idx[1] + 1; idx[2] < 10; ++idx[2])
          for (idx[3] = idx[2] + 1; idx[3] < 10; ++idx[3]) best = std::max(best, prob.value(prob.basis_oracle(idx)));
    std::vector<int> all(10);
    for (int i = 0; i < 10; ++i) all[static_cast<std::size_t>(i)] = i;
    CHECK(prob.value(res.report) == doctest::Approx(best).epsilon(1e-7));
    CHECK(prob.value(prob.basis_oracle(all)) == doctest::Approx(best).epsilon(1e-7));
    for (int i = 0; i < 10; ++i) CHECK_FALSE(prob.violates(res.report, i));
  }
}

TEST_CASE("LP-type enclosing ball matches brute force circles") {
  CounterRng rng(8);
  for (int t = 0; t < 30; ++t) {
    auto pts = std::make_shared<std::vector<Vec>>();
    for (int i = 0; i < 15; ++i) pts->push_back(v2(rng.uniform(), rng.uniform()));
    const LpTypeResult res = solve(enclosing_ball_lp_type(pts), static_cast<std::uint64_t>(t));
    double best = 1e300;
    auto covers = [&](const Vec& c, double r) {
      return std::all_of(pts->begin(), pts->end(), [&](const Vec& p) { return (p - c).norm() <= r + 1e-12; });
    };
    const auto& p = *pts;
    for (std::size_t i = 0; i < p.size(); ++i) {
      for (std::size_t j = i + 1; j < p.size(); ++j) {
        const Vec c = 0.5 * (p[i] + p[j]);
        const double r = 0.5 * (p[i] - p[j]).norm();
        if (covers(c, r)) best = std::min(best, r);
        for (std::size_t k = j + 1; k < p.size(); ++k) {
          const Vec b = p[j] - p[i], cc = p[k] - p[i];
          const double d = 2 * (b[0] * cc[1] - b[1] * cc[0]);
          if (std::abs(d) < 1e-12) continue;
          const Vec u = v2((cc[1] * b.squaredNorm() - b[1] * cc.squaredNorm()) / d,
                           (b[0] * cc.squaredNorm() - cc[0] * b.squaredNorm()) / d);
          if (covers(p[i] + u, u.norm())) best = std::min(best, u.norm());
        }
      }
    }
    CHECK(res.report.metrics.at("radius") == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("LP-type runs are deterministic per seed") {
  const auto gen = enclosing_ball_generator(2);
  const std::vector<int> sizes = {20, 40};
  const auto a = lp_type_bench(gen, sizes, 3, 5);
  const auto b = lp_type_bench(gen, sizes, 3, 5);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].seed == b[i].seed);
    CHECK(a[i].oracle_calls == b[i].oracle_calls);
    CHECK(a[i].objective == b[i].objective);
  }
  CHECK(calibrate_calls(gen, sizes, 0, 1).empty());
}

TEST_CASE("LP-type approximation agrees with bisection") {
  auto fam = std::make_shared<std::vector<HPolytope>>(
      std::vector<HPolytope>{HPolytope::box(v2(0, 0), v2(1, 1)), HPolytope::box(v2(0.25, 0), v2(0.75, 1)),
                             HPolytope::box(v2(0, 0.1), v2(1, 0.9))});
  const LpTypeResult res = solve(approx_lp_type(fam, ApproxClass::box(2)), 3);
  const double eps = min_eps_approx(*fam, ApproxClass::box(2)).eps;
  CHECK(res.report.objective_value == doctest::Approx(eps).epsilon(1e-5));
}
