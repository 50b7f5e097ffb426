#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "qhelly/rng.hpp"
#include "qhelly/tverberg.hpp"

using namespace qh;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

AxisBox unit_area_box(CounterRng& rng) {
  const double w = std::exp(rng.uniform(-1, 1));
  return AxisBox(v2(rng.uniform(-1, 1), rng.uniform(-1, 1)), v2(0.5 * w, 0.5 / w));
}

Ellipsoid unit_area_ellipse(CounterRng& rng, bool centered = false) {
  const double t = rng.uniform(0, std::numbers::pi);
  const double a = std::exp(rng.uniform(-0.7, 0.7));
  Mat r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  const Mat shape = r * Vec(v2(a, 1 / a)).asDiagonal() * r.transpose() / std::sqrt(std::numbers::pi);
  return Ellipsoid(centered ? v2(0, 0) : v2(rng.uniform(-1, 1), rng.uniform(-1, 1)), shape);
}

std::vector<oracle::P2> boundary_samples(const Body& b, int m) {
  std::vector<oracle::P2> out;
  if (const auto* e = std::get_if<Ellipsoid>(&b)) {
    for (int k = 0; k < m; ++k) {
      const double t = 2 * std::numbers::pi * k / m;
      const Vec p = e->center + e->shape * v2(std::cos(t), std::sin(t));
      out.push_back({p[0], p[1]});
    }
  } else if (const auto* x = std::get_if<AxisBox>(&b)) {
    for (double sx : {-1.0, 1.0}) {
      for (double sy : {-1.0, 1.0}) out.push_back({x->center[0] + sx * x->halfwidths[0], x->center[1] + sy * x->halfwidths[1]});
    }
  }
  return out;
}

/// Uniform samples inside the witness must lie in the hull of each part.
void rejection_audit(const TverbergCertificate& cert, CounterRng& rng, double tol) {
  const Body& w = cert.decoded_witness;
  Vec lo(2), hi(2);
  for (int i = 0; i < 2; ++i) {
    hi[i] = support(w, Vec::Unit(2, i));
    lo[i] = -support(w, -Vec::Unit(2, i));
  }
  std::vector<std::vector<oracle::P2>> hulls;
  for (const auto& part : cert.partition) {
    std::vector<oracle::P2> pts;
    for (int i : part) {
      const auto s = boundary_samples(cert.inputs[static_cast<std::size_t>(i)], 2000);
      pts.insert(pts.end(), s.begin(), s.end());
    }
    hulls.push_back(oracle::hull(pts));
  }
  int inside = 0;
  for (int t = 0; t < 4000 && inside < 300; ++t) {
    const Vec p = v2(rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1]));
    if (!contains_point(w, p, 0.0)) continue;
    ++inside;
    for (const auto& h : hulls) CHECK(oracle::outside(h, {p[0], p[1]}) <= tol);
  }
  CHECK(inside > 50);
}

}  // namespace

TEST_CASE("square corners split along the diagonals") {
  const std::vector<Vec> pts = {v2(0, 0), v2(1, 0), v2(1, 1), v2(0, 1)};
  const TverbergPartition p = tverberg_points(pts, 2);
  REQUIRE(p.parts.size() == 2);
  CHECK(p.parts[0] == std::vector<int>{0, 2});
  CHECK(p.parts[1] == std::vector<int>{1, 3});
  CHECK((p.common_point - v2(0.5, 0.5)).norm() < 1e-12);
  for (std::size_t j = 0; j < 2; ++j) {
    Vec x = Vec::Zero(2);
    for (std::size_t i = 0; i < p.parts[j].size(); ++i) x += p.weights[j][static_cast<Eigen::Index>(i)] * pts[static_cast<std::size_t>(p.parts[j][i])];
    CHECK((x - p.common_point).norm() < 1e-12);
  }
}

TEST_CASE("seven planar points always admit three intersecting parts") {
  CounterRng rng(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<Vec> pts;
    for (int i = 0; i < 7; ++i) pts.push_back(v2(rng.normal(), rng.normal()));
    const TverbergPartition p = tverberg_points(pts, 3, 1);
    CHECK(p.parts.size() == 3);
    const TverbergPartition q = tverberg_points(pts, 3, 3);
    CHECK(p.parts == q.parts);
  }
}

TEST_CASE("partition search limits") {
  std::vector<Vec> pts(30, v2(0, 0));
  CHECK_THROWS_AS(tverberg_points(pts, 3), Error);
  const std::vector<Vec> three = {v2(0, 0), v2(1, 0), v2(0, 1)};
  try {
    tverberg_points(three, 2);
    FAIL("expected NotFound");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFound);
  }
  CHECK_FALSE(common_point(three, {{0}, {1, 2}}));
}

TEST_CASE("five unit-area boxes yield a unit-area box in both part hulls") {
  CounterRng rng(12);
  for (int t = 0; t < 10; ++t) {
    std::vector<Body> boxes;
    for (int i = 0; i < 5; ++i) boxes.push_back(unit_area_box(rng));
    const auto chart = make_chart("zonotope", boxes, 1.0);
    CHECK(chart->count(2) == 5);
    const TverbergCertificate cert = quantitative_tverberg(boxes, *chart, 2, 1.0);
    CHECK(std::holds_alternative<AxisBox>(cert.decoded_witness));
    CHECK(cert.objective_value >= 1.0 - 1e-6);
    CHECK(cert.evidence.min_gap >= -1e-9);
    CHECK(cert.evidence.vertex_audit_run);
    CHECK(verify_certificate(to_json(cert)).ok);
    rejection_audit(cert, rng, 1e-9);
  }
}

TEST_CASE("ellipse certificates: affine chart, weight search and rejection audit") {
  CounterRng rng(13);
  std::vector<Body> seven, six;
  for (int i = 0; i < 7; ++i) seven.push_back(unit_area_ellipse(rng));
  for (int i = 0; i < 6; ++i) six.push_back(unit_area_ellipse(rng));
  const auto chart = ellipsoid_det_chart(2, 1.0);
  const TverbergCertificate a = quantitative_tverberg(seven, *chart, 2, 1.0);
  CHECK_FALSE(a.weight_search);
  CHECK(a.objective_value >= 1.0 - 1e-6);
  rejection_audit(a, rng, 1e-5);
  const TverbergCertificate b = quantitative_tverberg(six, *chart, 2, 1.0);
  CHECK(b.weight_search);
  CHECK(b.objective_value >= 1.0 - 1e-6);
  CHECK(verify_certificate(to_json(b)).ok);
  rejection_audit(b, rng, 1e-5);
}

TEST_CASE("centered ellipses, segments and H-convex sets") {
  CounterRng rng(14);
  std::vector<Body> centered;
  for (int i = 0; i < 4; ++i) centered.push_back(unit_area_ellipse(rng, true));
  const auto sum = ellipsoid_sum_chart(2);
  CHECK(sum->count(2) == 4);
  const TverbergCertificate c = quantitative_tverberg(centered, *sum, 2, 1.0);
  CHECK(c.objective_value >= 1.0 - 1e-6);
  CHECK(verify_certificate(to_json(c)).ok);
  std::vector<Body> off = {unit_area_ellipse(rng), unit_area_ellipse(rng), unit_area_ellipse(rng), unit_area_ellipse(rng)};
  CHECK_THROWS_AS(quantitative_tverberg(off, *sum, 2, 1.0), Error);

  std::vector<Body> segs;
  for (int i = 0; i < 5; ++i) {
    Mat dir(2, 1);
    dir << rng.uniform(0.1, 1), rng.uniform(0.1, 1);
    segs.push_back(Zonotope(v2(rng.uniform(-1, 1), rng.uniform(-1, 1)), dir * (1.5 / dir.sum()), Vec::Ones(1)));
  }
  const auto seg = segment_chart(2, 1.0);
  CHECK(seg->count(2) == 5);
  const TverbergCertificate s = quantitative_tverberg(segs, *seg, 2, 1.0);
  CHECK(s.objective_value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(verify_certificate(to_json(s)).ok);

  Mat hex(2, 6);
  for (int k = 0; k < 6; ++k) hex.col(k) = v2(std::cos(std::numbers::pi * k / 3), std::sin(std::numbers::pi * k / 3));
  std::vector<Body> hs;
  for (int i = 0; i < 7; ++i) {
    Vec sup(6);
    for (int k = 0; k < 6; ++k) sup[k] = rng.uniform(0.7, 1.3);
    hs.push_back(HConvexSet(hex, sup));
  }
  double least = 1e300;
  for (const auto& b : hs) least = std::min(least, volume(b));
  const auto hc = hconvex_chart(hex);
  CHECK(hc->count(2) == 7);
  const TverbergCertificate h = quantitative_tverberg(hs, *hc, 2, least);
  CHECK(h.objective_value >= least - 1e-6);
  CHECK(h.evidence.vertex_audit_passed);
  CHECK(verify_certificate(to_json(h)).ok);
}

TEST_CASE("volume version on unit squares") {
  CounterRng rng(15);
  std::vector<HPolytope> squares;
  for (int i = 0; i < 7; ++i) {
    const Vec c = v2(rng.uniform(-1, 1), rng.uniform(-1, 1));
    squares.push_back(HPolytope::box(c, c + v2(1, 1)));
  }
  const TverbergCertificate cert = volume_tverberg(squares, 2);
  CHECK(cert.objective_value >= 0.25);
  CHECK(cert.evidence.min_gap >= -1e-6);
  CHECK(verify_certificate(to_json(cert)).ok);
  std::vector<HPolytope> small(7, HPolytope::box(v2(0, 0), v2(0.5, 0.5)));
  CHECK_THROWS_AS(volume_tverberg(small, 2), Error);
}

TEST_CASE("preconditions and verifier rejections") {
  CounterRng rng(16);
  std::vector<Body> four;
  for (int i = 0; i < 4; ++i) four.push_back(unit_area_box(rng));
  const auto chart = make_chart("zonotope", four, 1.0);
  try {
    quantitative_tverberg(four, *chart, 2, 1.0);
    FAIL("expected PreconditionFailed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PreconditionFailed);
  }
  four.push_back(unit_area_box(rng));
  CHECK_THROWS_AS(quantitative_tverberg(four, *chart, 2, 1.5), Error);
  CHECK_THROWS_AS(make_chart("nonsense", four, 1.0), Error);

  const Json good = to_json(quantitative_tverberg(four, *chart, 2, 1.0));
  CHECK(verify_certificate(good).ok);
  Json grown = good;
  grown["decoded_witness"]["halfwidths"][0] = grown["decoded_witness"]["halfwidths"][0].get<double>() * 3;
  CHECK_FALSE(verify_certificate(grown).ok);
  Json shrunk = good;
  shrunk["decoded_witness"]["halfwidths"][0] = grown["decoded_witness"]["halfwidths"][0].get<double>() * 0.1;
  CHECK_FALSE(verify_certificate(shrunk).ok);
  Json overlap = good;
  overlap["partition"][1].push_back(overlap["partition"][0][0]);
  CHECK_FALSE(verify_certificate(overlap).ok);
  Json missing = good;
  missing.erase("inputs");
  CHECK_THROWS_AS(verify_certificate(missing), Error);
}
