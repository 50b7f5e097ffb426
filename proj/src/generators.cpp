#include "qhelly/generators.hpp"

namespace qh {

namespace {

void add_bound(std::vector<Halfspace>& hs, int d, double bound) {
  if (bound <= 0.0) return;
  for (int i = 0; i < d; ++i) {
    hs.push_back({Vec::Unit(d, i), bound});
    hs.push_back({-Vec::Unit(d, i), bound});
  }
}

Halfspace near_tangent(const Body& planted, const Vec& u, const GeneratorSpec& spec, CounterRng& rng) {
  const double s = support(planted, u);
  const double slack = rng.uniform() < spec.tight_fraction ? 0.0 : rng.uniform(0.0, spec.max_slack);
  return {u, s + slack};
}

}  // namespace

Mat random_spd(int d, double lo, double hi, CounterRng& rng) {
  Mat g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  }
  const Eigen::HouseholderQR<Mat> qr(g);
  const Mat q = qr.householderQ();
  Vec ev(d);
  for (int i = 0; i < d; ++i) ev[i] = rng.uniform(lo, hi);
  const Mat a = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (a + a.transpose());
}

std::vector<HPolytope> random_family(const GeneratorSpec& spec, std::uint64_t seed) {
  const int d = spec.dim;
  check_dim(d);
  if (spec.count < 1) throw Error(ErrorKind::InvalidInput, "generator count must be positive");
  const CounterRng master(seed);
  std::vector<HPolytope> out;
  if (spec.kind == GeneratorKind::ShiftedSlabs) {
    const double half = 0.5 * spec.overlap;
    for (int i = 0; i < spec.count; ++i) {
      CounterRng rng = master.split(static_cast<std::uint64_t>(i));
      std::vector<Halfspace> hs;
      const int axis = (i / 2) % d;
      // lower and upper slabs alternate; later members get extra room
      const double extra = i < 2 * d ? 0.0 : rng.uniform(0.0, spec.max_slack);
      if (i % 2 == 0) {
        hs.push_back({Vec::Unit(d, axis), half + extra});
      } else {
        hs.push_back({-Vec::Unit(d, axis), half + extra});
      }
      add_bound(hs, d, spec.bound > 0.0 ? spec.bound : 10.0);
      out.emplace_back(d, std::move(hs));
    }
    return out;
  }
  if (!spec.planted) throw Error(ErrorKind::InvalidInput, "generator needs a planted body");
  if (body_dim(*spec.planted) != d) throw Error(ErrorKind::DimensionMismatch, "planted body dimension");
  for (int i = 0; i < spec.count; ++i) {
    CounterRng rng = master.split(static_cast<std::uint64_t>(i));
    std::vector<Halfspace> hs;
    const int m = spec.kind == GeneratorKind::TangentHalfspaces ? 1 : spec.halfspaces_per_body;
    for (int j = 0; j < m; ++j) hs.push_back(near_tangent(*spec.planted, rng.unit_vector(d), spec, rng));
    add_bound(hs, d, spec.bound);
    out.emplace_back(d, std::move(hs));
  }
  return out;
}

}  // namespace qh
