#include "qhelly/john.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qhelly/lp.hpp"
#include "qhelly/rng.hpp"
#include "qhelly/solvers.hpp"

namespace qh {

namespace {

// Rows of sum mu (u u^T, u, 1) = (I/d, 0, 1); returns the LP with mu >= s
// maximized when `margin` is set.
LinearProgram decomposition_lp(const std::vector<Vec>& u, bool margin) {
  const int n = static_cast<int>(u.size());
  const int d = static_cast<int>(u.front().size());
  LinearProgram lp(n + (margin ? 1 : 0));
  for (int i = 0; i < n; ++i) lp.nonnegative[i] = true;
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      Vec row = Vec::Zero(lp.num_vars);
      for (int i = 0; i < n; ++i) row[i] = u[i][a] * u[i][b];
      lp.add_eq(row, a == b ? 1.0 / d : 0.0);
    }
    Vec row = Vec::Zero(lp.num_vars);
    for (int i = 0; i < n; ++i) row[i] = u[i][a];
    lp.add_eq(row, 0.0);
  }
  Vec ones = Vec::Zero(lp.num_vars);
  ones.head(n).setOnes();
  lp.add_eq(ones, 1.0);
  if (margin) {
    lp.objective[n] = 1.0;
    for (int i = 0; i < n; ++i) {
      Vec row = Vec::Zero(lp.num_vars);
      row[i] = -1.0;
      row[n] = 1.0;
      lp.add_le(row, 0.0);
    }
  }
  return lp;
}

bool all_proper_subsets_fail(const std::vector<Vec>& u) {
  const int n = static_cast<int>(u.size());
  for (int mask = 1; mask < (1 << n) - 1; ++mask) {
    std::vector<Vec> sub;
    for (int i = 0; i < n; ++i) {
      if (mask & (1 << i)) sub.push_back(u[i]);
    }
    if (admits_john_decomposition(sub)) return false;
  }
  return true;
}

}  // namespace

bool admits_john_decomposition(const std::vector<Vec>& directions) {
  if (directions.empty()) return false;
  return solve_lp(decomposition_lp(directions, false)).optimal();
}

JohnCounterexample john_counterexample(int d, std::uint64_t seed, double bound) {
  if (d != 2) throw Error(ErrorKind::DimensionTooLarge, "counterexample construction supports d = 2");
  const int n = d * (d + 3) / 2;
  JohnCertificate cert;

  std::vector<Vec> u;
  Vec w;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * std::numbers::pi * k / n;
    u.push_back(Vec(Eigen::Vector2d(std::cos(a), std::sin(a))));
  }
  w = Vec::Constant(n, static_cast<double>(d) / n);
  bool found = all_proper_subsets_fail(u);
  CounterRng rng(seed);
  while (!found) {
    if (++cert.restarts > 10000) throw Error(ErrorKind::SearchFailed, "no critical contact configuration found");
    u.clear();
    for (int k = 0; k < n; ++k) u.push_back(rng.unit_vector(d));
    const auto res = solve_lp(decomposition_lp(u, true));
    if (!res.optimal() || res.value <= 1e-6) continue;
    if (!all_proper_subsets_fail(u)) continue;
    w = d * res.x.head(n);
    found = true;
  }
  cert.critical = true;
  cert.directions = u;
  cert.weights = w;

  Mat s = Mat::Zero(d, d);
  Vec m = Vec::Zero(d);
  for (int i = 0; i < n; ++i) {
    s += w[i] * u[i] * u[i].transpose();
    m += w[i] * u[i];
  }
  cert.identity_residual = (s - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  cert.mean_residual = m.norm();

  JohnCounterexample out;
  for (int i = 0; i < n; ++i) out.family.emplace_back(d, std::vector<Halfspace>{{u[i], 1.0}});

  const HPolytope box = HPolytope::box(Vec::Constant(d, -bound), Vec::Constant(d, bound));
  auto area = [&](const std::vector<int>& keep) {
    std::vector<HPolytope> fam{box};
    for (int i : keep) fam.push_back(out.family[i]);
    return max_volume_ellipsoid(fam).objective_value;
  };
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  cert.full_area = area(all);
  cert.min_gap = std::numeric_limits<double>::infinity();
  for (int drop = 0; drop < n; ++drop) {
    std::vector<int> keep;
    for (int i = 0; i < n; ++i) {
      if (i != drop) keep.push_back(i);
    }
    cert.subset_areas.push_back(area(keep));
    cert.min_gap = std::min(cert.min_gap, cert.subset_areas.back() - cert.full_area);
  }
  out.certificate = std::move(cert);
  return out;
}

}  // namespace qh
