#pragma once

#include <cstdint>
#include <vector>

#include "qhelly/geom.hpp"

namespace qh {

struct JohnCertificate {
  std::vector<Vec> directions;  // unit contact points
  Vec weights;
  double identity_residual = 0.0;  // max |sum w u u^T - I|
  double mean_residual = 0.0;      // |sum w u|
  /// True when no proper subset admits a decomposition (checked by LP per subset).
  bool critical = false;
  int restarts = 0;
  double full_area = 0.0;
  std::vector<double> subset_areas;  // MVIE after dropping body i
  double min_gap = 0.0;              // min(subset_areas) - full_area
};

struct JohnCounterexample {
  std::vector<HPolytope> family;  // halfspaces <x, u_i> <= 1
  JohnCertificate certificate;
};

/// Does some convex combination of (u u^T, u) over the given directions equal (I/d, 0)?
bool admits_john_decomposition(const std::vector<Vec>& directions);

/// Family of d(d+3)/2 tangent halfspaces whose MVIE is the unit ball while
/// every proper subfamily holds a larger ellipsoid. Only d = 2 is supported.
JohnCounterexample john_counterexample(int d = 2, std::uint64_t seed = 0, double bound = 10.0);

}  // namespace qh
