#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qhelly/geom.hpp"
#include "qhelly/io.hpp"

namespace qh {

struct TverbergPartition {
  std::vector<std::vector<int>> parts;
  Vec common_point;
  /// weights[j][i]: convex weight of point parts[j][i] reproducing common_point.
  std::vector<Vec> weights;
};

inline constexpr long kMaxPartitionSpace = 10000000;

/// First partition into exactly r nonempty parts whose hulls meet, in order of
/// part-size imbalance then lexicographic restricted-growth order.
TverbergPartition tverberg_points(const std::vector<Vec>& points, int r, int threads = 1);

/// Does conv(parts) share a point? Returns it with the weights.
std::optional<TverbergPartition> common_point(const std::vector<Vec>& points,
                                              const std::vector<std::vector<int>>& parts);

// ---------------------------------------------------------------------------
// Charts: parameter spaces in which convex combination of parameters keeps
// the decoded witness inside the convex hull of the inputs.

class Chart {
 public:
  virtual ~Chart() = default;
  virtual std::string name() const = 0;
  /// Coordinates searched by the affine Tverberg step.
  virtual int dim() const = 0;
  /// Monotone coordinates combined per part and resolved by decode.
  virtual int hidden() const { return 0; }
  /// Inputs needed for r parts.
  virtual int count(int r) const { return (r - 1) * (dim() + 1) + 1; }
  /// Normalizes an input witness before lifting (e.g. shrinking a segment).
  virtual Body prepare(const Body& body) const { return body; }
  /// dim() coordinates followed by hidden() coordinates.
  virtual Vec lift(const Body& body) const = 0;
  virtual Body decode(const Vec& coords, const std::vector<Vec>& part_hidden) const = 0;
  virtual double objective(const Body& body) const = 0;

  Body decode(const Vec& full) const;
  /// Convex combination of lifted points.
  Vec combine(const std::vector<Vec>& lifted, const Vec& weights) const;
};

/// Zonotopes with fixed directions; the last coefficient is hidden. With
/// as_box the directions are the standard basis and AxisBoxes are produced.
std::unique_ptr<Chart> zonotope_chart(const Mat& directions, bool as_box = false);
/// H-convex sets by support numbers; the last support is hidden.
std::unique_ptr<Chart> hconvex_chart(const Mat& hset);
/// Ellipsoids (a, vech A), rescaled on decode to the target volume when it is positive.
std::unique_ptr<Chart> ellipsoid_det_chart(int d, double target_volume);
/// Centered ellipsoids A / (sum of entries of A); the normalizing factor is hidden.
std::unique_ptr<Chart> ellipsoid_sum_chart(int d);
/// Increasing segments of fixed l1 length as (center, w >= 0) with w_d implied.
std::unique_ptr<Chart> segment_chart(int d, double length);

/// Builds a chart by CLI name from sample inputs.
std::unique_ptr<Chart> make_chart(const std::string& name, const std::vector<Body>& inputs, double threshold);

// ---------------------------------------------------------------------------

struct AuditTable {
  std::vector<Vec> directions;
  Mat gaps;  // parts x directions
  double min_gap = 0.0;
  bool vertex_audit_run = false;
  bool vertex_audit_passed = true;
  double max_vertex_residual = 0.0;
};

/// Quasi-uniform unit directions: evenly spaced angles in the plane, a
/// Fibonacci lattice in 3D, fixed-seed Gaussian directions otherwise.
std::vector<Vec> audit_directions(int d, int m);
int default_audit_directions(int d);

AuditTable containment_audit(const Body& witness, const std::vector<std::vector<Body>>& parts, int directions = 0);

struct TverbergCertificate {
  std::string chart;
  int r = 2;
  double threshold = 0.0;
  std::vector<Body> inputs;
  std::vector<std::vector<int>> partition;
  Vec lifted_common_point;
  std::vector<Vec> part_hidden;
  Body decoded_witness;
  double objective_value = 0.0;
  AuditTable evidence;
  /// True when the nonlinear weight search produced the common point.
  bool weight_search = false;
};

TverbergCertificate quantitative_tverberg(const std::vector<Body>& witnesses, const Chart& chart, int r,
                                          double threshold, int threads = 1);

/// MVIE of each unit-volume planar body, then the ellipsoid chart.
TverbergCertificate volume_tverberg(const std::vector<HPolytope>& bodies, int r, int threads = 1);

Json to_json(const TverbergCertificate& cert);

struct VerifyResult {
  bool ok = false;
  std::vector<std::string> problems;
  double min_gap = 0.0;
  double objective_value = 0.0;
};

/// Re-checks a certificate from its JSON alone: partition shape, objective
/// of the witness, and support containment in every part's hull.
VerifyResult verify_certificate(const Json& cert);

}  // namespace qh
