#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qhelly/geom.hpp"

namespace qh {

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIter };

std::string_view to_string(SolveStatus s);

struct SolveReport {
  std::optional<Body> witness;
  double objective_value = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
  SolveStatus status = SolveStatus::Infeasible;
  bool degenerate = false;
  /// Solver-specific auxiliary values (trace, axis-length sum, bounds, ...).
  std::map<std::string, double> metrics;

  bool optimal() const { return status == SolveStatus::Optimal; }
};

struct SolverOptions {
  double gap_tol = 1e-10;
  int max_iter = 5000;
};

enum class EllipsoidConstraint { Free, CenteredAtOrigin, AxisParallel };
enum class HConvexObjective { Volume, Diameter };
enum class SegmentNorm { L1, L2 };

using Family = std::span<const HPolytope>;

/// Largest-volume axis-parallel box in the intersection of the family.
SolveReport max_volume_box(Family family, const SolverOptions& opts = {});

/// Axis box maximizing the sum of its side lengths (an LP).
SolveReport max_perimeter_box(Family family);

/// Box maximizing the standard Gaussian measure.
SolveReport max_gaussian_box(Family family, const SolverOptions& opts = {});

/// Largest-volume zonotope with the given (d x k) directions.
SolveReport max_volume_zonotope(Family family, const Mat& directions, const SolverOptions& opts = {});

/// Maximum-volume inscribed ellipsoid, optionally centered at the origin or axis-parallel.
SolveReport max_volume_ellipsoid(Family family, EllipsoidConstraint constraint = EllipsoidConstraint::Free,
                                 const SolverOptions& opts = {});

/// Inscribed ellipsoid a + A B_d maximizing tr(A). metrics: "trace", "axis_length_sum".
SolveReport max_trace_ellipsoid(Family family, const SolverOptions& opts = {});

/// Minimum-volume enclosing ellipsoid (Khachiyan iteration with away steps).
SolveReport min_enclosing_ellipsoid(std::span<const Vec> points, double tol = 1e-7);

/// Best H-convex witness in the plane. Volume is exact; Diameter sweeps
/// width directions and reports metrics["upper_bound"].
SolveReport max_hconvex(Family family, const Mat& hset, HConvexObjective objective,
                        const SolverOptions& opts = {});

/// Largest t such that a translate of t * shape fits in the intersection.
SolveReport max_homothet(Family family, const HPolytope& shape);

/// Axis box of largest Euclidean diameter (direction sweep over half-width LPs).
SolveReport max_box_diameter(Family family);

/// Longest increasing segment (endpoints comparable coordinatewise) in the given norm.
SolveReport max_increasing_segment(Family family, SegmentNorm norm);

// ---------------------------------------------------------------------------
// Problem description used by the CLI and the harness.

enum class WitnessClassKind { AxisBox, Zonotope, Ellipsoid, EllipsoidCentered, EllipsoidAxisParallel, HConvex };
enum class Objective { Volume, Perimeter, Trace, Diameter, Gaussian };

struct WitnessClass {
  WitnessClassKind kind = WitnessClassKind::AxisBox;
  Mat directions;  // zonotope directions or H set

  static WitnessClass box() { return {WitnessClassKind::AxisBox, {}}; }
  static WitnessClass zonotope(Mat dirs) { return {WitnessClassKind::Zonotope, std::move(dirs)}; }
  static WitnessClass ellipsoid() { return {WitnessClassKind::Ellipsoid, {}}; }
  static WitnessClass hconvex(Mat h) { return {WitnessClassKind::HConvex, std::move(h)}; }
};

struct WitnessProblem {
  std::vector<HPolytope> family;
  WitnessClass witness_class;
  Objective objective = Objective::Volume;

  /// Throws InvalidInput for class/objective pairs without a solver.
  WitnessProblem(std::vector<HPolytope> fam, WitnessClass wc, Objective obj);
};

SolveReport solve(const WitnessProblem& problem, const SolverOptions& opts = {});

// ---------------------------------------------------------------------------
// Simultaneous epsilon-approximation by a translate of one witness.

struct ApproxResult {
  bool feasible = false;
  double eps = 0.0;
  std::optional<Body> witness;  // centered at the origin
  Vec translate;  // shared by every family member
};

/// Witness classes for approximation: identity directions means AxisBox.
struct ApproxClass {
  Mat directions;
  bool axis_box = true;

  static ApproxClass box(int d) { return {Mat::Identity(d, d), true}; }
  static ApproxClass zonotope(Mat dirs) { return {std::move(dirs), false}; }
};

ApproxResult simultaneous_approx(Family family, const ApproxClass& cls, double eps);
ApproxResult min_eps_approx(Family family, const ApproxClass& cls, double bracket_tol = 1e-6);

}  // namespace qh
