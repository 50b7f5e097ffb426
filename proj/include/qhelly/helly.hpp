#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qhelly/parallel.hpp"
#include "qhelly/solvers.hpp"

namespace qh {

using WitnessSolver = std::function<SolveReport(std::span<const HPolytope>)>;

/// Objective of a report as a number: +inf when unbounded, -inf when infeasible.
double score(const SolveReport& report);

inline constexpr int kMaxHellyFamily = 14;
inline constexpr double kPremiseSlack = 1e-9;

class PartitionMatroid {
 public:
  /// Classes must partition 0..n-1.
  explicit PartitionMatroid(std::vector<std::vector<int>> classes);
  static PartitionMatroid free(int n);

  int ground_size() const { return n_; }
  const std::vector<std::vector<int>>& classes() const { return classes_; }
  int rank(std::span<const int> s) const;
  bool independent(std::span<const int> s) const;

 private:
  std::vector<std::vector<int>> classes_;
  std::vector<int> class_of_;
  int n_ = 0;
};

struct HellyCheckResult {
  bool premise_holds = false;
  bool conclusion_holds = false;
  std::optional<std::vector<int>> violating_subset;
  std::optional<Body> witness;
  double conclusion_value = 0.0;
  /// Smallest subfamily objective over the enumerated subsets.
  double min_subset_value = 0.0;
};

/// Premise over every k-subset at threshold - 1e-9, conclusion on the whole
/// family at threshold - slack.
HellyCheckResult check_helly(std::span<const HPolytope> family, int k, const WitnessSolver& solver,
                             double threshold, double slack = 1e-6);

struct ColorfulResult {
  bool premise_holds = false;
  std::optional<int> class_index;
  std::optional<Body> witness;
};

inline constexpr int kMaxClassSize = 5;

/// expected_classes is the theorem's color count (d(d+3)/2 for ellipsoids).
ColorfulResult check_colorful_helly(const std::vector<std::vector<HPolytope>>& classes, const WitnessSolver& solver,
                                    double threshold, int expected_classes, double slack = 1e-6);

struct MatroidHellyResult {
  bool premise_holds = false;
  std::optional<std::vector<int>> tau;
  std::optional<Body> witness;
  double tau_value = 0.0;
  /// Smallest objective over maximal independent sets.
  double min_independent_value = 0.0;
  long distinct_solves = 0;
};

inline constexpr long kMaxIndependentSets = 100000;

MatroidHellyResult check_matroid_helly(std::span<const HPolytope> family, const PartitionMatroid& matroid,
                                       const WitnessSolver& solver, double threshold, int rank_bound,
                                       double slack = 1e-6);

enum class DiameterVariant { BoxDiameter, IncreasingDiameter, HConvexDiameter };

/// Premise: every k-subset holds a witness of diameter >= 1. Conclusion: the
/// family holds one of diameter >= d^{-1/2} (boxes, increasing segments) or
/// |H|^{-1/2} (H-convex sets).
HellyCheckResult check_diameter_theorems(std::span<const HPolytope> family, int k, DiameterVariant variant,
                                         const Mat& hset = {});

// ---------------------------------------------------------------------------
// Seeded theorem suites.

enum class Theorem { Box, Zonotope, Ellipsoid, HConvex, AxisEllipsoid, Centered, Translate, BoxDiameter, IncreasingDiameter };

std::string_view to_string(Theorem t);
std::optional<Theorem> theorem_from_string(std::string_view s);

struct TrialOutcome {
  int trial = 0;
  std::uint64_t seed = 0;
  int helly_number = 0;
  double threshold = 0.0;
  bool premise_holds = false;
  bool conclusion_holds = false;
  /// Full-family optimum against the weakest subfamily optimum.
  double full_value = 0.0;
  double min_subset_value = 0.0;
  bool tight_holds = false;
  std::vector<HPolytope> family;

  bool failed() const { return (premise_holds && !conclusion_holds) || !tight_holds; }
};

struct SuiteReport {
  Theorem theorem = Theorem::Box;
  int dim = 2;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<TrialOutcome> outcomes;  // sorted by trial index

  int failures() const;
  int premise_count() const;
};

SuiteReport run_suite(Theorem theorem, int d, int trials, std::uint64_t seed, int threads = 0);

}  // namespace qh
