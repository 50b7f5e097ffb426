#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "qhelly/rng.hpp"
#include "qhelly/solvers.hpp"

namespace qh {

/// Abstract LP-type problem over constraints 0..num_constraints-1.
/// `value` must be nondecreasing under adding constraints (use -volume for
/// maximization problems); `violates` compares a solution with one constraint.
struct LpTypeProblem {
  int num_constraints = 0;
  int combinatorial_dim = 0;
  std::function<SolveReport(std::span<const int>)> basis_oracle;
  std::function<bool(const SolveReport&, int)> violates;
  std::function<double(const SolveReport&)> value;
};

struct RunStats {
  long oracle_calls = 0;
  long violation_tests = 0;
  int recursion_depth = 0;
  std::uint64_t seed = 0;
};

struct LpTypeResult {
  SolveReport report;
  std::vector<int> basis;  // sorted; basis_oracle(basis) reproduces report
  RunStats stats;
};

inline constexpr double kViolationTol = 1e-7;

LpTypeResult solve(const LpTypeProblem& problem, std::uint64_t seed);

/// Largest-volume box, combinatorial dimension 2d.
LpTypeProblem box_lp_type(std::shared_ptr<const std::vector<HPolytope>> family);

/// Smallest enclosing ball of points, combinatorial dimension d+1. The
/// report's witness is an Ellipsoid (or a zero-width AxisBox for one point)
/// and metrics["radius"] holds the radius.
LpTypeProblem enclosing_ball_lp_type(std::shared_ptr<const std::vector<Vec>> points);

/// Smallest simultaneous approximation eps, combinatorial dimension k+d+1.
LpTypeProblem approx_lp_type(std::shared_ptr<const std::vector<HPolytope>> family, ApproxClass cls);

struct BenchRow {
  int n = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  long oracle_calls = 0;
  long violation_tests = 0;
  double objective = 0.0;
};

using LpTypeGenerator = std::function<LpTypeProblem(int n, CounterRng& rng)>;

/// One row per (n, trial); trial seeds are split from `seed`.
std::vector<BenchRow> lp_type_bench(const LpTypeGenerator& gen, std::span<const int> sizes, int trials,
                                    std::uint64_t seed);

struct CallsRow {
  int n = 0;
  double mean_oracle_calls = 0.0;
};

std::vector<CallsRow> calibrate_calls(const LpTypeGenerator& gen, std::span<const int> sizes, int trials,
                                      std::uint64_t seed);

/// Uniform points in the unit cube, wrapped as an enclosing-ball problem.
LpTypeGenerator enclosing_ball_generator(int d);

/// Single random halfspaces tangent near the unit ball, clipped to [-10, 10]^d.
LpTypeGenerator max_box_generator(int d);

}  // namespace qh
