#pragma once

#include <utility>
#include <vector>

#include "qhelly/geom.hpp"

namespace qh {

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class Sense { Maximize, Minimize };
enum class RowType { LessEqual, GreaterEqual, Equal };

struct LpRow {
  Vec coeffs;
  RowType type = RowType::LessEqual;
  double rhs = 0.0;
};

/// Dense linear program. Variables are free unless marked nonnegative.
struct LinearProgram {
  int num_vars = 0;
  Vec objective;
  Sense sense = Sense::Maximize;
  std::vector<LpRow> rows;
  std::vector<bool> nonnegative;

  explicit LinearProgram(int n);

  void add_le(Vec a, double b) { rows.push_back({std::move(a), RowType::LessEqual, b}); }
  void add_ge(Vec a, double b) { rows.push_back({std::move(a), RowType::GreaterEqual, b}); }
  void add_eq(Vec a, double b) { rows.push_back({std::move(a), RowType::Equal, b}); }
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Vec x;
  int pivots = 0;

  bool optimal() const { return status == LpStatus::Optimal; }
};

/// Two-phase dense simplex with Bland's rule. Deterministic for a fixed row
/// and column order. Throws NumericalFailure when the returned point does not
/// satisfy the constraints to working precision.
LpResult solve_lp(const LinearProgram& lp);

/// max/min <objective, x> subject to <a_i, x> <= b_i, x free.
LpResult lp_solve(const Vec& objective, const std::vector<std::pair<Vec, double>>& constraints,
                  Sense sense = Sense::Maximize);

}  // namespace qh
