#include "qhelly/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qh {

namespace {

constexpr double kCostEps = 1e-10;
constexpr double kPivotEps = 1e-10;
constexpr double kRatioTie = 1e-12;
constexpr double kPhaseOneTol = 1e-9;
constexpr int kMaxPivots = 200000;

// Dense tableau in the form B^{-1}[A | b]; column `rhs` holds the basic values.
struct Tableau {
  Mat t;
  std::vector<int> basis;
  int ncols = 0;  // structural + slack + artificial columns
  int rhs = 0;
  int pivots = 0;

  void pivot(int row, int col) {
    const double p = t(row, col);
    t.row(row) /= p;
    for (int i = 0; i < t.rows(); ++i) {
      if (i == row) continue;
      const double f = t(i, col);
      if (f != 0.0) t.row(i) -= f * t.row(row);
    }
    basis[row] = col;
    ++pivots;
    if (pivots > kMaxPivots) throw Error(ErrorKind::NumericalFailure, "simplex pivot limit");
  }

  // Maximizes cost^T x over columns with allowed[j]; Bland's rule throughout.
  LpStatus run(const Vec& cost, const std::vector<bool>& allowed) {
    const int m = static_cast<int>(t.rows());
    std::vector<bool> is_basic(ncols, false);
    for (;;) {
      std::fill(is_basic.begin(), is_basic.end(), false);
      for (int b : basis) is_basic[b] = true;
      int enter = -1;
      for (int j = 0; j < ncols; ++j) {
        if (!allowed[j] || is_basic[j]) continue;
        double r = cost[j];
        for (int i = 0; i < m; ++i) r -= cost[basis[i]] * t(i, j);
        if (r > kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double a = t(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = t(i, rhs) / a;
        if (leave < 0 || ratio < best - kRatioTie) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + kRatioTie && basis[i] < basis[leave]) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LinearProgram::LinearProgram(int n) : num_vars(n), objective(Vec::Zero(n)), nonnegative(n, false) {}

LpResult solve_lp(const LinearProgram& lp) {
  const int n = lp.num_vars;
  const int m = static_cast<int>(lp.rows.size());
  for (const auto& row : lp.rows) {
    if (row.coeffs.size() != n) throw Error(ErrorKind::DimensionMismatch, "lp row size");
  }
  // Column layout: for each variable one column (nonnegative) or a +/- pair.
  std::vector<int> plus(n), minus(n, -1);
  int col = 0;
  for (int j = 0; j < n; ++j) {
    plus[j] = col++;
    if (!lp.nonnegative[j]) minus[j] = col++;
  }
  const int structural = col;
  int n_slack = 0, n_art = 0;
  for (const auto& row : lp.rows) {
    if (row.type != RowType::Equal) ++n_slack;
  }
  // Entries at rounding level relative to the whole matrix are zeroed so that
  // row scaling cannot blow noise up into a constraint.
  double global = 0.0;
  for (const auto& row : lp.rows) {
    if (row.coeffs.size()) global = std::max(global, row.coeffs.cwiseAbs().maxCoeff());
  }
  const double zero_tol = 1e-14 * std::max(1.0, global);
  std::vector<Vec> coeffs;
  coeffs.reserve(lp.rows.size());
  for (const auto& row : lp.rows) coeffs.push_back((row.coeffs.array().abs() <= zero_tol).select(0.0, row.coeffs));

  // Rows are scaled to unit max-norm and flipped to a nonnegative rhs.
  std::vector<double> sign(m, 1.0), scale(m, 1.0);
  std::vector<RowType> type(m);
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    double s = coeffs[i].size() ? coeffs[i].cwiseAbs().maxCoeff() : 0.0;
    scale[i] = s > 0 ? 1.0 / s : 1.0;
    type[i] = row.type;
    if (row.rhs * scale[i] < 0) {
      sign[i] = -1.0;
      if (type[i] == RowType::LessEqual) type[i] = RowType::GreaterEqual;
      else if (type[i] == RowType::GreaterEqual) type[i] = RowType::LessEqual;
    }
    if (type[i] != RowType::LessEqual) ++n_art;
  }
  Tableau tab;
  tab.ncols = structural + n_slack + n_art;
  tab.rhs = tab.ncols;
  tab.t = Mat::Zero(m, tab.ncols + 1);
  tab.basis.assign(m, -1);
  int slack_col = structural, art_col = structural + n_slack;
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    const double f = sign[i] * scale[i];
    for (int j = 0; j < n; ++j) {
      tab.t(i, plus[j]) = f * coeffs[i][j];
      if (minus[j] >= 0) tab.t(i, minus[j]) = -f * coeffs[i][j];
    }
    tab.t(i, tab.rhs) = f * row.rhs;
    if (row.type != RowType::Equal) {
      const double s = (type[i] == RowType::LessEqual) ? 1.0 : -1.0;
      tab.t(i, slack_col) = s;
      if (type[i] == RowType::LessEqual) tab.basis[i] = slack_col;
      ++slack_col;
    }
    if (type[i] != RowType::LessEqual) {
      tab.t(i, art_col) = 1.0;
      tab.basis[i] = art_col++;
    }
  }

  std::vector<bool> allowed(tab.ncols, true);
  if (n_art > 0) {
    Vec cost = Vec::Zero(tab.ncols);
    for (int j = structural + n_slack; j < tab.ncols; ++j) cost[j] = -1.0;
    tab.run(cost, allowed);
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) {
      if (tab.basis[i] >= structural + n_slack) infeas += tab.t(i, tab.rhs);
    }
    if (infeas > kPhaseOneTol) {
      LpResult res;
      res.status = LpStatus::Infeasible;
      res.pivots = tab.pivots;
      return res;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (int i = 0; i < static_cast<int>(tab.basis.size());) {
      if (tab.basis[i] < structural + n_slack) {
        ++i;
        continue;
      }
      int j_piv = -1;
      for (int j = 0; j < structural + n_slack; ++j) {
        if (std::abs(tab.t(i, j)) > 1e-9) {
          j_piv = j;
          break;
        }
      }
      if (j_piv >= 0) {
        tab.pivot(i, j_piv);
        ++i;
      } else {
        const int rows = static_cast<int>(tab.t.rows());
        Mat reduced(rows - 1, tab.t.cols());
        reduced << tab.t.topRows(i), tab.t.bottomRows(rows - i - 1);
        tab.t = std::move(reduced);
        tab.basis.erase(tab.basis.begin() + i);
      }
    }
    for (int j = structural + n_slack; j < tab.ncols; ++j) allowed[j] = false;
  }

  const double osign = (lp.sense == Sense::Maximize) ? 1.0 : -1.0;
  Vec cost = Vec::Zero(tab.ncols);
  for (int j = 0; j < n; ++j) {
    cost[plus[j]] = osign * lp.objective[j];
    if (minus[j] >= 0) cost[minus[j]] = -osign * lp.objective[j];
  }
  LpResult res;
  const LpStatus st = tab.run(cost, allowed);
  res.pivots = tab.pivots;
  if (st == LpStatus::Unbounded) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  Vec colval = Vec::Zero(tab.ncols);
  for (std::size_t i = 0; i < tab.basis.size(); ++i) colval[tab.basis[i]] = tab.t(i, tab.rhs);
  res.x = Vec::Zero(n);
  for (int j = 0; j < n; ++j) {
    res.x[j] = colval[plus[j]] - (minus[j] >= 0 ? colval[minus[j]] : 0.0);
  }
  res.value = lp.objective.dot(res.x);
  res.status = LpStatus::Optimal;

  // Residual audit of the recovered point against the unscaled rows.
  double scale_x = 1.0 + res.x.cwiseAbs().maxCoeff();
  for (const auto& row : lp.rows) {
    const double lhs = row.coeffs.dot(res.x);
    const double slack_tol = 1e-7 * (1.0 + std::abs(row.rhs) + row.coeffs.cwiseAbs().maxCoeff() * scale_x);
    bool bad = false;
    switch (row.type) {
      case RowType::LessEqual: bad = lhs > row.rhs + slack_tol; break;
      case RowType::GreaterEqual: bad = lhs < row.rhs - slack_tol; break;
      case RowType::Equal: bad = std::abs(lhs - row.rhs) > slack_tol; break;
    }
    if (bad) throw Error(ErrorKind::NumericalFailure, "simplex solution violates a constraint");
  }
  return res;
}

LpResult lp_solve(const Vec& objective, const std::vector<std::pair<Vec, double>>& constraints,
                  Sense sense) {
  LinearProgram lp(static_cast<int>(objective.size()));
  lp.objective = objective;
  lp.sense = sense;
  for (const auto& [a, b] : constraints) lp.add_le(a, b);
  return solve_lp(lp);
}

}  // namespace qh
