#include "qhelly/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "qhelly/barrier.hpp"
#include "qhelly/lp.hpp"
#include "qhelly/rng.hpp"

namespace qh {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::MaxIter: return "MaxIter";
  }
  return "Unknown";
}

namespace {

struct Constraints {
  int d = 0;
  Mat g;  // m x d, unit rows
  Vec b;
};

Constraints collect(Family family) {
  if (family.empty()) throw Error(ErrorKind::InvalidInput, "empty family");
  Constraints c;
  c.d = family.front().dim();
  std::size_t m = 0;
  for (const auto& p : family) {
    if (p.dim() != c.d) throw Error(ErrorKind::DimensionMismatch, "family dimensions differ");
    m += p.size();
  }
  c.g.resize(static_cast<Eigen::Index>(m), c.d);
  c.b.resize(static_cast<Eigen::Index>(m));
  Eigen::Index i = 0;
  for (const auto& p : family) {
    for (const auto& h : p.halfspaces()) {
      c.g.row(i) = h.normal.transpose();
      c.b[i] = h.offset;
      ++i;
    }
  }
  return c;
}

HPolytope as_polytope(const Constraints& c) {
  std::vector<Halfspace> hs;
  for (int i = 0; i < c.g.rows(); ++i) hs.push_back({c.g.row(i).transpose(), c.b[i]});
  return HPolytope(c.d, std::move(hs));
}

struct Ball {
  bool feasible = false;
  Vec center;
  double radius = 0.0;
};

// Largest inscribed ball, radius capped so unbounded regions still give a point.
Ball chebyshev(const Constraints& c, double cap = 1e6) {
  const int d = c.d;
  LinearProgram lp(d + 1);
  lp.objective[d] = 1.0;
  lp.nonnegative[d] = true;
  for (int i = 0; i < c.g.rows(); ++i) {
    Vec row(d + 1);
    row.head(d) = c.g.row(i).transpose();
    row[d] = 1.0;
    lp.add_le(row, c.b[i]);
  }
  Vec capr = Vec::Zero(d + 1);
  capr[d] = 1.0;
  lp.add_le(capr, cap);
  const auto res = solve_lp(lp);
  Ball ball;
  if (!res.optimal()) return ball;
  ball.feasible = true;
  ball.center = res.x.head(d);
  ball.radius = res.x[d];
  return ball;
}

// Some direction (dc, dw >= 0) with sum(dw) > 0 keeps a + cols(coef) * w feasible.
bool growth_unbounded(const Constraints& c, const Mat& width_coef) {
  const int d = c.d;
  const int k = static_cast<int>(width_coef.cols());
  LinearProgram lp(d + k);
  for (int j = 0; j < k; ++j) {
    lp.nonnegative[d + j] = true;
    lp.objective[d + j] = 1.0;
  }
  for (int i = 0; i < c.g.rows(); ++i) {
    Vec row(d + k);
    row.head(d) = c.g.row(i).transpose();
    row.tail(k) = width_coef.row(i).transpose();
    lp.add_le(row, 0.0);
  }
  Vec norm = Vec::Zero(d + k);
  norm.tail(k).setOnes();
  lp.add_le(norm, 1.0);
  const auto res = solve_lp(lp);
  return res.optimal() && res.value > 1e-9;
}

SolveReport status_report(SolveStatus s) {
  SolveReport r;
  r.status = s;
  return r;
}

SolveStatus barrier_status(const BarrierResult& br) {
  return br.converged ? SolveStatus::Optimal : SolveStatus::MaxIter;
}

BarrierOptions barrier_options(const SolverOptions& o) {
  BarrierOptions bo;
  bo.gap_tol = o.gap_tol;
  bo.max_total = o.max_iter;
  return bo;
}

// --- boxes --------------------------------------------------------------------

class BoxVolumeProblem : public BarrierProblem {
 public:
  BoxVolumeProblem(const Constraints& c) : d_(c.d) {
    Mat a(c.g.rows(), 2 * d_);
    a << c.g, c.g.cwiseAbs();
    rows_ = LinearBarrier(a, c.b);
  }
  int size() const override { return 2 * d_; }
  bool objective(const Vec& x, double& f, Vec* g, Mat* h) const override {
    const Vec w = x.tail(d_);
    if ((w.array() <= 0.0).any()) return false;
    f = -w.array().log().sum();
    if (g) {
      *g = Vec::Zero(2 * d_);
      g->tail(d_) = -w.cwiseInverse();
    }
    if (h) {
      *h = Mat::Zero(2 * d_, 2 * d_);
      h->bottomRightCorner(d_, d_).diagonal() = w.cwiseInverse().cwiseAbs2();
    }
    return true;
  }
  bool barrier(const Vec& x, double& phi, Vec* g, Mat* h) const override { return rows_.eval(x, phi, g, h); }
  double barrier_parameter() const override { return rows_.rows(); }

 private:
  int d_;
  LinearBarrier rows_;
};

class BoxGaussianProblem : public BoxVolumeProblem {
 public:
  BoxGaussianProblem(const Constraints& c) : BoxVolumeProblem(c), d_(c.d) {}
  bool objective(const Vec& x, double& f, Vec* g, Mat* h) const override {
    f = 0.0;
    if (g) *g = Vec::Zero(2 * d_);
    if (h) *h = Mat::Zero(2 * d_, 2 * d_);
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const double inv_sqrt2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    auto pdf = [&](double t) { return inv_sqrt2pi * std::exp(-0.5 * t * t); };
    for (int i = 0; i < d_; ++i) {
      const double c = x[i], w = x[d_ + i];
      if (w <= 0.0) return false;
      const double hi = c + w, lo = c - w;
      // Phi(hi) - Phi(lo) through erfc for accuracy in the tails.
      double p;
      if (lo > 0) p = 0.5 * (std::erfc(lo * inv_sqrt2) - std::erfc(hi * inv_sqrt2));
      else if (hi < 0) p = 0.5 * (std::erfc(-hi * inv_sqrt2) - std::erfc(-lo * inv_sqrt2));
      else p = 1.0 - 0.5 * (std::erfc(hi * inv_sqrt2) + std::erfc(-lo * inv_sqrt2));
      if (!(p > 0.0)) return false;
      f -= std::log(p);
      const double ph = pdf(hi), pl = pdf(lo);
      const double gc = ph - pl, gw = ph + pl;
      const double hcc = -hi * ph + lo * pl, hcw = -hi * ph - lo * pl;
      if (g) {
        (*g)[i] -= gc / p;
        (*g)[d_ + i] -= gw / p;
      }
      if (h) {
        (*h)(i, i) += -hcc / p + gc * gc / (p * p);
        (*h)(d_ + i, d_ + i) += -hcc / p + gw * gw / (p * p);
        (*h)(i, d_ + i) += -hcw / p + gc * gw / (p * p);
        (*h)(d_ + i, i) = (*h)(i, d_ + i);
      }
    }
    return true;
  }

 private:
  int d_;
};

// --- zonotopes ----------------------------------------------------------------

class ZonotopeVolumeProblem : public BarrierProblem {
 public:
  ZonotopeVolumeProblem(const Constraints& c, const Mat& dirs) : d_(c.d), k_(static_cast<int>(dirs.cols())), dirs_(dirs) {
    Mat a(c.g.rows() + k_, d_ + k_);
    a.topLeftCorner(c.g.rows(), d_) = c.g;
    a.topRightCorner(c.g.rows(), k_) = 0.5 * (c.g * dirs).cwiseAbs();
    a.bottomRows(k_).setZero();
    a.bottomRightCorner(k_, k_) = -Mat::Identity(k_, k_);
    Vec b(c.g.rows() + k_);
    b << c.b, Vec::Zero(k_);
    rows_ = LinearBarrier(a, b);
  }
  int size() const override { return d_ + k_; }
  bool objective(const Vec& x, double& f, Vec* g, Mat* h) const override {
    const Vec alpha = x.tail(k_);
    Vec gv;
    Mat hv;
    const double vol = zonotope_volume(dirs_, alpha, g ? &gv : nullptr, h ? &hv : nullptr);
    if (!(vol > 0.0)) return false;
    f = -std::log(vol);
    if (g) {
      *g = Vec::Zero(d_ + k_);
      g->tail(k_) = -gv / vol;
    }
    if (h) {
      *h = Mat::Zero(d_ + k_, d_ + k_);
      h->bottomRightCorner(k_, k_) = -hv / vol + (gv * gv.transpose()) / (vol * vol);
    }
    return true;
  }
  bool barrier(const Vec& x, double& phi, Vec* g, Mat* h) const override { return rows_.eval(x, phi, g, h); }
  double barrier_parameter() const override { return rows_.rows(); }

 private:
  int d_, k_;
  Mat dirs_;
  LinearBarrier rows_;
};

// --- ellipsoids ---------------------------------------------------------------

// x = (center (optional), theta) with A = sum_k theta_k E_k.
struct EllipsoidParam {
  int d = 0;
  bool free_center = true;
  bool diagonal = false;
  std::vector<Mat> basis;

  EllipsoidParam(int dim, EllipsoidConstraint c) : d(dim) {
    free_center = c != EllipsoidConstraint::CenteredAtOrigin;
    diagonal = c == EllipsoidConstraint::AxisParallel;
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        if (diagonal && j != i) continue;
        Mat e = Mat::Zero(d, d);
        e(i, j) = 1.0;
        e(j, i) = 1.0;
        basis.push_back(e);
      }
    }
  }
  int nc() const { return free_center ? d : 0; }
  int np() const { return static_cast<int>(basis.size()); }
  int size() const { return nc() + np(); }
  Mat shape(const Vec& x) const {
    Mat a = Mat::Zero(d, d);
    for (int k = 0; k < np(); ++k) a += x[nc() + k] * basis[k];
    return a;
  }
  Vec center(const Vec& x) const { return free_center ? Vec(x.head(d)) : Vec::Zero(d); }
  Vec pack(const Vec& c, const Mat& a) const {
    Vec x(size());
    if (free_center) x.head(d) = c;
    int k = 0;
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) {
        if (diagonal && j != i) continue;
        x[nc() + k++] = a(i, j);
      }
    }
    return x;
  }
};

// -log det A over the shape parameters.
bool neg_logdet(const EllipsoidParam& p, const Vec& x, double& f, Vec* g, Mat* h) {
  const Mat a = p.shape(x);
  Eigen::LLT<Mat> llt(a);
  if (llt.info() != Eigen::Success) return false;
  const Mat l = llt.matrixL();
  double logdet = 0.0;
  for (int i = 0; i < p.d; ++i) {
    if (!(l(i, i) > 0.0)) return false;
    logdet += 2.0 * std::log(l(i, i));
  }
  f = -logdet;
  if (!g && !h) return true;
  const Mat w = llt.solve(Mat::Identity(p.d, p.d));
  const int n = p.size(), nc = p.nc(), np = p.np();
  if (g) {
    *g = Vec::Zero(n);
    for (int k = 0; k < np; ++k) (*g)[nc + k] = -(w * p.basis[k]).trace();
  }
  if (h) {
    *h = Mat::Zero(n, n);
    std::vector<Mat> we(np);
    for (int k = 0; k < np; ++k) we[k] = w * p.basis[k];
    for (int k = 0; k < np; ++k) {
      for (int l2 = k; l2 < np; ++l2) {
        const double v = (we[k] * we[l2]).trace();
        (*h)(nc + k, nc + l2) = v;
        (*h)(nc + l2, nc + k) = v;
      }
    }
  }
  return true;
}

class EllipsoidProblem : public BarrierProblem {
 public:
  EllipsoidProblem(const Constraints& c, EllipsoidConstraint ec, bool trace_objective)
      : p_(c.d, ec), trace_(trace_objective), g_(c.g), b_(c.b) {
    for (int i = 0; i < g_.rows(); ++i) {
      Mat m(p_.d, p_.np());
      for (int k = 0; k < p_.np(); ++k) m.col(k) = p_.basis[k] * g_.row(i).transpose();
      m_.push_back(m);
    }
  }
  const EllipsoidParam& param() const { return p_; }
  int size() const override { return p_.size(); }
  bool objective(const Vec& x, double& f, Vec* g, Mat* h) const override {
    if (!trace_) return neg_logdet(p_, x, f, g, h);
    const int n = p_.size();
    f = 0.0;
    if (g) *g = Vec::Zero(n);
    if (h) *h = Mat::Zero(n, n);
    for (int k = 0; k < p_.np(); ++k) {
      const double wgt = p_.basis[k].trace();
      f -= wgt * x[p_.nc() + k];
      if (g) (*g)[p_.nc() + k] = -wgt;
    }
    return true;
  }
  bool barrier(const Vec& x, double& phi, Vec* g, Mat* h) const override {
    const int n = p_.size(), nc = p_.nc(), np = p_.np();
    phi = 0.0;
    if (g) *g = Vec::Zero(n);
    if (h) *h = Mat::Zero(n, n);
    const Vec theta = x.tail(np);
    const Vec a = p_.center(x);
    for (int i = 0; i < g_.rows(); ++i) {
      const Vec hrow = g_.row(i).transpose();
      const double s = b_[i] - hrow.dot(a);
      if (s <= 0.0) return false;
      const Vec y = m_[i] * theta;
      const double q = s * s - y.squaredNorm();
      if (q <= 0.0) return false;
      phi -= std::log(q);
      if (g || h) {
        Vec dq = Vec::Zero(n);
        if (nc) dq.head(nc) = -2.0 * s * hrow;
        dq.tail(np) = -2.0 * m_[i].transpose() * y;
        if (g) *g -= dq / q;
        if (h) {
          Mat d2q = Mat::Zero(n, n);
          if (nc) d2q.topLeftCorner(nc, nc) = 2.0 * hrow * hrow.transpose();
          d2q.bottomRightCorner(np, np) = -2.0 * m_[i].transpose() * m_[i];
          *h += -d2q / q + dq * dq.transpose() / (q * q);
        }
      }
    }
    if (trace_) {
      double f;
      Vec gl;
      Mat hl;
      if (!neg_logdet(p_, x, f, g ? &gl : nullptr, h ? &hl : nullptr)) return false;
      phi += f;
      if (g) *g += gl;
      if (h) *h += hl;
    }
    return true;
  }
  double barrier_parameter() const override { return 2.0 * g_.rows() + (trace_ ? p_.d : 0); }

 private:
  EllipsoidParam p_;
  bool trace_;
  Mat g_;
  Vec b_;
  std::vector<Mat> m_;
};

SolveReport ellipsoid_solve(Family family, EllipsoidConstraint ec, bool trace_objective,
                            const SolverOptions& opts) {
  Constraints c = collect(family);
  const int d = c.d;
  const HPolytope poly = as_polytope(c);
  if (poly.empty()) return status_report(SolveStatus::Infeasible);

  Vec a0;
  double r0 = 0.0;
  if (ec == EllipsoidConstraint::CenteredAtOrigin) {
    // Centered ellipsoids fit in P iff they fit in P intersected with -P.
    Constraints sym;
    sym.d = d;
    sym.g.resize(2 * c.g.rows(), d);
    sym.g << c.g, -c.g;
    sym.b.resize(2 * c.b.size());
    sym.b << c.b, c.b;
    r0 = c.b.minCoeff();
    if (r0 <= 1e-12) {
      SolveReport rep = status_report(SolveStatus::Optimal);
      rep.degenerate = true;
      if (r0 < -1e-12) rep.status = SolveStatus::Infeasible;
      return rep;
    }
    if (!as_polytope(sym).bounded()) return status_report(SolveStatus::Unbounded);
    a0 = Vec::Zero(d);
  } else {
    const Ball ball = chebyshev(c);
    if (!ball.feasible) return status_report(SolveStatus::Infeasible);
    if (ball.radius <= 1e-12) {
      SolveReport rep = status_report(SolveStatus::Optimal);
      rep.degenerate = true;
      return rep;
    }
    if (ec == EllipsoidConstraint::AxisParallel) {
      if (growth_unbounded(c, c.g.cwiseAbs())) return status_report(SolveStatus::Unbounded);
    } else if (!poly.bounded()) {
      return status_report(SolveStatus::Unbounded);
    }
    a0 = ball.center;
    r0 = ball.radius;
  }

  EllipsoidProblem prob(c, ec, trace_objective);
  const auto& p = prob.param();
  Vec x0 = p.pack(a0, 0.5 * r0 * Mat::Identity(d, d));
  const auto br = minimize_barrier(prob, x0, barrier_options(opts));
  SolveReport rep;
  rep.status = barrier_status(br);
  rep.iterations = br.iterations;
  rep.kkt_residual = br.kkt_residual;
  Ellipsoid e(p.center(br.x), p.shape(br.x));
  const double vol = volume(e);
  if (trace_objective) {
    Eigen::SelfAdjointEigenSolver<Mat> es(e.shape);
    rep.objective_value = e.shape.trace();
    rep.metrics["trace"] = e.shape.trace();
    rep.metrics["axis_length_sum"] = 2.0 * es.eigenvalues().sum();
    rep.metrics["volume"] = vol;
  } else {
    rep.objective_value = vol;
  }
  rep.witness = std::move(e);
  return rep;
}

}  // namespace

// --- public solvers -------------------------------------------------------------

SolveReport max_volume_box(Family family, const SolverOptions& opts) {
  const Constraints c = collect(family);
  const int d = c.d;
  const Ball ball = chebyshev(c);
  if (!ball.feasible) return status_report(SolveStatus::Infeasible);
  if (ball.radius <= 1e-12) {
    SolveReport rep = status_report(SolveStatus::Optimal);
    rep.degenerate = true;
    rep.witness = AxisBox(ball.center, Vec::Zero(d));
    return rep;
  }
  if (growth_unbounded(c, c.g.cwiseAbs())) return status_report(SolveStatus::Unbounded);
  BoxVolumeProblem prob(c);
  Vec x0(2 * d);
  x0 << ball.center, Vec::Constant(d, 0.5 * ball.radius / std::sqrt(static_cast<double>(d)));
  const auto br = minimize_barrier(prob, x0, barrier_options(opts));
  SolveReport rep;
  rep.status = barrier_status(br);
  rep.iterations = br.iterations;
  rep.kkt_residual = br.kkt_residual;
  AxisBox box(br.x.head(d), br.x.tail(d));
  rep.objective_value = volume(box);
  rep.degenerate = (box.halfwidths.array() < 1e-12).any();
  rep.witness = std::move(box);
  return rep;
}

SolveReport max_gaussian_box(Family family, const SolverOptions& opts) {
  const Constraints c = collect(family);
  const int d = c.d;
  const Ball ball = chebyshev(c, 1.0);
  if (!ball.feasible) return status_report(SolveStatus::Infeasible);
  if (ball.radius <= 1e-12) {
    SolveReport rep = status_report(SolveStatus::Optimal);
    rep.degenerate = true;
    rep.witness = AxisBox(ball.center, Vec::Zero(d));
    return rep;
  }
  BoxGaussianProblem prob(c);
  Vec x0(2 * d);
  x0 << ball.center, Vec::Constant(d, 0.5 * ball.radius / std::sqrt(static_cast<double>(d)));
  const auto br = minimize_barrier(prob, x0, barrier_options(opts));
  SolveReport rep;
  rep.status = barrier_status(br);
  rep.iterations = br.iterations;
  rep.kkt_residual = br.kkt_residual;
  AxisBox box(br.x.head(d), br.x.tail(d));
  rep.objective_value = gaussian_measure(box);
  rep.witness = std::move(box);
  return rep;
}

SolveReport max_perimeter_box(Family family) {
  const Constraints c = collect(family);
  const int d = c.d;
  LinearProgram lp(2 * d);
  for (int i = 0; i < d; ++i) {
    lp.nonnegative[d + i] = true;
    lp.objective[d + i] = 2.0;
  }
  for (int i = 0; i < c.g.rows(); ++i) {
    Vec row(2 * d);
    row << c.g.row(i).transpose(), c.g.row(i).cwiseAbs().transpose();
    lp.add_le(row, c.b[i]);
  }
  const auto res = solve_lp(lp);
  if (res.status == LpStatus::Infeasible) return status_report(SolveStatus::Infeasible);
  if (res.status == LpStatus::Unbounded) return status_report(SolveStatus::Unbounded);
  SolveReport rep;
  rep.status = SolveStatus::Optimal;
  rep.iterations = res.pivots;
  AxisBox box(res.x.head(d), res.x.tail(d).cwiseMax(0.0));
  rep.objective_value = 2.0 * box.halfwidths.sum();
  rep.metrics["volume"] = volume(box);
  rep.degenerate = box.degenerate();
  rep.witness = std::move(box);
  return rep;
}

SolveReport max_volume_zonotope(Family family, const Mat& directions, const SolverOptions& opts) {
  const Constraints c = collect(family);
  const int d = c.d;
  if (directions.rows() != d) throw Error(ErrorKind::DimensionMismatch, "zonotope directions");
  const int k = static_cast<int>(directions.cols());
  if (k > 10 || d > 3) throw Error(ErrorKind::DimensionTooLarge, "zonotope solver supports k <= 10, d <= 3");
  const Zonotope probe(Vec::Zero(d), directions, Vec::Ones(k));
  if (probe.rank_deficient()) throw Error(ErrorKind::RankDeficientDirections, "directions do not span");
  const Mat dirs = probe.directions;
  const Ball ball = chebyshev(c);
  if (!ball.feasible) return status_report(SolveStatus::Infeasible);
  if (ball.radius <= 1e-12) {
    SolveReport rep = status_report(SolveStatus::Optimal);
    rep.degenerate = true;
    rep.witness = Zonotope(ball.center, dirs, Vec::Zero(k));
    return rep;
  }
  if (growth_unbounded(c, 0.5 * (c.g * dirs).cwiseAbs())) return status_report(SolveStatus::Unbounded);
  ZonotopeVolumeProblem prob(c, dirs);
  Vec x0(d + k);
  x0 << ball.center, Vec::Constant(k, ball.radius / k);
  const auto br = minimize_barrier(prob, x0, barrier_options(opts));
  SolveReport rep;
  rep.status = barrier_status(br);
  rep.iterations = br.iterations;
  rep.kkt_residual = br.kkt_residual;
  Zonotope z(br.x.head(d), dirs, br.x.tail(k).cwiseMax(0.0));
  rep.objective_value = volume(z);
  rep.witness = std::move(z);
  return rep;
}

SolveReport max_volume_ellipsoid(Family family, EllipsoidConstraint constraint, const SolverOptions& opts) {
  return ellipsoid_solve(family, constraint, false, opts);
}

SolveReport max_trace_ellipsoid(Family family, const SolverOptions& opts) {
  return ellipsoid_solve(family, EllipsoidConstraint::Free, true, opts);
}

SolveReport min_enclosing_ellipsoid(std::span<const Vec> points, double tol) {
  if (points.empty()) throw Error(ErrorKind::InvalidInput, "no points");
  const int d = static_cast<int>(points.front().size());
  check_dim(d);
  const int n = static_cast<int>(points.size());
  Mat p(d, n);
  for (int i = 0; i < n; ++i) {
    if (points[i].size() != d) throw Error(ErrorKind::DimensionMismatch, "point dimensions differ");
    check_finite(points[i], "point");
    p.col(i) = points[i];
  }
  {
    Mat diff = p.colwise() - p.col(0);
    Eigen::FullPivLU<Mat> lu(diff);
    lu.setThreshold(1e-12);
    if (lu.rank() < d) throw Error(ErrorKind::DegenerateInput, "points are affinely dependent");
  }
  Mat q(d + 1, n);
  q.topRows(d) = p;
  q.row(d).setOnes();
  const double dd = d + 1.0;
  Vec u = Vec::Constant(n, 1.0 / n);
  int iter = 0;
  const int max_iter = 1000000;
  for (; iter < max_iter; ++iter) {
    const Mat x = q * u.asDiagonal() * q.transpose();
    const Eigen::LLT<Mat> llt(x);
    if (llt.info() != Eigen::Success) throw Error(ErrorKind::NumericalFailure, "singular moment matrix");
    const Vec kappa = (q.array() * llt.solve(q).array()).colwise().sum().transpose();
    int j = 0;
    kappa.maxCoeff(&j);
    int l = -1;
    for (int i = 0; i < n; ++i) {
      if (u[i] > 0.0 && (l < 0 || kappa[i] < kappa[l])) l = i;
    }
    const double up = kappa[j] / dd - 1.0;
    const double down = 1.0 - kappa[l] / dd;
    if (std::max(up, down) <= tol) break;
    int k;
    double tau;
    if (up >= down) {
      k = j;
      tau = (kappa[j] / dd - 1.0) / (kappa[j] - 1.0);
    } else {
      k = l;
      tau = std::max((kappa[l] / dd - 1.0) / (kappa[l] - 1.0), -u[l] / (1.0 - u[l]));
    }
    u *= (1.0 - tau);
    u[k] += tau;
    if (u[k] < 0.0) u[k] = 0.0;
  }
  const Vec c = p * u;
  const Mat cov = p * u.asDiagonal() * p.transpose() - c * c.transpose();
  Mat m = cov.inverse() / d;
  double gamma = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec v = p.col(i) - c;
    gamma = std::max(gamma, v.dot(m * v));
  }
  m /= gamma;
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  const Mat shape = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                    es.eigenvectors().transpose();
  SolveReport rep;
  rep.status = iter < max_iter ? SolveStatus::Optimal : SolveStatus::MaxIter;
  rep.iterations = iter;
  Ellipsoid e(c, 0.5 * (shape + shape.transpose()));
  rep.objective_value = volume(e);
  rep.witness = std::move(e);
  return rep;
}

namespace {

// Planar H-convex sets parameterized by their support numbers in angular order.
struct PlanarH {
  int m = 0;
  std::vector<int> order;     // sorted position -> original index
  std::vector<double> angle;  // sorted angles
  Mat h;                      // 2 x m sorted unit directions
  std::vector<Mat> vert;      // vertex i (lines i, i+1) = vert[i] * lambda
  Mat edge;                   // edge lengths = edge * lambda

  explicit PlanarH(const Mat& hset) {
    if (hset.rows() != 2) throw Error(ErrorKind::DimensionTooLarge, "H-convex solver is planar");
    const HConvexSet probe(hset, Vec::Zero(hset.cols()));
    m = static_cast<int>(hset.cols());
    order.resize(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::vector<double> ang(m);
    for (int i = 0; i < m; ++i) ang[i] = std::atan2(probe.hset(1, i), probe.hset(0, i));
    std::sort(order.begin(), order.end(), [&](int a, int b) { return ang[a] < ang[b]; });
    h.resize(2, m);
    for (int i = 0; i < m; ++i) {
      h.col(i) = probe.hset.col(order[i]);
      angle.push_back(ang[order[i]]);
    }
    for (int i = 0; i < m; ++i) {
      const int k = (i + 1) % m;
      Eigen::Matrix2d a;
      a.row(0) = h.col(i).transpose();
      a.row(1) = h.col(k).transpose();
      if (std::abs(a.determinant()) < 1e-12) throw Error(ErrorKind::InvalidInput, "repeated direction in H");
      const Eigen::Matrix2d inv = a.inverse();
      Mat v = Mat::Zero(2, m);
      v.col(i) += inv.col(0);
      v.col(k) += inv.col(1);
      vert.push_back(v);
    }
    edge.resize(m, m);
    for (int i = 0; i < m; ++i) {
      const Vec t(Eigen::Vector2d(-h(1, i), h(0, i)));
      edge.row(i) = t.transpose() * (vert[i] - vert[(i + m - 1) % m]);
    }
  }

  double max_gap() const {
    double g = 0.0;
    for (int i = 0; i < m; ++i) {
      double diff = (i + 1 < m ? angle[i + 1] : angle[0] + 2.0 * std::numbers::pi) - angle[i];
      g = std::max(g, diff);
    }
    return g;
  }

  // rows: tight cone (-edge <= 0) then containment of every vertex.
  std::pair<Mat, Vec> rows(const Constraints& c) const {
    const int r = m + m * static_cast<int>(c.g.rows());
    Mat a(r, m);
    Vec b(r);
    a.topRows(m) = -edge;
    b.head(m).setZero();
    int row = m;
    for (int i = 0; i < m; ++i) {
      const Mat gv = c.g * vert[i];
      a.middleRows(row, gv.rows()) = gv;
      b.segment(row, gv.rows()) = c.b;
      row += static_cast<int>(gv.rows());
    }
    return {a, b};
  }

  // Vertex whose normal cone contains the direction at angle theta.
  int vertex_for(double theta) const {
    const double two_pi = 2.0 * std::numbers::pi;
    for (int i = 0; i < m; ++i) {
      const double lo = angle[i];
      double hi = i + 1 < m ? angle[i + 1] : angle[0] + two_pi;
      double t = theta;
      while (t < lo) t += two_pi;
      while (t >= lo + two_pi) t -= two_pi;
      if (t <= hi) return i;
    }
    return 0;
  }

  HConvexSet witness(const Vec& sorted_lambda, const Mat& original) const {
    Vec s(m);
    for (int i = 0; i < m; ++i) s[order[i]] = sorted_lambda[i];
    return HConvexSet(original, s);
  }

  double diameter(const Vec& lambda) const {
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) best = std::max(best, ((vert[i] - vert[j]) * lambda).norm());
    }
    return best;
  }
};

class HConvexAreaProblem : public BarrierProblem {
 public:
  HConvexAreaProblem(const PlanarH& ph, Mat a, Vec b) : q_(0.5 * (ph.edge + ph.edge.transpose())), rows_(std::move(a), std::move(b)) {}
  int size() const override { return static_cast<int>(q_.rows()); }
  bool objective(const Vec& x, double& f, Vec* g, Mat* h) const override {
    const Vec qx = q_ * x;
    const double area = 0.5 * x.dot(qx);
    if (!(area > 0.0)) return false;
    f = -std::log(area);
    if (g) *g = -qx / area;
    if (h) *h = -q_ / area + qx * qx.transpose() / (area * area);
    return true;
  }
  bool barrier(const Vec& x, double& phi, Vec* g, Mat* h) const override { return rows_.eval(x, phi, g, h); }
  double barrier_parameter() const override { return rows_.rows(); }

 private:
  Mat q_;
  LinearBarrier rows_;
};

double golden_max(double lo, double hi, int iters, const std::function<double(double)>& f) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iters; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

}  // namespace

SolveReport max_hconvex(Family family, const Mat& hset, HConvexObjective objective, const SolverOptions& opts) {
  const Constraints c = collect(family);
  if (c.d != 2 || hset.rows() != 2) throw Error(ErrorKind::DimensionTooLarge, "H-convex solver is planar");
  const PlanarH ph(hset);
  const int m = ph.m;
  auto [a, b] = ph.rows(c);
  const Ball ball = chebyshev(c);
  if (!ball.feasible) return status_report(SolveStatus::Infeasible);
  if (ball.radius <= 1e-12) {
    SolveReport rep = status_report(SolveStatus::Optimal);
    rep.degenerate = true;
    Vec lam(m);
    for (int i = 0; i < m; ++i) lam[i] = ph.h.col(i).dot(ball.center);
    rep.witness = ph.witness(lam, hset);
    return rep;
  }
  {
    LinearProgram lp(m);
    for (int i = 0; i < a.rows(); ++i) lp.add_le(a.row(i).transpose(), 0.0);
    const Vec total = ph.edge.colwise().sum().transpose();
    lp.objective = total;
    lp.add_le(total, 1.0);
    const auto res = solve_lp(lp);
    if (res.optimal() && res.value > 1e-9) return status_report(SolveStatus::Unbounded);
  }
  if (objective == HConvexObjective::Volume) {
    const double rho = 0.5 * ball.radius * std::cos(ph.max_gap() / 2.0);
    Vec x0(m);
    for (int i = 0; i < m; ++i) x0[i] = ph.h.col(i).dot(ball.center) + rho;
    HConvexAreaProblem prob(ph, a, b);
    const auto br = minimize_barrier(prob, x0, barrier_options(opts));
    SolveReport rep;
    rep.status = barrier_status(br);
    rep.iterations = br.iterations;
    rep.kkt_residual = br.kkt_residual;
    rep.objective_value = 0.5 * br.x.dot(ph.edge * br.x);
    rep.witness = ph.witness(br.x, hset);
    return rep;
  }

  // Diameter: width in direction u is linear in lambda for a fixed u.
  LinearProgram base(m);
  for (int i = 0; i < a.rows(); ++i) base.add_le(a.row(i).transpose(), b[i]);
  int pivots = 0;
  Vec best_x;
  double best_val = -1.0;
  auto width = [&](double theta) {
    const Vec u(Eigen::Vector2d(std::cos(theta), std::sin(theta)));
    const int va = ph.vertex_for(theta);
    const int vb = ph.vertex_for(theta + std::numbers::pi);
    LinearProgram lp = base;
    lp.objective = ((ph.vert[va] - ph.vert[vb]).transpose() * u);
    const auto res = solve_lp(lp);
    pivots += res.pivots;
    if (!res.optimal()) throw Error(ErrorKind::NumericalFailure, "width LP failed");
    const double dia = ph.diameter(res.x);
    if (dia > best_val) {
      best_val = dia;
      best_x = res.x;
    }
    return res.value;
  };
  const int grid = 180;
  const double step = std::numbers::pi / grid;
  double gmax = 0.0;
  int kbest = 0;
  for (int k = 0; k < grid; ++k) {
    const double v = width(k * step);
    if (v > gmax) {
      gmax = v;
      kbest = k;
    }
  }
  golden_max((kbest - 1) * step, (kbest + 1) * step, 40, width);
  SolveReport rep;
  rep.status = SolveStatus::Optimal;
  rep.iterations = pivots;
  rep.objective_value = best_val;
  rep.metrics["upper_bound"] = std::max(best_val, gmax / std::cos(step / 2.0));
  rep.witness = ph.witness(best_x, hset);
  return rep;
}

SolveReport max_homothet(Family family, const HPolytope& shape) {
  const Constraints c = collect(family);
  const int d = c.d;
  if (shape.dim() != d) throw Error(ErrorKind::DimensionMismatch, "shape dimension");
  if (shape.empty()) throw Error(ErrorKind::EmptyBody, "empty shape");
  if (!shape.bounded()) throw Error(ErrorKind::Unbounded, "unbounded shape");
  LinearProgram lp(d + 1);
  lp.objective[d] = 1.0;
  lp.nonnegative[d] = true;
  for (int i = 0; i < c.g.rows(); ++i) {
    Vec row(d + 1);
    row.head(d) = c.g.row(i).transpose();
    row[d] = support(shape, Vec(c.g.row(i).transpose()));
    lp.add_le(row, c.b[i]);
  }
  const auto res = solve_lp(lp);
  if (res.status == LpStatus::Infeasible) return status_report(SolveStatus::Infeasible);
  if (res.status == LpStatus::Unbounded) return status_report(SolveStatus::Unbounded);
  const Vec a = res.x.head(d);
  const double t = std::max(0.0, res.x[d]);
  std::vector<Halfspace> hs;
  for (const auto& h : shape.halfspaces()) hs.push_back({h.normal, h.normal.dot(a) + t * h.offset});
  SolveReport rep;
  rep.status = SolveStatus::Optimal;
  rep.iterations = res.pivots;
  rep.objective_value = t;
  rep.degenerate = t <= 1e-12;
  rep.witness = HPolytope(d, std::move(hs));
  return rep;
}

namespace {

// Maximize ||w|| over {(c, w >= 0) : rows} by linear steps u <- w / |w|
// started from a set of orthant directions. Each step is monotone.
struct OrthantSweep {
  OrthantSweep(LinearProgram lp, int dim) : base(std::move(lp)), d(dim) {}

  LinearProgram base;
  int d;
  int pivots = 0;
  Vec best;
  double best_norm = -1.0;
  double lp_max = 0.0;  // max over probed directions of the LP value

  Vec probe(const Vec& u) {
    LinearProgram lp = base;
    lp.objective = Vec::Zero(2 * d);
    lp.objective.tail(d) = u;
    const auto res = solve_lp(lp);
    pivots += res.pivots;
    if (res.status == LpStatus::Unbounded) throw Error(ErrorKind::Unbounded, "unbounded");
    if (!res.optimal()) throw Error(ErrorKind::Infeasible, "infeasible");
    lp_max = std::max(lp_max, res.value);
    const double nrm = res.x.tail(d).norm();
    if (nrm > best_norm) {
      best_norm = nrm;
      best = res.x;
    }
    return res.x;
  }

  void ascend(Vec u) {
    for (int it = 0; it < 50; ++it) {
      const Vec x = probe(u);
      const Vec w = x.tail(d).cwiseMax(0.0);
      if (w.norm() <= 1e-15) return;
      const Vec next = w.normalized();
      if ((next - u).norm() < 1e-13) return;
      u = next;
    }
  }

  // Returns the sweep step for d == 2 (upper bound available), 0 otherwise.
  double run() {
    if (d == 2) {
      const int grid = 90;
      const double step = (std::numbers::pi / 2.0) / grid;
      for (int k = 0; k <= grid; ++k) probe(Vec(Eigen::Vector2d(std::cos(k * step), std::sin(k * step))));
      const Vec w = best.tail(d);
      if (w.norm() > 0) ascend(w.normalized());
      return step;
    }
    std::vector<Vec> starts;
    for (int i = 0; i < d; ++i) starts.push_back(Vec::Unit(d, i));
    starts.push_back(Vec::Ones(d).normalized());
    CounterRng rng(0x6f72746875ULL);
    for (int k = 0; k < 64; ++k) starts.push_back(rng.unit_vector(d).cwiseAbs());
    for (const auto& s : starts) ascend(s);
    return 0.0;
  }
};

}  // namespace

SolveReport max_box_diameter(Family family) {
  const Constraints c = collect(family);
  const int d = c.d;
  OrthantSweep sw(LinearProgram(2 * d), d);
  for (int i = 0; i < d; ++i) sw.base.nonnegative[d + i] = true;
  for (int i = 0; i < c.g.rows(); ++i) {
    Vec row(2 * d);
    row << c.g.row(i).transpose(), c.g.row(i).cwiseAbs().transpose();
    sw.base.add_le(row, c.b[i]);
  }
  double step;
  try {
    step = sw.run();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Unbounded) return status_report(SolveStatus::Unbounded);
    if (e.kind() == ErrorKind::Infeasible) return status_report(SolveStatus::Infeasible);
    throw;
  }
  SolveReport rep;
  rep.status = SolveStatus::Optimal;
  rep.iterations = sw.pivots;
  AxisBox box(sw.best.head(d), sw.best.tail(d).cwiseMax(0.0));
  rep.objective_value = 2.0 * box.halfwidths.norm();
  if (step > 0.0) rep.metrics["upper_bound"] = std::max(rep.objective_value, 2.0 * sw.lp_max / std::cos(step / 2.0));
  rep.degenerate = box.degenerate();
  rep.witness = std::move(box);
  return rep;
}

SolveReport max_increasing_segment(Family family, SegmentNorm norm) {
  const Constraints c = collect(family);
  const int d = c.d;
  LinearProgram base(2 * d);
  for (int i = 0; i < d; ++i) base.nonnegative[d + i] = true;
  for (int i = 0; i < c.g.rows(); ++i) {
    Vec row(2 * d);
    row << c.g.row(i).transpose(), 0.5 * c.g.row(i).transpose();
    base.add_le(row, c.b[i]);
    row.tail(d) *= -1.0;
    base.add_le(row, c.b[i]);
  }
  Vec x;
  int pivots = 0;
  double step = 0.0, lp_max = 0.0;
  if (norm == SegmentNorm::L1) {
    LinearProgram lp = base;
    lp.objective.tail(d).setOnes();
    const auto res = solve_lp(lp);
    if (res.status == LpStatus::Infeasible) return status_report(SolveStatus::Infeasible);
    if (res.status == LpStatus::Unbounded) return status_report(SolveStatus::Unbounded);
    x = res.x;
    pivots = res.pivots;
  } else {
    OrthantSweep sw(base, d);
    try {
      step = sw.run();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Unbounded) return status_report(SolveStatus::Unbounded);
      if (e.kind() == ErrorKind::Infeasible) return status_report(SolveStatus::Infeasible);
      throw;
    }
    x = sw.best;
    pivots = sw.pivots;
    lp_max = sw.lp_max;
  }
  const Vec w = x.tail(d).cwiseMax(0.0);
  const double len = w.norm();
  SolveReport rep;
  rep.status = SolveStatus::Optimal;
  rep.iterations = pivots;
  rep.objective_value = norm == SegmentNorm::L1 ? w.sum() : len;
  if (step > 0.0) rep.metrics["upper_bound"] = std::max(rep.objective_value, lp_max / std::cos(step / 2.0));
  rep.degenerate = len <= 1e-12;
  Mat dir(d, 1);
  dir.col(0) = len > 1e-12 ? Vec(w / len) : Vec(Vec::Ones(d).normalized());
  rep.witness = Zonotope(x.head(d), dir, Vec::Constant(1, len > 1e-12 ? len : 0.0));
  return rep;
}

// --- problem dispatch ------------------------------------------------------------

WitnessProblem::WitnessProblem(std::vector<HPolytope> fam, WitnessClass wc, Objective obj)
    : family(std::move(fam)), witness_class(std::move(wc)), objective(obj) {
  if (family.empty()) throw Error(ErrorKind::InvalidInput, "empty family");
  using K = WitnessClassKind;
  bool ok = false;
  switch (witness_class.kind) {
    case K::AxisBox:
      ok = obj == Objective::Volume || obj == Objective::Perimeter || obj == Objective::Diameter ||
           obj == Objective::Gaussian;
      break;
    case K::Zonotope:
    case K::EllipsoidCentered:
    case K::EllipsoidAxisParallel: ok = obj == Objective::Volume; break;
    case K::Ellipsoid: ok = obj == Objective::Volume || obj == Objective::Trace; break;
    case K::HConvex: ok = obj == Objective::Volume || obj == Objective::Diameter; break;
  }
  if (!ok) throw Error(ErrorKind::InvalidInput, "objective not supported for this witness class");
}

SolveReport solve(const WitnessProblem& problem, const SolverOptions& opts) {
  const Family fam(problem.family);
  using K = WitnessClassKind;
  switch (problem.witness_class.kind) {
    case K::AxisBox:
      switch (problem.objective) {
        case Objective::Perimeter: return max_perimeter_box(fam);
        case Objective::Diameter: return max_box_diameter(fam);
        case Objective::Gaussian: return max_gaussian_box(fam, opts);
        default: return max_volume_box(fam, opts);
      }
    case K::Zonotope: return max_volume_zonotope(fam, problem.witness_class.directions, opts);
    case K::Ellipsoid:
      if (problem.objective == Objective::Trace) return max_trace_ellipsoid(fam, opts);
      return max_volume_ellipsoid(fam, EllipsoidConstraint::Free, opts);
    case K::EllipsoidCentered: return max_volume_ellipsoid(fam, EllipsoidConstraint::CenteredAtOrigin, opts);
    case K::EllipsoidAxisParallel: return max_volume_ellipsoid(fam, EllipsoidConstraint::AxisParallel, opts);
    case K::HConvex:
      return max_hconvex(fam, problem.witness_class.directions,
                         problem.objective == Objective::Diameter ? HConvexObjective::Diameter
                                                                  : HConvexObjective::Volume,
                         opts);
  }
  throw Error(ErrorKind::InvalidInput, "unknown witness class");
}

}  // namespace qh
