#include "qhelly/barrier.hpp"

#include <cmath>
#include <limits>

namespace qh {

void LinearBarrier::add_row(const Vec& a, double b) {
  const int n = static_cast<int>(a.size());
  if (a_.rows() == 0) a_.resize(0, n);
  a_.conservativeResize(a_.rows() + 1, n);
  a_.row(a_.rows() - 1) = a.transpose();
  b_.conservativeResize(b_.size() + 1);
  b_[b_.size() - 1] = b;
}

bool LinearBarrier::eval(const Vec& x, double& phi, Vec* g, Mat* h) const {
  phi = 0.0;
  if (g) *g = Vec::Zero(x.size());
  if (h) *h = Mat::Zero(x.size(), x.size());
  return accumulate(x, phi, g, h);
}

bool LinearBarrier::accumulate(const Vec& x, double& phi, Vec* g, Mat* h) const {
  if (a_.rows() == 0) return true;
  const Vec s = b_ - a_ * x;
  if ((s.array() <= 0.0).any()) return false;
  phi -= s.array().log().sum();
  const Vec inv = s.cwiseInverse();
  if (g) *g += a_.transpose() * inv;
  if (h) *h += a_.transpose() * inv.cwiseAbs2().asDiagonal() * a_;
  return true;
}

namespace {

struct Centering {
  const BarrierProblem& p;
  double t;

  bool value(const Vec& x, double& v) const {
    double f = 0.0, phi = 0.0;
    if (!p.objective(x, f, nullptr, nullptr)) return false;
    if (!p.barrier(x, phi, nullptr, nullptr)) return false;
    v = t * f + phi;
    return std::isfinite(v);
  }

  bool full(const Vec& x, double& v, Vec& g, Mat& h) const {
    double f = 0.0, phi = 0.0;
    Vec gf, gb;
    Mat hf, hb;
    if (!p.objective(x, f, &gf, &hf)) return false;
    if (!p.barrier(x, phi, &gb, &hb)) return false;
    v = t * f + phi;
    g = t * gf + gb;
    h = t * hf + hb;
    return std::isfinite(v);
  }
};

Vec newton_direction(const Mat& h, const Vec& g) {
  Eigen::LDLT<Mat> ldlt(h);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    Vec dx = -ldlt.solve(g);
    if (dx.allFinite()) return dx;
  }
  // Regularize until the factorization is positive definite.
  const double scale = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
  for (double reg = 1e-12 * scale; reg < 1e8 * scale; reg *= 10.0) {
    Mat hr = h;
    hr.diagonal().array() += reg;
    Eigen::LLT<Mat> llt(hr);
    if (llt.info() == Eigen::Success) return -llt.solve(g);
  }
  return -g;
}

}  // namespace

BarrierResult minimize_barrier(const BarrierProblem& problem, Vec x0, const BarrierOptions& options) {
  BarrierResult res;
  res.x = std::move(x0);
  const double nu = problem.barrier_parameter();
  Centering c{problem, options.t0};
  {
    double v;
    if (!c.value(res.x, v)) throw Error(ErrorKind::NumericalFailure, "barrier start point infeasible");
  }
  double last_decrement = std::numeric_limits<double>::infinity();
  for (;;) {
    // Damped Newton centering at the current t.
    for (int it = 0; it < options.max_newton; ++it) {
      double v = 0.0;
      Vec g;
      Mat h;
      if (!c.full(res.x, v, g, h)) throw Error(ErrorKind::NumericalFailure, "barrier left its domain");
      const Vec dx = newton_direction(h, g);
      const double slope = g.dot(dx);
      last_decrement = -slope;
      if (last_decrement / 2.0 <= options.newton_tol) break;
      double alpha = 1.0;
      bool accepted = false;
      while (alpha > 1e-16) {
        const Vec xn = res.x + alpha * dx;
        double vn;
        if (c.value(xn, vn) && vn <= v + options.armijo_sigma * alpha * slope) {
          res.x = xn;
          accepted = true;
          break;
        }
        alpha *= options.armijo_beta;
      }
      ++res.iterations;
      if (!accepted) break;  // no further progress possible at this precision
      if (res.iterations >= options.max_total) break;
    }
    res.gap = nu / c.t;
    if (res.gap <= options.gap_tol || res.iterations >= options.max_total) break;
    c.t /= options.mu_factor;
  }
  res.kkt_residual = std::max(res.gap, std::sqrt(std::max(0.0, last_decrement)) / c.t);
  res.converged = res.gap <= options.gap_tol;
  return res;
}

}  // namespace qh
