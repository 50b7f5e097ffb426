#pragma once

#include <vector>

#include "qhelly/geom.hpp"

namespace qh {

/// Convex program  min f(x)  over the interior of a region described by a
/// self-concordant-style barrier. Both callbacks return false when x is
/// outside their domain; gradient and Hessian pointers may be null.
class BarrierProblem {
 public:
  virtual ~BarrierProblem() = default;
  virtual int size() const = 0;
  virtual bool objective(const Vec& x, double& f, Vec* g, Mat* h) const = 0;
  virtual bool barrier(const Vec& x, double& phi, Vec* g, Mat* h) const = 0;
  /// Barrier parameter nu; the duality gap on the central path is nu / t.
  virtual double barrier_parameter() const = 0;
};

struct BarrierOptions {
  double t0 = 1.0;
  double mu_factor = 0.2;  // t <- t / mu_factor per outer iteration
  double gap_tol = 1e-10;
  double armijo_beta = 0.5;
  double armijo_sigma = 0.01;
  int max_newton = 100;   // per centering step
  int max_total = 5000;
  double newton_tol = 1e-12;
};

struct BarrierResult {
  Vec x;
  int iterations = 0;
  double gap = 0.0;
  double kkt_residual = 0.0;
  bool converged = false;
};

BarrierResult minimize_barrier(const BarrierProblem& problem, Vec x0, const BarrierOptions& options = {});

/// -sum log(b_i - <a_i, x>) for the rows of a * x <= b.
class LinearBarrier {
 public:
  LinearBarrier() = default;
  LinearBarrier(Mat a, Vec b) : a_(std::move(a)), b_(std::move(b)) {}

  void add_row(const Vec& a, double b);
  int rows() const { return static_cast<int>(a_.rows()); }
  const Mat& a() const { return a_; }
  const Vec& b() const { return b_; }

  bool eval(const Vec& x, double& phi, Vec* g, Mat* h) const;
  /// Accumulates into (phi, g, h) instead of overwriting.
  bool accumulate(const Vec& x, double& phi, Vec* g, Mat* h) const;

 private:
  Mat a_;
  Vec b_;
};

}  // namespace qh
