#pragma once

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "qhelly/error.hpp"

namespace qh {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr int kMaxDim = 8;

namespace tol {
inline constexpr double kContainment = 1e-8;
inline constexpr double kVertexDedup = 1e-9;
inline constexpr double kSpdFloor = 1e-10;
inline constexpr double kSymmetry = 1e-10;
}  // namespace tol

void check_dim(int d);
void check_finite(const Vec& v, const char* what);

/// { x : <x, normal> <= offset } with unit normal.
struct Halfspace {
  Vec normal;
  double offset = 0.0;

  /// Rescales (normal, offset) so the normal has unit length.
  static Halfspace make(const Vec& normal, double offset);

  double slack(const Vec& x) const { return offset - normal.dot(x); }
  bool operator==(const Halfspace& o) const { return offset == o.offset && normal == o.normal; }
};

/// Finite intersection of halfspaces. Immutable; emptiness and boundedness
/// are computed once on first query and shared between copies.
class HPolytope {
 public:
  HPolytope() = default;
  HPolytope(int dim, std::vector<Halfspace> halfspaces);

  static HPolytope box(const Vec& lo, const Vec& hi);
  static HPolytope from_inequalities(const Mat& a, const Vec& b);
  /// Planar convex polygon from its vertices (any order; hull is taken).
  static HPolytope polygon(const std::vector<Vec>& pts);

  int dim() const { return dim_; }
  std::size_t size() const { return halfspaces_.size(); }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  const Halfspace& operator[](std::size_t i) const { return halfspaces_[i]; }

  bool empty() const;
  bool bounded() const;

  bool contains_point(const Vec& x, double tol = tol::kContainment) const;
  HPolytope intersect(const HPolytope& other) const;
  HPolytope translated(const Vec& t) const;

  bool operator==(const HPolytope& o) const {
    return dim_ == o.dim_ && halfspaces_ == o.halfspaces_;
  }

 private:
  struct Cache;
  void ensure_cache() const;

  int dim_ = 0;
  std::vector<Halfspace> halfspaces_;
  std::shared_ptr<Cache> cache_;
};

HPolytope intersect_all(std::span<const HPolytope> family);

struct AxisBox {
  Vec center;
  Vec halfwidths;

  AxisBox() = default;
  AxisBox(Vec c, Vec hw);

  int dim() const { return static_cast<int>(center.size()); }
  bool degenerate() const { return (halfwidths.array() <= 0.0).any(); }
};

/// center + sum_i [-coeffs_i/2, coeffs_i/2] * directions.col(i), unit directions.
struct Zonotope {
  Vec center;
  Mat directions;  // d x k, unit columns
  Vec coeffs;      // k, nonnegative

  Zonotope() = default;
  /// Normalizes each direction column and moves its length into coeffs.
  Zonotope(Vec c, Mat dirs, Vec alpha);
  static Zonotope from_box(const AxisBox& box);

  int dim() const { return static_cast<int>(center.size()); }
  int num_directions() const { return static_cast<int>(directions.cols()); }
  bool rank_deficient() const;
};

/// center + shape * B_d with shape symmetric positive definite.
struct Ellipsoid {
  Vec center;
  Mat shape;

  Ellipsoid() = default;
  Ellipsoid(Vec c, Mat a);

  int dim() const { return static_cast<int>(center.size()); }
};

/// intersection_i { x : <x, hset_i> <= supports_i }.
struct HConvexSet {
  Mat hset;  // d x m, unit columns, not inside a closed half-sphere
  Vec supports;

  HConvexSet() = default;
  HConvexSet(Mat h, Vec s);

  int dim() const { return static_cast<int>(hset.rows()); }
  HPolytope to_polytope() const;
};

using Body = std::variant<HPolytope, AxisBox, Zonotope, Ellipsoid, HConvexSet>;

int body_dim(const Body& body);

double support(const HPolytope& body, const Vec& dir);
double support(const AxisBox& body, const Vec& dir);
double support(const Zonotope& body, const Vec& dir);
double support(const Ellipsoid& body, const Vec& dir);
double support(const HConvexSet& body, const Vec& dir);
double support(const Body& body, const Vec& dir);

bool contains(const HPolytope& outer, const Body& inner, double tol = tol::kContainment);
bool contains_point(const Body& body, const Vec& x, double tol = tol::kContainment);

double unit_ball_volume(int d);
double volume(const HPolytope& body);
double volume(const AxisBox& body);
double volume(const Zonotope& body);
double volume(const Ellipsoid& body);
double volume(const HConvexSet& body);
double volume(const Body& body);

/// Zonotope volume as a function of the coefficient vector, with optional
/// gradient and Hessian (the volume is a polynomial in the coefficients).
double zonotope_volume(const Mat& directions, const Vec& coeffs, Vec* grad = nullptr,
                       Mat* hess = nullptr);

Zonotope minkowski_combine(const Zonotope& a, const Zonotope& b, double lambda);
HConvexSet minkowski_combine(const HConvexSet& a, const HConvexSet& b, double lambda);

std::vector<Vec> vertices(const HPolytope& poly);
std::vector<Vec> vertices(const Zonotope& z);
std::vector<Vec> vertices(const AxisBox& box);

/// Origin strictly inside conv(columns of hset), i.e. hset is not contained
/// in any closed half-sphere.
bool positively_spanning(const Mat& hset);

/// Gaussian (standard normal) measure of an axis box.
double gaussian_measure(const AxisBox& box);

}  // namespace qh
