#include "qhelly/geom.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>

#include "qhelly/lp.hpp"

namespace qh {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::EmptyBody: return "EmptyBody";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::DirectionMismatch: return "DirectionMismatch";
    case ErrorKind::RankDeficientDirections: return "RankDeficientDirections";
    case ErrorKind::HalfSphereViolation: return "HalfSphereViolation";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::NoFiniteEps: return "NoFiniteEps";
    case ErrorKind::TooManySubsets: return "TooManySubsets";
    case ErrorKind::TooManyTransversals: return "TooManyTransversals";
    case ErrorKind::TheoremArityMismatch: return "TheoremArityMismatch";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::SearchFailed: return "SearchFailed";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::ContainmentAuditFailed: return "ContainmentAuditFailed";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
  }
  return "Unknown";
}

void check_dim(int d) {
  if (d < 1 || d > kMaxDim) throw Error(ErrorKind::DimensionTooLarge, "dimension must be in [1, 8]");
}

void check_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) throw Error(ErrorKind::InvalidInput, std::string(what) + " has non-finite entries");
}

// --- Halfspace / HPolytope ---------------------------------------------------

Halfspace Halfspace::make(const Vec& normal, double offset) {
  check_finite(normal, "halfspace normal");
  const double n = normal.norm();
  if (!(n > 0.0) || !std::isfinite(offset)) {
    throw Error(ErrorKind::InvalidInput, "halfspace normal must be nonzero and finite");
  }
  return Halfspace{normal / n, offset / n};
}

struct HPolytope::Cache {
  std::once_flag once;
  bool empty = false;
  bool bounded = false;
};

HPolytope::HPolytope(int dim, std::vector<Halfspace> halfspaces)
    : dim_(dim), halfspaces_(std::move(halfspaces)), cache_(std::make_shared<Cache>()) {
  check_dim(dim);
  for (auto& h : halfspaces_) {
    if (h.normal.size() != dim) throw Error(ErrorKind::DimensionMismatch, "halfspace dimension");
    const double n = h.normal.norm();
    if (std::abs(n - 1.0) > 1e-12) h = Halfspace::make(h.normal, h.offset);
  }
}

HPolytope HPolytope::box(const Vec& lo, const Vec& hi) {
  const int d = static_cast<int>(lo.size());
  std::vector<Halfspace> hs;
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e[i] = 1.0;
    hs.push_back({e, hi[i]});
    hs.push_back({-e, -lo[i]});
  }
  return HPolytope(d, std::move(hs));
}

HPolytope HPolytope::from_inequalities(const Mat& a, const Vec& b) {
  std::vector<Halfspace> hs;
  for (int i = 0; i < a.rows(); ++i) hs.push_back(Halfspace::make(a.row(i).transpose(), b[i]));
  return HPolytope(static_cast<int>(a.cols()), std::move(hs));
}

namespace {

double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Andrew's monotone chain; counter-clockwise, collinear points dropped.
std::vector<Vec> hull2d(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec& a, const Vec& b) { return (a - b).norm() <= tol::kVertexDedup; }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], pts[i]) <= 1e-14) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 2], h[k - 1], pts[i]) <= 1e-14) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace

HPolytope HPolytope::polygon(const std::vector<Vec>& pts) {
  for (const auto& p : pts) {
    if (p.size() != 2) throw Error(ErrorKind::DimensionMismatch, "polygon needs planar points");
  }
  const auto h = hull2d(pts);
  if (h.size() < 3) throw Error(ErrorKind::DegenerateInput, "polygon hull has fewer than 3 vertices");
  std::vector<Halfspace> hs;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Vec& p = h[i];
    const Vec& q = h[(i + 1) % h.size()];
    Vec n(2);
    n << q[1] - p[1], -(q[0] - p[0]);
    hs.push_back(Halfspace::make(n, n.dot(p)));
  }
  return HPolytope(2, std::move(hs));
}

void HPolytope::ensure_cache() const {
  if (!cache_) throw Error(ErrorKind::InvalidInput, "default-constructed polytope");
  std::call_once(cache_->once, [this] {
    LinearProgram lp(dim_);
    for (const auto& h : halfspaces_) lp.add_le(h.normal, h.offset);
    const auto feas = solve_lp(lp);
    cache_->empty = !feas.optimal();
    cache_->bounded = true;
    if (cache_->empty) return;
    for (int i = 0; i < dim_ && cache_->bounded; ++i) {
      for (double s : {1.0, -1.0}) {
        lp.objective = Vec::Zero(dim_);
        lp.objective[i] = s;
        if (solve_lp(lp).status == LpStatus::Unbounded) {
          cache_->bounded = false;
          break;
        }
      }
    }
  });
}

bool HPolytope::empty() const {
  ensure_cache();
  return cache_->empty;
}

bool HPolytope::bounded() const {
  ensure_cache();
  return cache_->bounded;
}

bool HPolytope::contains_point(const Vec& x, double tol) const {
  for (const auto& h : halfspaces_) {
    if (h.normal.dot(x) > h.offset + tol) return false;
  }
  return true;
}

HPolytope HPolytope::intersect(const HPolytope& other) const {
  if (other.dim_ != dim_) throw Error(ErrorKind::DimensionMismatch, "intersect");
  auto hs = halfspaces_;
  hs.insert(hs.end(), other.halfspaces_.begin(), other.halfspaces_.end());
  return HPolytope(dim_, std::move(hs));
}

HPolytope HPolytope::translated(const Vec& t) const {
  auto hs = halfspaces_;
  for (auto& h : hs) h.offset += h.normal.dot(t);
  return HPolytope(dim_, std::move(hs));
}

HPolytope intersect_all(std::span<const HPolytope> family) {
  if (family.empty()) throw Error(ErrorKind::InvalidInput, "empty family");
  std::vector<Halfspace> hs;
  const int d = family.front().dim();
  for (const auto& p : family) {
    if (p.dim() != d) throw Error(ErrorKind::DimensionMismatch, "family dimensions differ");
    hs.insert(hs.end(), p.halfspaces().begin(), p.halfspaces().end());
  }
  return HPolytope(d, std::move(hs));
}

// --- witness bodies ------------------------------------------------------------

AxisBox::AxisBox(Vec c, Vec hw) : center(std::move(c)), halfwidths(std::move(hw)) {
  check_dim(static_cast<int>(center.size()));
  if (halfwidths.size() != center.size()) throw Error(ErrorKind::DimensionMismatch, "box halfwidths");
  check_finite(center, "box center");
  check_finite(halfwidths, "box halfwidths");
  if ((halfwidths.array() < 0.0).any()) throw Error(ErrorKind::InvalidInput, "negative halfwidth");
}

Zonotope::Zonotope(Vec c, Mat dirs, Vec alpha)
    : center(std::move(c)), directions(std::move(dirs)), coeffs(std::move(alpha)) {
  check_dim(static_cast<int>(center.size()));
  if (directions.rows() != center.size() || directions.cols() != coeffs.size()) {
    throw Error(ErrorKind::DimensionMismatch, "zonotope shapes");
  }
  check_finite(center, "zonotope center");
  check_finite(coeffs, "zonotope coeffs");
  if ((coeffs.array() < 0.0).any()) throw Error(ErrorKind::InvalidInput, "negative zonotope coeff");
  for (int i = 0; i < directions.cols(); ++i) {
    const double n = directions.col(i).norm();
    if (!(n > 0.0)) throw Error(ErrorKind::InvalidInput, "zero zonotope direction");
    directions.col(i) /= n;
    coeffs[i] *= n;
  }
}

Zonotope Zonotope::from_box(const AxisBox& box) {
  const int d = box.dim();
  return Zonotope(box.center, Mat::Identity(d, d), 2.0 * box.halfwidths);
}

bool Zonotope::rank_deficient() const {
  if (directions.cols() < directions.rows()) return true;
  Eigen::FullPivLU<Mat> lu(directions);
  lu.setThreshold(1e-12);
  return lu.rank() < directions.rows();
}

Ellipsoid::Ellipsoid(Vec c, Mat a) : center(std::move(c)), shape(std::move(a)) {
  const int d = static_cast<int>(center.size());
  check_dim(d);
  if (shape.rows() != d || shape.cols() != d) throw Error(ErrorKind::DimensionMismatch, "ellipsoid shape");
  check_finite(center, "ellipsoid center");
  if (!shape.allFinite()) throw Error(ErrorKind::InvalidInput, "ellipsoid shape non-finite");
  if ((shape - shape.transpose()).cwiseAbs().maxCoeff() > tol::kSymmetry * std::max(1.0, shape.norm())) {
    throw Error(ErrorKind::InvalidInput, "ellipsoid shape not symmetric");
  }
  shape = 0.5 * (shape + shape.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(shape);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorKind::InvalidInput, "ellipsoid shape not positive definite");
  }
}

HConvexSet::HConvexSet(Mat h, Vec s) : hset(std::move(h)), supports(std::move(s)) {
  check_dim(static_cast<int>(hset.rows()));
  if (hset.cols() != supports.size()) throw Error(ErrorKind::DimensionMismatch, "hconvex supports");
  check_finite(supports, "hconvex supports");
  for (int i = 0; i < hset.cols(); ++i) {
    const double n = hset.col(i).norm();
    if (!(n > 0.0)) throw Error(ErrorKind::InvalidInput, "zero direction in H");
    hset.col(i) /= n;
    supports[i] /= n;
  }
  if (!positively_spanning(hset)) {
    throw Error(ErrorKind::HalfSphereViolation, "H is contained in a closed half-sphere");
  }
}

HPolytope HConvexSet::to_polytope() const {
  std::vector<Halfspace> hs;
  for (int i = 0; i < hset.cols(); ++i) hs.push_back({hset.col(i), supports[i]});
  return HPolytope(dim(), std::move(hs));
}

int body_dim(const Body& body) {
  return std::visit([](const auto& b) { return b.dim(); }, body);
}

// --- support / containment ------------------------------------------------------

double support(const HPolytope& body, const Vec& dir) {
  LinearProgram lp(body.dim());
  lp.objective = dir;
  for (const auto& h : body.halfspaces()) lp.add_le(h.normal, h.offset);
  const auto res = solve_lp(lp);
  if (res.status == LpStatus::Infeasible) throw Error(ErrorKind::EmptyBody, "support of empty polytope");
  if (res.status == LpStatus::Unbounded) throw Error(ErrorKind::Unbounded, "polytope unbounded in direction");
  return res.value;
}

double support(const AxisBox& body, const Vec& dir) {
  return body.center.dot(dir) + body.halfwidths.dot(dir.cwiseAbs());
}

double support(const Zonotope& body, const Vec& dir) {
  return body.center.dot(dir) + 0.5 * body.coeffs.dot((body.directions.transpose() * dir).cwiseAbs());
}

double support(const Ellipsoid& body, const Vec& dir) {
  return body.center.dot(dir) + (body.shape * dir).norm();
}

double support(const HConvexSet& body, const Vec& dir) { return support(body.to_polytope(), dir); }

double support(const Body& body, const Vec& dir) {
  if (dir.size() != body_dim(body)) throw Error(ErrorKind::DimensionMismatch, "support direction");
  if (!(dir.norm() > 0.0)) throw Error(ErrorKind::InvalidInput, "zero support direction");
  return std::visit([&](const auto& b) { return support(b, dir); }, body);
}

bool contains(const HPolytope& outer, const Body& inner, double tol) {
  if (outer.dim() != body_dim(inner)) throw Error(ErrorKind::DimensionMismatch, "contains");
  for (const auto& h : outer.halfspaces()) {
    if (support(inner, h.normal) > h.offset + tol) return false;
  }
  return true;
}

bool contains_point(const Body& body, const Vec& x, double tol) {
  struct Visitor {
    const Vec& x;
    double tol;
    bool operator()(const HPolytope& p) const { return p.contains_point(x, tol); }
    bool operator()(const AxisBox& b) const {
      return ((x - b.center).cwiseAbs() - b.halfwidths).maxCoeff() <= tol;
    }
    bool operator()(const Zonotope& z) const {
      // x - c = sum_i s_i dir_i with |s_i| <= coeffs_i / 2
      const int k = z.num_directions(), d = z.dim();
      LinearProgram lp(k + 1);
      lp.objective[k] = -1.0;
      lp.nonnegative[k] = true;
      for (int j = 0; j < d; ++j) {
        Vec row = Vec::Zero(k + 1);
        row.head(k) = z.directions.row(j).transpose();
        lp.add_eq(row, x[j] - z.center[j]);
      }
      for (int i = 0; i < k; ++i) {
        Vec row = Vec::Zero(k + 1);
        row[i] = 1.0;
        row[k] = -1.0;
        lp.add_le(row, 0.5 * z.coeffs[i]);
        row[i] = -1.0;
        lp.add_le(row, 0.5 * z.coeffs[i]);
      }
      const auto res = solve_lp(lp);
      return res.optimal() && -res.value <= tol;
    }
    bool operator()(const Ellipsoid& e) const {
      const Vec y = e.shape.ldlt().solve(x - e.center);
      return y.norm() <= 1.0 + tol;
    }
    bool operator()(const HConvexSet& h) const { return h.to_polytope().contains_point(x, tol); }
  };
  return std::visit(Visitor{x, tol}, body);
}

// --- vertices / volume --------------------------------------------------------

namespace {

void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  if (k > n || k < 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::vector<Vec> vertices(const HPolytope& poly) {
  const int d = poly.dim();
  if (d > 3) throw Error(ErrorKind::DimensionTooLarge, "vertex enumeration limited to d <= 3");
  if (poly.empty()) return {};
  if (!poly.bounded()) throw Error(ErrorKind::Unbounded, "vertices of unbounded polytope");
  const auto& hs = poly.halfspaces();
  std::vector<Vec> out;
  for_each_subset(static_cast<int>(hs.size()), d, [&](const std::vector<int>& idx) {
    Mat a(d, d);
    Vec b(d);
    for (int i = 0; i < d; ++i) {
      a.row(i) = hs[idx[i]].normal.transpose();
      b[i] = hs[idx[i]].offset;
    }
    Eigen::FullPivLU<Mat> lu(a);
    if (std::abs(lu.determinant()) < 1e-12) return;
    const Vec x = lu.solve(b);
    const double scale = 1.0 + x.cwiseAbs().maxCoeff();
    if (!poly.contains_point(x, 1e-9 * scale)) return;
    for (const auto& v : out) {
      if ((v - x).norm() <= tol::kVertexDedup * scale) return;
    }
    out.push_back(x);
  });
  return out;
}

std::vector<Vec> vertices(const AxisBox& box) {
  return vertices(Zonotope::from_box(box));
}

std::vector<Vec> vertices(const Zonotope& z) {
  const int k = z.num_directions();
  if (k > 20) throw Error(ErrorKind::DimensionTooLarge, "too many zonotope directions");
  std::vector<Vec> pts;
  for (long mask = 0; mask < (1L << k); ++mask) {
    Vec p = z.center;
    for (int i = 0; i < k; ++i) {
      const double s = (mask >> i) & 1 ? 0.5 : -0.5;
      p += s * z.coeffs[i] * z.directions.col(i);
    }
    pts.push_back(std::move(p));
  }
  if (z.dim() == 2) {
    auto h = hull2d(pts);
    return h;
  }
  std::vector<Vec> out;
  for (auto& p : pts) {
    bool dup = false;
    for (const auto& q : out) dup = dup || (p - q).norm() <= tol::kVertexDedup;
    if (!dup) out.push_back(std::move(p));
  }
  return out;
}

double unit_ball_volume(int d) {
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

namespace {

double polygon_area(std::vector<Vec> pts) {
  const auto h = hull2d(std::move(pts));
  if (h.size() < 3) return 0.0;
  double a = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Vec& p = h[i];
    const Vec& q = h[(i + 1) % h.size()];
    a += p[0] * q[1] - p[1] * q[0];
  }
  return 0.5 * std::abs(a);
}

}  // namespace

double volume(const HPolytope& body) {
  const int d = body.dim();
  if (d > 3) throw Error(ErrorKind::DimensionTooLarge, "polytope volume limited to d <= 3");
  if (body.empty()) return 0.0;
  if (!body.bounded()) throw Error(ErrorKind::Unbounded, "volume of unbounded polytope");
  const auto verts = vertices(body);
  if (d == 1) {
    if (verts.size() < 2) return 0.0;
    return std::abs(verts[0][0] - verts[1][0]);
  }
  if (d == 2) return polygon_area(verts);
  if (verts.size() < 4) return 0.0;
  Vec inner = Vec::Zero(3);
  for (const auto& v : verts) inner += v;
  inner /= static_cast<double>(verts.size());
  double vol = 0.0;
  for (const auto& h : body.halfspaces()) {
    std::vector<Vec> face;
    for (const auto& v : verts) {
      if (std::abs(h.slack(v)) <= 1e-9 * (1.0 + v.norm())) face.push_back(v);
    }
    if (face.size() < 3) continue;
    Vec c = Vec::Zero(3);
    for (const auto& v : face) c += v;
    c /= static_cast<double>(face.size());
    // In-plane angular order around the face centroid.
    Eigen::Vector3d n = h.normal;
    Eigen::Vector3d u = (face[0] - c);
    if (u.norm() < 1e-14) u = n.unitOrthogonal();
    u.normalize();
    Eigen::Vector3d w = n.cross(u);
    std::sort(face.begin(), face.end(), [&](const Vec& a, const Vec& b) {
      const Eigen::Vector3d da = a - c, db = b - c;
      return std::atan2(da.dot(w), da.dot(u)) < std::atan2(db.dot(w), db.dot(u));
    });
    for (std::size_t i = 0; i < face.size(); ++i) {
      Mat m(3, 3);
      m.col(0) = face[i] - inner;
      m.col(1) = face[(i + 1) % face.size()] - inner;
      m.col(2) = c - inner;
      vol += std::abs(m.determinant()) / 6.0;
    }
  }
  return vol;
}

double volume(const AxisBox& body) { return (2.0 * body.halfwidths).prod(); }

double zonotope_volume(const Mat& directions, const Vec& coeffs, Vec* grad, Mat* hess) {
  const int d = static_cast<int>(directions.rows());
  const int k = static_cast<int>(directions.cols());
  if (grad) *grad = Vec::Zero(k);
  if (hess) *hess = Mat::Zero(k, k);
  double vol = 0.0;
  for_each_subset(k, d, [&](const std::vector<int>& s) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i) m.col(i) = directions.col(s[i]);
    const double det = std::abs(m.determinant());
    if (det == 0.0) return;
    double prod = det;
    for (int i : s) prod *= coeffs[i];
    vol += prod;
    if (grad) {
      for (int a = 0; a < d; ++a) {
        double p = det;
        for (int b = 0; b < d; ++b) {
          if (b != a) p *= coeffs[s[b]];
        }
        (*grad)[s[a]] += p;
        if (hess) {
          for (int c = 0; c < d; ++c) {
            if (c == a) continue;
            double q = det;
            for (int b = 0; b < d; ++b) {
              if (b != a && b != c) q *= coeffs[s[b]];
            }
            (*hess)(s[a], s[c]) += q;
          }
        }
      }
    }
  });
  return vol;
}

double volume(const Zonotope& body) { return zonotope_volume(body.directions, body.coeffs); }

double volume(const Ellipsoid& body) { return body.shape.determinant() * unit_ball_volume(body.dim()); }

double volume(const HConvexSet& body) { return volume(body.to_polytope()); }

double volume(const Body& body) {
  return std::visit([](const auto& b) { return volume(b); }, body);
}

// --- Minkowski combination -----------------------------------------------------

Zonotope minkowski_combine(const Zonotope& a, const Zonotope& b, double lambda) {
  if (a.directions.rows() != b.directions.rows() || a.directions.cols() != b.directions.cols() ||
      (a.directions - b.directions).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorKind::DirectionMismatch, "zonotopes have different directions");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorKind::InvalidInput, "lambda outside [0,1]");
  if (lambda == 0.0) return b;
  if (lambda == 1.0) return a;
  Zonotope z = a;
  z.center = lambda * a.center + (1.0 - lambda) * b.center;
  z.coeffs = lambda * a.coeffs + (1.0 - lambda) * b.coeffs;
  return z;
}

HConvexSet minkowski_combine(const HConvexSet& a, const HConvexSet& b, double lambda) {
  if (a.hset.rows() != b.hset.rows() || a.hset.cols() != b.hset.cols() ||
      (a.hset - b.hset).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorKind::DirectionMismatch, "H-convex sets use different direction sets");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorKind::InvalidInput, "lambda outside [0,1]");
  if (lambda == 0.0) return b;
  if (lambda == 1.0) return a;
  HConvexSet h = a;
  h.supports = lambda * a.supports + (1.0 - lambda) * b.supports;
  return h;
}

bool positively_spanning(const Mat& hset) {
  const int d = static_cast<int>(hset.rows());
  const int m = static_cast<int>(hset.cols());
  if (m < d + 1) return false;
  Eigen::FullPivLU<Mat> lu(hset);
  lu.setThreshold(1e-12);
  if (lu.rank() < d) return false;
  // max s  s.t. sum mu_i h_i = 0, sum mu_i = 1, mu_i >= s
  LinearProgram lp(m + 1);
  lp.objective[m] = 1.0;
  for (int j = 0; j < d; ++j) {
    Vec row = Vec::Zero(m + 1);
    row.head(m) = hset.row(j).transpose();
    lp.add_eq(row, 0.0);
  }
  Vec ones = Vec::Zero(m + 1);
  ones.head(m).setOnes();
  lp.add_eq(ones, 1.0);
  for (int i = 0; i < m; ++i) {
    Vec row = Vec::Zero(m + 1);
    row[i] = -1.0;
    row[m] = 1.0;
    lp.add_le(row, 0.0);
  }
  const auto res = solve_lp(lp);
  return res.optimal() && res.value > 1e-9;
}

double gaussian_measure(const AxisBox& box) {
  double p = 1.0;
  for (int i = 0; i < box.dim(); ++i) {
    const double lo = box.center[i] - box.halfwidths[i];
    const double hi = box.center[i] + box.halfwidths[i];
    p *= 0.5 * (std::erf(hi / std::numbers::sqrt2) - std::erf(lo / std::numbers::sqrt2));
  }
  return p;
}

}  // namespace qh
