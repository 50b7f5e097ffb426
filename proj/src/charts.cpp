#include <algorithm>
#include <cmath>

#include "qhelly/tverberg.hpp"

namespace qh {

Body Chart::decode(const Vec& full) const {
  const Vec y = full.head(dim());
  std::vector<Vec> hid;
  if (hidden() > 0) hid.push_back(full.tail(hidden()));
  return decode(y, hid);
}

Vec Chart::combine(const std::vector<Vec>& lifted, const Vec& weights) const {
  if (lifted.empty() || static_cast<Eigen::Index>(lifted.size()) != weights.size()) {
    throw Error(ErrorKind::InvalidInput, "combine needs one weight per point");
  }
  Vec out = Vec::Zero(lifted.front().size());
  for (std::size_t i = 0; i < lifted.size(); ++i) out += weights[static_cast<Eigen::Index>(i)] * lifted[i];
  return out;
}

namespace {

[[noreturn]] void wrong_type(const std::string& chart) {
  throw Error(ErrorKind::InvalidInput, "input body type does not fit the " + chart + " chart");
}

Vec min_hidden(const std::vector<Vec>& part_hidden, int n) {
  if (part_hidden.empty()) throw Error(ErrorKind::InvalidInput, "missing hidden coordinates");
  Vec m = part_hidden.front();
  for (const auto& h : part_hidden) {
    if (h.size() != n) throw Error(ErrorKind::DimensionMismatch, "hidden coordinate size");
    m = m.cwiseMin(h);
  }
  return m;
}

class ZonotopeChart : public Chart {
 public:
  ZonotopeChart(const Mat& dirs, bool as_box) : as_box_(as_box) {
    const Zonotope probe(Vec::Zero(dirs.rows()), dirs, Vec::Ones(dirs.cols()));
    dirs_ = probe.directions;
    d_ = static_cast<int>(dirs_.rows());
    k_ = static_cast<int>(dirs_.cols());
  }
  std::string name() const override { return "zonotope"; }
  int dim() const override { return d_ + k_ - 1; }
  int hidden() const override { return 1; }
  Vec lift(const Body& body) const override {
    Zonotope z;
    if (const auto* b = std::get_if<AxisBox>(&body)) {
      z = Zonotope::from_box(*b);
    } else if (const auto* zz = std::get_if<Zonotope>(&body)) {
      z = *zz;
    } else {
      wrong_type(name());
    }
    if (z.dim() != d_ || z.num_directions() != k_ || (z.directions - dirs_).cwiseAbs().maxCoeff() > 1e-9) {
      throw Error(ErrorKind::DirectionMismatch, "zonotope directions differ from the chart");
    }
    Vec out(d_ + k_);
    out << z.center, z.coeffs;
    return out;
  }
  Body decode(const Vec& y, const std::vector<Vec>& part_hidden) const override {
    Vec alpha(k_);
    alpha.head(k_ - 1) = y.tail(k_ - 1).cwiseMax(0.0);
    alpha[k_ - 1] = std::max(0.0, min_hidden(part_hidden, 1)[0]);
    if (as_box_) return AxisBox(y.head(d_), 0.5 * alpha);
    return Zonotope(y.head(d_), dirs_, alpha);
  }
  double objective(const Body& body) const override { return volume(body); }

 private:
  Mat dirs_;
  int d_ = 0, k_ = 0;
  bool as_box_;
};

class HConvexChart : public Chart {
 public:
  explicit HConvexChart(const Mat& hset) : hset_(HConvexSet(hset, Vec::Zero(hset.cols())).hset) {}
  std::string name() const override { return "hconvex"; }
  int dim() const override { return static_cast<int>(hset_.cols()) - 1; }
  int hidden() const override { return 1; }
  Vec lift(const Body& body) const override {
    if (body_dim(body) != hset_.rows()) throw Error(ErrorKind::DimensionMismatch, "hconvex chart dimension");
    Vec s(hset_.cols());
    for (int i = 0; i < hset_.cols(); ++i) s[i] = support(body, Vec(hset_.col(i)));
    return s;
  }
  Body decode(const Vec& y, const std::vector<Vec>& part_hidden) const override {
    Vec s(hset_.cols());
    s.head(dim()) = y;
    s[dim()] = min_hidden(part_hidden, 1)[0];
    return HConvexSet(hset_, s);
  }
  double objective(const Body& body) const override { return volume(body); }

 private:
  Mat hset_;
};

Vec vech(const Mat& a) {
  const int d = static_cast<int>(a.rows());
  Vec v(d * (d + 1) / 2);
  int k = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) v[k++] = a(i, j);
  }
  return v;
}

Mat unvech(const Vec& v, int d) {
  Mat a(d, d);
  int k = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      a(i, j) = v[k];
      a(j, i) = v[k];
      ++k;
    }
  }
  return a;
}

class EllipsoidDetChart : public Chart {
 public:
  EllipsoidDetChart(int d, double target_volume) : d_(d), target_(target_volume) { check_dim(d); }
  std::string name() const override { return "ellipsoid-det"; }
  int dim() const override { return d_ * (d_ + 3) / 2; }
  /// Centers plus the det-one slice of the matrices.
  int count(int r) const override { return (r - 1) * dim() + 1; }
  Vec lift(const Body& body) const override {
    const auto* e = std::get_if<Ellipsoid>(&body);
    if (!e) wrong_type(name());
    if (e->dim() != d_) throw Error(ErrorKind::DimensionMismatch, "ellipsoid chart dimension");
    Vec out(dim());
    out << e->center, vech(e->shape);
    return out;
  }
  Body decode(const Vec& y, const std::vector<Vec>&) const override {
    Mat a = unvech(y.tail(dim() - d_), d_);
    const double det = a.determinant();
    if (!(det > 0.0)) throw Error(ErrorKind::NumericalFailure, "combined matrix not positive definite");
    if (target_ > 0.0) {
      const double target_det = target_ / unit_ball_volume(d_);
      if (det > target_det) a *= std::pow(target_det / det, 1.0 / d_);
    }
    return Ellipsoid(y.head(d_), a);
  }
  double objective(const Body& body) const override { return volume(body); }
  double target_volume() const { return target_; }

 private:
  int d_;
  double target_;
};

class EllipsoidSumChart : public Chart {
 public:
  explicit EllipsoidSumChart(int d) : d_(d) { check_dim(d); }
  std::string name() const override { return "ellipsoid-sum"; }
  int dim() const override { return d_ * (d_ + 1) / 2 - 1; }
  int hidden() const override { return 1; }
  Vec lift(const Body& body) const override {
    const auto* e = std::get_if<Ellipsoid>(&body);
    if (!e) wrong_type(name());
    if (e->dim() != d_) throw Error(ErrorKind::DimensionMismatch, "ellipsoid chart dimension");
    if (e->center.cwiseAbs().maxCoeff() > 1e-9) {
      throw Error(ErrorKind::PreconditionFailed, "sum-one chart needs ellipsoids centered at the origin");
    }
    const double s = e->shape.sum();
    const Vec v = vech(e->shape / s);
    Vec out(dim() + 1);
    out << v.head(dim()), 1.0 / s;
    return out;
  }
  Body decode(const Vec& y, const std::vector<Vec>& part_hidden) const override {
    // off-diagonal entries count twice in the sum of entries
    Vec v(dim() + 1);
    v.head(dim()) = y;
    double total = 0.0;
    int k = 0;
    for (int i = 0; i < d_; ++i) {
      for (int j = i; j < d_; ++j, ++k) {
        if (k < dim()) total += (i == j ? 1.0 : 2.0) * y[k];
      }
    }
    v[dim()] = 1.0 - total;
    double scale_inv = part_hidden.front()[0];
    for (const auto& h : part_hidden) scale_inv = std::max(scale_inv, h[0]);
    return Ellipsoid(Vec::Zero(d_), unvech(v, d_) / scale_inv);
  }
  double objective(const Body& body) const override { return volume(body); }

 private:
  int d_;
};

class SegmentChart : public Chart {
 public:
  SegmentChart(int d, double length) : d_(d), length_(length) {
    check_dim(d);
    if (!(length > 0.0)) throw Error(ErrorKind::InvalidInput, "segment length must be positive");
  }
  std::string name() const override { return "segment"; }
  int dim() const override { return 2 * d_ - 1; }
  Body prepare(const Body& body) const override {
    const auto* z = std::get_if<Zonotope>(&body);
    if (!z || z->num_directions() != 1) wrong_type(name());
    if (z->dim() != d_) throw Error(ErrorKind::DimensionMismatch, "segment chart dimension");
    Vec w = z->directions.col(0) * z->coeffs[0];
    if ((w.array() < -1e-12).any()) {
      if ((w.array() > 1e-12).any()) throw Error(ErrorKind::PreconditionFailed, "segment is not increasing");
      w = -w;
    }
    w = w.cwiseMax(0.0);
    const double l1 = w.sum();
    if (l1 < length_ * (1.0 - 1e-9)) throw Error(ErrorKind::PreconditionFailed, "segment shorter than the threshold");
    w *= length_ / l1;
    Mat dir(d_, 1);
    dir.col(0) = w;
    return Zonotope(z->center, dir, Vec::Ones(1));
  }
  Vec lift(const Body& body) const override {
    const Body p = prepare(body);
    const auto& z = std::get<Zonotope>(p);
    const Vec w = z.directions.col(0) * z.coeffs[0];
    Vec out(dim());
    out << z.center, w.head(d_ - 1);
    return out;
  }
  Body decode(const Vec& y, const std::vector<Vec>&) const override {
    Vec w(d_);
    w.head(d_ - 1) = y.tail(d_ - 1).cwiseMax(0.0);
    w[d_ - 1] = std::max(0.0, length_ - w.head(d_ - 1).sum());
    Mat dir(d_, 1);
    dir.col(0) = w;
    return Zonotope(y.head(d_), dir, Vec::Ones(1));
  }
  double objective(const Body& body) const override {
    const auto& z = std::get<Zonotope>(body);
    return z.coeffs[0] * z.directions.col(0).cwiseAbs().sum();
  }

 private:
  int d_;
  double length_;
};

}  // namespace

std::unique_ptr<Chart> zonotope_chart(const Mat& directions, bool as_box) {
  return std::make_unique<ZonotopeChart>(directions, as_box);
}
std::unique_ptr<Chart> hconvex_chart(const Mat& hset) { return std::make_unique<HConvexChart>(hset); }
std::unique_ptr<Chart> ellipsoid_det_chart(int d, double target_volume) {
  return std::make_unique<EllipsoidDetChart>(d, target_volume);
}
std::unique_ptr<Chart> ellipsoid_sum_chart(int d) { return std::make_unique<EllipsoidSumChart>(d); }
std::unique_ptr<Chart> segment_chart(int d, double length) { return std::make_unique<SegmentChart>(d, length); }

std::unique_ptr<Chart> make_chart(const std::string& name, const std::vector<Body>& inputs, double threshold) {
  if (inputs.empty()) throw Error(ErrorKind::InvalidInput, "no input witnesses");
  const int d = body_dim(inputs.front());
  if (name == "zonotope") {
    if (std::holds_alternative<AxisBox>(inputs.front())) return zonotope_chart(Mat::Identity(d, d), true);
    if (const auto* z = std::get_if<Zonotope>(&inputs.front())) return zonotope_chart(z->directions);
    wrong_type(name);
  }
  if (name == "hconvex") {
    if (const auto* h = std::get_if<HConvexSet>(&inputs.front())) return hconvex_chart(h->hset);
    wrong_type(name);
  }
  if (name == "ellipsoid-det") return ellipsoid_det_chart(d, threshold);
  if (name == "ellipsoid-sum") return ellipsoid_sum_chart(d);
  if (name == "segment") return segment_chart(d, threshold);
  throw Error(ErrorKind::InvalidInput, "unknown chart '" + name + "'");
}

}  // namespace qh
