#include <cmath>

#include "qhelly/lp.hpp"
#include "qhelly/solvers.hpp"

namespace qh {

namespace {

// Outward facet normals of any zonotope generated by the columns of dirs.
std::vector<Vec> facet_normals(const Mat& dirs) {
  const int d = static_cast<int>(dirs.rows());
  const int k = static_cast<int>(dirs.cols());
  std::vector<Vec> out;
  auto push = [&](Vec n) {
    if (n.norm() < 1e-12) return;
    n.normalize();
    for (const auto& e : out) {
      if ((e - n).norm() < 1e-9) return;
    }
    out.push_back(n);
    out.push_back(-n);
  };
  if (d == 1) {
    push(Vec::Ones(1));
  } else if (d == 2) {
    for (int i = 0; i < k; ++i) push(Vec(Eigen::Vector2d(-dirs(1, i), dirs(0, i))));
  } else if (d == 3) {
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        const Eigen::Vector3d a = dirs.col(i), b = dirs.col(j);
        push(Vec(a.cross(b)));
      }
    }
  } else {
    throw Error(ErrorKind::DimensionTooLarge, "approximation supports d <= 3");
  }
  return out;
}

struct Member {
  HPolytope poly;
  std::vector<Vec> verts;
};

}  // namespace

ApproxResult simultaneous_approx(Family family, const ApproxClass& cls, double eps) {
  if (family.empty()) throw Error(ErrorKind::InvalidInput, "empty family");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw Error(ErrorKind::InvalidInput, "eps must be >= 0");
  const int d = family.front().dim();
  if (cls.directions.rows() != d) throw Error(ErrorKind::DimensionMismatch, "approximation directions");
  const Zonotope probe(Vec::Zero(d), cls.directions, Vec::Ones(cls.directions.cols()));
  if (probe.rank_deficient()) throw Error(ErrorKind::RankDeficientDirections, "directions do not span");
  const Mat dirs = probe.directions;
  const int k = static_cast<int>(dirs.cols());
  const auto normals = facet_normals(dirs);

  std::vector<Member> members;
  for (const auto& p : family) {
    if (p.dim() != d) throw Error(ErrorKind::DimensionMismatch, "family dimensions differ");
    if (p.empty()) throw Error(ErrorKind::EmptyBody, "empty family member");
    if (!p.bounded()) throw Error(ErrorKind::NoFiniteEps, "unbounded family member");
    members.push_back({p, vertices(p)});
  }

  // variables: translate (d), then alpha (k, >= 0)
  const int nm = static_cast<int>(members.size());
  const int n = d + k;
  LinearProgram lp(n);
  lp.sense = Sense::Maximize;
  for (int j = 0; j < k; ++j) lp.nonnegative[d + j] = true;
  for (int m = 0; m < nm; ++m) {
    for (const auto& h : members[m].poly.halfspaces()) {
      Vec row = Vec::Zero(n);
      row.head(d) = h.normal;
      row.tail(k) = 0.5 * (dirs.transpose() * h.normal).cwiseAbs();
      lp.add_le(row, h.offset);
    }
    for (const auto& x : members[m].verts) {
      for (const auto& nv : normals) {
        // <x - a, n> <= (1 + eps) * h_W(n)
        Vec row = Vec::Zero(n);
        row.head(d) = -nv;
        row.tail(k) = -(1.0 + eps) * 0.5 * (dirs.transpose() * nv).cwiseAbs();
        lp.add_le(row, -x.dot(nv));
      }
    }
  }
  const auto res = solve_lp(lp);
  ApproxResult out;
  out.eps = eps;
  if (!res.optimal()) return out;
  out.feasible = true;
  const Vec alpha = res.x.tail(k).cwiseMax(0.0);
  if (cls.axis_box && k == d && dirs.isApprox(Mat::Identity(d, d))) {
    out.witness = AxisBox(Vec::Zero(d), 0.5 * alpha);
  } else {
    out.witness = Zonotope(Vec::Zero(d), dirs, alpha);
  }
  out.translate = res.x.head(d);
  return out;
}

ApproxResult min_eps_approx(Family family, const ApproxClass& cls, double bracket_tol) {
  ApproxResult best = simultaneous_approx(family, cls, 0.0);
  if (best.feasible) return best;
  double lo = 0.0, hi = 1.0;
  best = simultaneous_approx(family, cls, hi);
  while (!best.feasible) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw Error(ErrorKind::NoFiniteEps, "no finite eps found");
    best = simultaneous_approx(family, cls, hi);
  }
  while (hi - lo > bracket_tol) {
    const double mid = 0.5 * (lo + hi);
    auto r = simultaneous_approx(family, cls, mid);
    if (r.feasible) {
      hi = mid;
      best = std::move(r);
    } else {
      lo = mid;
    }
  }
  return best;
}

}  // namespace qh
