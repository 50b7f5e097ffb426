#include "qhelly/tverberg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qhelly/lp.hpp"
#include "qhelly/parallel.hpp"
#include "qhelly/rng.hpp"
#include "qhelly/solvers.hpp"

namespace qh {

namespace {

/// Restricted-growth strings of length n using exactly r labels.
std::vector<std::vector<int>> growth_strings(int n, int r) {
  std::vector<std::vector<int>> out;
  std::vector<int> a(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int i, int used) -> void {
    if (used + (n - i) < r) return;
    if (i == n) {
      if (used == r) out.push_back(a);
      return;
    }
    for (int v = 0; v <= std::min(used, r - 1); ++v) {
      a[static_cast<std::size_t>(i)] = v;
      self(self, i + 1, std::max(used, v + 1));
    }
  };
  if (n > 0) rec(rec, 0, 0);
  return out;
}

std::vector<std::vector<int>> to_parts(const std::vector<int>& labels, int r) {
  std::vector<std::vector<int>> parts(static_cast<std::size_t>(r));
  for (std::size_t i = 0; i < labels.size(); ++i) parts[static_cast<std::size_t>(labels[i])].push_back(static_cast<int>(i));
  return parts;
}

int imbalance(const std::vector<int>& labels, int r) {
  std::vector<int> sizes(static_cast<std::size_t>(r), 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  return *hi - *lo;
}

std::vector<std::vector<std::vector<int>>> ordered_partitions(int n, int r) {
  if (r < 1) throw Error(ErrorKind::InvalidInput, "r must be at least 1");
  if (n < r) throw Error(ErrorKind::PreconditionFailed, "fewer points than parts");
  if (std::pow(static_cast<double>(r), n) > static_cast<double>(kMaxPartitionSpace)) {
    throw Error(ErrorKind::SearchExhausted, "partition space too large for exhaustive search");
  }
  auto strings = growth_strings(n, r);
  std::stable_sort(strings.begin(), strings.end(),
                   [r](const auto& a, const auto& b) { return imbalance(a, r) < imbalance(b, r); });
  std::vector<std::vector<std::vector<int>>> out;
  out.reserve(strings.size());
  for (const auto& s : strings) out.push_back(to_parts(s, r));
  return out;
}

/// First index in order for which fn succeeds, evaluating in parallel batches.
template <class T, class F>
std::optional<T> first_success(std::size_t total, int threads, F fn) {
  const int workers = threads > 0 ? threads : worker_count();
  const std::size_t batch = static_cast<std::size_t>(std::max(1, workers)) * 8;
  for (std::size_t start = 0; start < total; start += batch) {
    const std::size_t len = std::min(batch, total - start);
    std::vector<std::optional<T>> res(len);
    parallel_for(static_cast<int>(len), workers, [&](int i) { res[static_cast<std::size_t>(i)] = fn(start + static_cast<std::size_t>(i)); });
    for (auto& r : res) {
      if (r) return std::move(r);
    }
  }
  return std::nullopt;
}

bool is_polytopal(const Body& b) { return !std::holds_alternative<Ellipsoid>(b); }

std::vector<Vec> body_vertices(const Body& b) {
  if (const auto* p = std::get_if<HPolytope>(&b)) return vertices(*p);
  if (const auto* p = std::get_if<AxisBox>(&b)) return vertices(*p);
  if (const auto* p = std::get_if<Zonotope>(&b)) return vertices(*p);
  if (const auto* p = std::get_if<HConvexSet>(&b)) return vertices(p->to_polytope());
  return {};
}

/// l1 distance from x to the hull of pts.
double hull_residual(const Vec& x, const std::vector<Vec>& pts) {
  const int d = static_cast<int>(x.size());
  const int k = static_cast<int>(pts.size());
  LinearProgram lp(k + 2 * d);
  lp.sense = Sense::Minimize;
  lp.objective = Vec::Zero(k + 2 * d);
  lp.objective.tail(2 * d).setOnes();
  std::fill(lp.nonnegative.begin(), lp.nonnegative.end(), true);
  for (int c = 0; c < d; ++c) {
    Vec row = Vec::Zero(k + 2 * d);
    for (int i = 0; i < k; ++i) row[i] = pts[static_cast<std::size_t>(i)][c];
    row[k + c] = 1.0;
    row[k + d + c] = -1.0;
    lp.add_eq(row, x[c]);
  }
  Vec ones = Vec::Zero(k + 2 * d);
  ones.head(k).setOnes();
  lp.add_eq(ones, 1.0);
  const LpResult res = solve_lp(lp);
  return res.optimal() ? res.value : std::numeric_limits<double>::infinity();
}

// ---- nonlinear weight search for the det-one ellipsoid slice ----

struct WeightSearch {
  const std::vector<Ellipsoid>& bodies;
  const std::vector<std::vector<int>>& parts;
  int d;

  Vec point(const std::vector<int>& part, const Vec& w) const {
    Vec c = Vec::Zero(d);
    Mat a = Mat::Zero(d, d);
    for (std::size_t i = 0; i < part.size(); ++i) {
      const auto& e = bodies[static_cast<std::size_t>(part[i])];
      c += w[static_cast<Eigen::Index>(i)] * e.center;
      a += w[static_cast<Eigen::Index>(i)] * e.shape;
    }
    a /= std::pow(a.determinant(), 1.0 / d);
    Vec out(d + d * (d + 1) / 2);
    out.head(d) = c;
    int k = d;
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) out[k++] = a(i, j);
    }
    return out;
  }

  /// Stacked differences between each part's point and the mean point.
  Vec residual(const std::vector<Vec>& ws, Vec* mean = nullptr) const {
    std::vector<Vec> pts;
    for (std::size_t j = 0; j < parts.size(); ++j) pts.push_back(point(parts[j], ws[j]));
    const auto len = pts.front().size();
    Vec m = Vec::Zero(len);
    for (const auto& p : pts) m += p;
    m /= static_cast<double>(pts.size());
    Vec r(len * static_cast<Eigen::Index>(pts.size()));
    for (std::size_t j = 0; j < pts.size(); ++j) r.segment(static_cast<Eigen::Index>(j) * len, len) = pts[j] - m;
    if (mean) *mean = m;
    return r;
  }
};

Vec project_simplex(const Vec& v) {
  Vec u = v;
  std::sort(u.data(), u.data() + u.size(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

std::vector<Vec> split_blocks(const Vec& x, const std::vector<std::vector<int>>& parts) {
  std::vector<Vec> out;
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    const auto n = static_cast<Eigen::Index>(p.size());
    out.push_back(project_simplex(x.segment(at, n)));
    at += n;
  }
  return out;
}

/// Least l1 violation of "part j's weighted shape sum equals t_j times a
/// common matrix" at fixed ratios t; the weights minimizing it are returned.
double ratio_slack(const std::vector<Ellipsoid>& bodies, const std::vector<std::vector<int>>& parts, int d,
                   const Vec& log_t, std::vector<Vec>* weights) {
  const int n = static_cast<int>(bodies.size());
  const int s = d * (d + 1) / 2;
  const int rows = static_cast<int>(parts.size()) * (d + s);
  const int vars = n + d + s + 2 * rows;
  LinearProgram lp(vars);
  lp.sense = Sense::Minimize;
  lp.objective = Vec::Zero(vars);
  lp.objective.tail(2 * rows).setOnes();
  for (int i = 0; i < n; ++i) lp.nonnegative[static_cast<std::size_t>(i)] = true;
  for (int k = n + d + s; k < vars; ++k) lp.nonnegative[static_cast<std::size_t>(k)] = true;
  int row = 0;
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const double t = j == 0 ? 1.0 : std::exp(log_t[static_cast<Eigen::Index>(j - 1)]);
    for (int c = 0; c < d + s; ++c, ++row) {
      Vec a = Vec::Zero(vars);
      for (int i : parts[j]) {
        const auto& e = bodies[static_cast<std::size_t>(i)];
        if (c < d) {
          a[i] = e.center[c];
        } else {
          int k = d;
          for (int p = 0; p < d; ++p) {
            for (int q = p; q < d; ++q, ++k) {
              if (k == c) a[i] = e.shape(p, q);
            }
          }
        }
      }
      a[n + c] = c < d ? -1.0 : -t;
      a[n + d + s + 2 * row] = 1.0;
      a[n + d + s + 2 * row + 1] = -1.0;
      lp.add_eq(a, 0.0);
    }
    Vec ones = Vec::Zero(vars);
    for (int i : parts[j]) ones[i] = 1.0;
    lp.add_eq(ones, 1.0);
  }
  const LpResult res = solve_lp(lp);
  if (!res.optimal()) return std::numeric_limits<double>::infinity();
  if (weights) {
    weights->clear();
    for (const auto& p : parts) {
      Vec w(static_cast<Eigen::Index>(p.size()));
      for (std::size_t i = 0; i < p.size(); ++i) w[static_cast<Eigen::Index>(i)] = std::max(0.0, res.x[p[i]]);
      weights->push_back(w / w.sum());
    }
  }
  return res.value;
}

/// Candidate starting weights from a scan over the scale ratios between parts.
std::vector<std::vector<Vec>> ratio_seeds(const std::vector<Ellipsoid>& bodies, const std::vector<std::vector<int>>& parts,
                                          int d) {
  const int m = static_cast<int>(parts.size()) - 1;
  std::vector<std::vector<Vec>> seeds;
  if (m < 1) return seeds;
  auto f = [&](const Vec& lt) {
    try {
      return ratio_slack(bodies, parts, d, lt, nullptr);
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };
  std::vector<Vec> starts;
  if (m == 1) {
    const int grid = 97;
    std::vector<double> xs, fs;
    for (int g = 0; g < grid; ++g) {
      xs.push_back(-4.0 + 8.0 * g / (grid - 1));
      fs.push_back(f(Vec::Constant(1, xs.back())));
    }
    std::vector<int> order;
    for (int g = 0; g < grid; ++g) {
      const bool left = g == 0 || fs[g] <= fs[g - 1];
      const bool right = g == grid - 1 || fs[g] <= fs[g + 1];
      if (left && right && std::isfinite(fs[g])) order.push_back(g);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    if (order.size() > 3) order.resize(3);
    const double step = xs[1] - xs[0];
    for (int g : order) {
      double lo = xs[g] - step, hi = xs[g] + step;
      const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
      double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
      double fa = f(Vec::Constant(1, a)), fb = f(Vec::Constant(1, b));
      for (int it = 0; it < 60; ++it) {
        if (fa <= fb) {
          hi = b;
          b = a;
          fb = fa;
          a = hi - phi * (hi - lo);
          fa = f(Vec::Constant(1, a));
        } else {
          lo = a;
          a = b;
          fa = fb;
          b = lo + phi * (hi - lo);
          fb = f(Vec::Constant(1, b));
        }
      }
      starts.push_back(Vec::Constant(1, (lo + hi) / 2.0));
    }
  } else {
    // Compass search from equal scales.
    Vec x = Vec::Zero(m);
    double fx = f(x);
    for (double h = 1.0; h > 1e-9 && std::isfinite(fx);) {
      bool moved = false;
      for (int k = 0; k < m && !moved; ++k) {
        for (double sgn : {1.0, -1.0}) {
          Vec y = x;
          y[k] += sgn * h;
          const double fy = f(y);
          if (fy < fx) {
            x = y;
            fx = fy;
            moved = true;
            break;
          }
        }
      }
      if (!moved) h /= 2.0;
    }
    starts.push_back(x);
  }
  for (const auto& lt : starts) {
    std::vector<Vec> w;
    try {
      if (std::isfinite(ratio_slack(bodies, parts, d, lt, &w))) seeds.push_back(std::move(w));
    } catch (const Error&) {
    }
  }
  return seeds;
}

/// Projected Levenberg-Marquardt on the part weights from several
/// deterministic starts; success when the parts' points agree to 1e-7.
std::optional<std::pair<std::vector<Vec>, Vec>> weight_search(const std::vector<Ellipsoid>& bodies,
                                                              const std::vector<std::vector<int>>& parts, int d) {
  const WeightSearch ws{bodies, parts, d};
  Eigen::Index n = 0;
  for (const auto& p : parts) n += static_cast<Eigen::Index>(p.size());
  const auto seeds = ratio_seeds(bodies, parts, d);
  const int total = static_cast<int>(seeds.size()) + 8;
  CounterRng rng(0x3e16);
  for (int start = 0; start < total; ++start) {
    Vec x(n);
    Eigen::Index at = 0;
    const int random = start - static_cast<int>(seeds.size());
    for (std::size_t j = 0; j < parts.size(); ++j) {
      for (std::size_t i = 0; i < parts[j].size(); ++i) {
        x[at++] = random < 0 ? seeds[static_cast<std::size_t>(start)][j][static_cast<Eigen::Index>(i)]
                  : random == 0 ? 1.0
                                : -std::log(1.0 - rng.uniform());
      }
    }
    auto w = split_blocks(x, parts);
    at = 0;
    for (auto& b : w) {
      b /= b.sum();
      x.segment(at, b.size()) = b;
      at += b.size();
    }
    Vec r = ws.residual(w);
    double mu = 1e-3;
    for (int it = 0; it < 200 && r.norm() >= 1e-9 && mu < 1e12; ++it) {
      Mat jac(r.size(), n);
      for (Eigen::Index k = 0; k < n; ++k) {
        Vec xp = x, xm = x;
        const double h = 1e-7;
        xp[k] += h;
        xm[k] -= h;
        auto wp = w, wm = w;
        // unprojected perturbation: the blocks are affine in x before normalizing
        Eigen::Index off = 0;
        for (std::size_t j = 0; j < parts.size(); ++j) {
          const auto len = static_cast<Eigen::Index>(parts[j].size());
          wp[j] = xp.segment(off, len);
          wm[j] = xm.segment(off, len).cwiseMax(0.0);
          off += len;
        }
        jac.col(k) = (ws.residual(wp) - ws.residual(wm)) / (2 * h);
      }
      const Mat jtj = jac.transpose() * jac;
      const Vec g = jac.transpose() * r;
      bool accepted = false;
      while (mu < 1e12) {
        Mat a = jtj;
        a.diagonal().array() += mu * (1.0 + jtj.diagonal().array());
        const Vec step = a.ldlt().solve(-g);
        const Vec xt = x + step;
        const auto wt = split_blocks(xt, parts);
        const Vec rt = ws.residual(wt);
        if (rt.norm() < r.norm()) {
          w = wt;
          at = 0;
          for (const auto& b : w) {
            x.segment(at, b.size()) = b;
            at += b.size();
          }
          r = rt;
          mu = std::max(mu / 3.0, 1e-12);
          accepted = true;
          break;
        }
        mu *= 4.0;
      }
      if (!accepted) break;
    }
    if (r.norm() < 1e-7) {
      Vec mean;
      ws.residual(w, &mean);
      return std::make_pair(w, mean);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<TverbergPartition> common_point(const std::vector<Vec>& points,
                                              const std::vector<std::vector<int>>& parts) {
  if (points.empty()) throw Error(ErrorKind::InvalidInput, "no points");
  const int l = static_cast<int>(points.front().size());
  const int n = static_cast<int>(points.size());
  LinearProgram lp(l + n);
  lp.objective = Vec::Zero(l + n);
  for (int i = 0; i < n; ++i) lp.nonnegative[static_cast<std::size_t>(l + i)] = true;
  for (const auto& part : parts) {
    for (int c = 0; c < l; ++c) {
      Vec row = Vec::Zero(l + n);
      row[c] = -1.0;
      for (int i : part) row[l + i] = points[static_cast<std::size_t>(i)][c];
      lp.add_eq(row, 0.0);
    }
    Vec row = Vec::Zero(l + n);
    for (int i : part) row[l + i] = 1.0;
    lp.add_eq(row, 1.0);
  }
  const LpResult res = solve_lp(lp);
  if (!res.optimal()) return std::nullopt;
  TverbergPartition out;
  out.parts = parts;
  out.common_point = res.x.head(l);
  for (const auto& part : parts) {
    Vec w(static_cast<Eigen::Index>(part.size()));
    for (std::size_t i = 0; i < part.size(); ++i) w[static_cast<Eigen::Index>(i)] = std::max(0.0, res.x[l + part[i]]);
    w /= w.sum();
    out.weights.push_back(w);
  }
  return out;
}

TverbergPartition tverberg_points(const std::vector<Vec>& points, int r, int threads) {
  if (points.empty()) throw Error(ErrorKind::InvalidInput, "no points");
  const auto l = points.front().size();
  for (const auto& p : points) {
    if (p.size() != l) throw Error(ErrorKind::DimensionMismatch, "points of different dimension");
    check_finite(p, "point");
  }
  const auto cands = ordered_partitions(static_cast<int>(points.size()), r);
  auto found = first_success<TverbergPartition>(cands.size(), threads,
                                                [&](std::size_t i) { return common_point(points, cands[i]); });
  if (!found) throw Error(ErrorKind::NotFound, "no partition with intersecting hulls");
  return std::move(*found);
}

std::vector<Vec> audit_directions(int d, int m) {
  check_dim(d);
  std::vector<Vec> out;
  if (d == 1) return {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
  if (m < 64) throw Error(ErrorKind::InvalidInput, "at least 64 audit directions are required");
  if (d == 2) {
    for (int k = 0; k < m; ++k) {
      const double t = 2.0 * std::numbers::pi * k / m;
      Vec u(2);
      u << std::cos(t), std::sin(t);
      out.push_back(u);
    }
  } else if (d == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < m; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / m;
      const double rad = std::sqrt(1.0 - z * z);
      Vec u(3);
      u << rad * std::cos(golden * k), rad * std::sin(golden * k), z;
      out.push_back(u);
    }
  } else {
    CounterRng rng(0xa0d17);
    for (int k = 0; k < m; ++k) out.push_back(rng.unit_vector(d));
    for (int i = 0; i < d; ++i) {
      out.push_back(Vec::Unit(d, i));
      out.push_back(-Vec::Unit(d, i));
    }
  }
  return out;
}

int default_audit_directions(int d) { return d == 2 ? 360 : 1024; }

AuditTable containment_audit(const Body& witness, const std::vector<std::vector<Body>>& parts, int directions) {
  const int d = body_dim(witness);
  AuditTable t;
  t.directions = audit_directions(d, directions > 0 ? directions : default_audit_directions(d));
  const auto m = static_cast<Eigen::Index>(t.directions.size());
  t.gaps.resize(static_cast<Eigen::Index>(parts.size()), m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Vec& u = t.directions[static_cast<std::size_t>(k)];
    const double hw = support(witness, u);
    for (std::size_t j = 0; j < parts.size(); ++j) {
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& b : parts[j]) best = std::max(best, support(b, u));
      t.gaps(static_cast<Eigen::Index>(j), k) = best - hw;
    }
  }
  t.min_gap = t.gaps.size() ? t.gaps.minCoeff() : 0.0;

  bool polytopal = d <= 3 && is_polytopal(witness);
  for (const auto& part : parts) {
    for (const auto& b : part) polytopal = polytopal && is_polytopal(b);
  }
  if (polytopal) {
    t.vertex_audit_run = true;
    const auto wv = body_vertices(witness);
    for (const auto& part : parts) {
      std::vector<Vec> pts;
      for (const auto& b : part) {
        auto v = body_vertices(b);
        pts.insert(pts.end(), v.begin(), v.end());
      }
      for (const auto& x : wv) t.max_vertex_residual = std::max(t.max_vertex_residual, hull_residual(x, pts));
    }
    t.vertex_audit_passed = t.max_vertex_residual <= 1e-6 * std::max(1.0, static_cast<double>(d));
  }
  return t;
}

namespace {

std::vector<std::vector<Body>> group(const std::vector<Body>& bodies, const std::vector<std::vector<int>>& parts) {
  std::vector<std::vector<Body>> out;
  for (const auto& p : parts) {
    std::vector<Body> g;
    for (int i : p) g.push_back(bodies[static_cast<std::size_t>(i)]);
    out.push_back(std::move(g));
  }
  return out;
}

void require_audit(const AuditTable& t) {
  if (t.min_gap < -1e-6) throw Error(ErrorKind::ContainmentAuditFailed, "witness leaves a part hull by " + std::to_string(-t.min_gap));
  if (!t.vertex_audit_passed) throw Error(ErrorKind::ContainmentAuditFailed, "witness vertex outside a part hull");
}

}  // namespace

TverbergCertificate quantitative_tverberg(const std::vector<Body>& witnesses, const Chart& chart, int r,
                                          double threshold, int threads) {
  const int n = static_cast<int>(witnesses.size());
  if (r < 1) throw Error(ErrorKind::InvalidInput, "r must be at least 1");
  if (n < chart.count(r)) {
    throw Error(ErrorKind::PreconditionFailed, "need at least " + std::to_string(chart.count(r)) + " witnesses, got " + std::to_string(n));
  }
  const int d = body_dim(witnesses.front());
  std::vector<Body> prepared;
  std::vector<Vec> lifted, head;
  for (const auto& w : witnesses) {
    if (body_dim(w) != d) throw Error(ErrorKind::DimensionMismatch, "witnesses of different dimension");
    Body p = chart.prepare(w);
    if (chart.objective(p) < threshold - 1e-9) throw Error(ErrorKind::PreconditionFailed, "witness objective below threshold");
    lifted.push_back(chart.lift(p));
    head.push_back(lifted.back().head(chart.dim()));
    prepared.push_back(std::move(p));
  }

  TverbergCertificate cert;
  cert.chart = chart.name();
  cert.r = r;
  cert.threshold = threshold;
  cert.inputs = witnesses;

  const int affine_count = (r - 1) * (chart.dim() + 1) + 1;
  std::optional<TverbergPartition> tp;
  if (n >= affine_count) {
    try {
      tp = tverberg_points(head, r, threads);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotFound || chart.name() != "ellipsoid-det") throw;
    }
  }
  if (tp) {
    cert.partition = tp->parts;
    cert.lifted_common_point = tp->common_point;
    if (chart.hidden() > 0) {
      for (std::size_t j = 0; j < tp->parts.size(); ++j) {
        std::vector<Vec> sub;
        for (int i : tp->parts[j]) sub.push_back(lifted[static_cast<std::size_t>(i)]);
        cert.part_hidden.push_back(chart.combine(sub, tp->weights[j]).tail(chart.hidden()));
      }
    }
  } else {
    if (chart.name() != "ellipsoid-det") throw Error(ErrorKind::NotFound, "no partition with intersecting hulls");
    std::vector<Ellipsoid> ells;
    for (const auto& p : prepared) ells.push_back(std::get<Ellipsoid>(p));
    const auto cands = ordered_partitions(n, r);
    auto found = first_success<std::pair<std::size_t, Vec>>(cands.size(), threads, [&](std::size_t i) -> std::optional<std::pair<std::size_t, Vec>> {
      auto res = weight_search(ells, cands[i], d);
      if (!res) return std::nullopt;
      return std::make_pair(i, res->second);
    });
    if (!found) throw Error(ErrorKind::NotFound, "weight search found no common point");
    cert.partition = cands[found->first];
    cert.lifted_common_point = found->second;
    cert.weight_search = true;
  }
  cert.decoded_witness = chart.decode(cert.lifted_common_point, cert.part_hidden);
  cert.objective_value = chart.objective(cert.decoded_witness);
  cert.evidence = containment_audit(cert.decoded_witness, group(witnesses, cert.partition));
  require_audit(cert.evidence);
  return cert;
}

TverbergCertificate volume_tverberg(const std::vector<HPolytope>& bodies, int r, int threads) {
  if (bodies.empty()) throw Error(ErrorKind::InvalidInput, "no bodies");
  const int d = bodies.front().dim();
  if (d != 2) throw Error(ErrorKind::DimensionTooLarge, "volume version is implemented in the plane only");
  std::vector<Body> ells;
  double target = std::numeric_limits<double>::infinity();
  for (const auto& b : bodies) {
    if (b.dim() != d) throw Error(ErrorKind::DimensionMismatch, "bodies of different dimension");
    if (!b.bounded()) throw Error(ErrorKind::Unbounded, "body is unbounded");
    if (volume(b) < 1.0 - 1e-9) throw Error(ErrorKind::PreconditionFailed, "body volume below one");
    const HPolytope one[] = {b};
    SolveReport rep = max_volume_ellipsoid(one);
    if (!rep.witness) throw Error(ErrorKind::NumericalFailure, "no inscribed ellipsoid");
    target = std::min(target, rep.objective_value);
    ells.push_back(*rep.witness);
  }
  const int needed = (r - 1) * (d * (d + 3) / 2 + 1) + 1;
  if (static_cast<int>(bodies.size()) < needed) {
    throw Error(ErrorKind::PreconditionFailed, "need at least " + std::to_string(needed) + " bodies");
  }
  const auto chart = ellipsoid_det_chart(d, target);
  TverbergCertificate cert = quantitative_tverberg(ells, *chart, r, target * (1.0 - 1e-9), threads);
  cert.chart = "volume";
  cert.inputs.assign(bodies.begin(), bodies.end());
  cert.evidence = containment_audit(cert.decoded_witness, group(cert.inputs, cert.partition));
  require_audit(cert.evidence);
  return cert;
}

Json to_json(const TverbergCertificate& cert) {
  Json j;
  j["chart"] = cert.chart;
  j["r"] = cert.r;
  j["threshold"] = cert.threshold;
  Json inputs = Json::array();
  for (const auto& b : cert.inputs) inputs.push_back(to_json(b));
  j["inputs"] = inputs;
  j["partition"] = cert.partition;
  j["lifted_common_point"] = to_json(cert.lifted_common_point);
  Json hid = Json::array();
  for (const auto& h : cert.part_hidden) hid.push_back(to_json(h));
  j["part_hidden"] = hid;
  j["decoded_witness"] = to_json(cert.decoded_witness);
  j["objective_value"] = cert.objective_value;
  j["weight_search"] = cert.weight_search;
  Json ev;
  ev["directions"] = cert.evidence.directions.size();
  ev["min_gap"] = cert.evidence.min_gap;
  Json gaps = Json::array();
  for (Eigen::Index p = 0; p < cert.evidence.gaps.rows(); ++p) gaps.push_back(to_json(Vec(cert.evidence.gaps.row(p).transpose())));
  ev["gaps"] = gaps;
  ev["vertex_audit"] = {{"run", cert.evidence.vertex_audit_run},
                        {"passed", cert.evidence.vertex_audit_passed},
                        {"max_residual", cert.evidence.max_vertex_residual}};
  j["containment_evidence"] = ev;
  return j;
}

}  // namespace qh
