#pragma once

// Independent planar geometry used as test oracles. Nothing here calls the
// library's solvers.

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using P2 = std::array<double, 2>;

inline double cross(const P2& o, const P2& a, const P2& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

/// Counter-clockwise convex hull (Andrew's monotone chain).
inline std::vector<P2> hull(std::vector<P2> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<P2> h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

inline double area(const std::vector<P2>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    s += a[0] * b[1] - a[1] * b[0];
  }
  return 0.5 * std::abs(s);
}

/// Signed distance outside a ccw convex polygon (negative inside).
inline double outside(const std::vector<P2>& poly, const P2& x) {
  double worst = -1e300;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    worst = std::max(worst, -cross(a, b, x) / len);
  }
  return worst;
}

/// Area of center + sum_i [-c_i/2, c_i/2] g_i by brute-force vertex sums.
inline double zonotope_area(const std::vector<P2>& gens, const std::vector<double>& coeffs) {
  std::vector<P2> pts;
  const std::size_t k = gens.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    P2 p{0, 0};
    for (std::size_t i = 0; i < k; ++i) {
      const double s = (mask >> i & 1U) ? 0.5 : -0.5;
      p[0] += s * coeffs[i] * gens[i][0];
      p[1] += s * coeffs[i] * gens[i][1];
    }
    pts.push_back(p);
  }
  return area(hull(pts));
}

struct Line {
  double n0, n1, b;  // n . x <= b
};

/// Random-direction hill climbing maximizing f from each start, halving the
/// step when no direction improves. Handles the ridges of min-of-linear objectives.
inline double pattern_search(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<std::vector<double>>& starts, double step, double min_step) {
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  auto unit = [&state]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  };
  double best = -1e300;
  for (auto x : starts) {
    double fx = f(x);
    double s = step;
    while (s > min_step) {
      bool improved = false;
      for (int trial = 0; trial < 24 * static_cast<int>(x.size()); ++trial) {
        std::vector<double> dir(x.size());
        double norm = 0.0;
        for (auto& v : dir) {
          v = unit();
          norm += v * v;
        }
        norm = std::sqrt(norm);
        auto y = x;
        for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * dir[i] / norm;
        const double fy = f(y);
        if (fy > fx) {
          x = y;
          fx = fy;
          improved = true;
        }
      }
      if (!improved) s *= 0.5;
    }
    best = std::max(best, fx);
  }
  return best;
}

/// Starts for pattern_search: the best grid points.
inline std::vector<std::vector<double>> top_points(std::vector<std::pair<double, std::vector<double>>> scored,
                                                   std::size_t count) {
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < std::min(count, scored.size()); ++i) out.push_back(scored[i].second);
  return out;
}

/// max t subject to n.c + t * g(n) <= b over (c, t), by enumerating every
/// triple of tight constraints (3x3 Cramer solves).
inline double max_scale(const std::vector<Line>& lines, const std::function<double(const Line&)>& g) {
  double best = -1e300;
  const std::size_t m = lines.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      for (std::size_t k = j + 1; k < m; ++k) {
        const Line* l[3] = {&lines[i], &lines[j], &lines[k]};
        double a[3][3], rhs[3];
        for (int r = 0; r < 3; ++r) {
          a[r][0] = l[r]->n0;
          a[r][1] = l[r]->n1;
          a[r][2] = g(*l[r]);
          rhs[r] = l[r]->b;
        }
        auto det3 = [](double m3[3][3]) {
          return m3[0][0] * (m3[1][1] * m3[2][2] - m3[1][2] * m3[2][1]) -
                 m3[0][1] * (m3[1][0] * m3[2][2] - m3[1][2] * m3[2][0]) +
                 m3[0][2] * (m3[1][0] * m3[2][1] - m3[1][1] * m3[2][0]);
        };
        const double det = det3(a);
        if (std::abs(det) < 1e-12) continue;
        double x[3];
        for (int c = 0; c < 3; ++c) {
          double t[3][3];
          for (int r = 0; r < 3; ++r) {
            for (int q = 0; q < 3; ++q) t[r][q] = q == c ? rhs[r] : a[r][q];
          }
          x[c] = det3(t) / det;
        }
        bool ok = x[2] >= 0;
        for (const auto& ln : lines) ok = ok && ln.n0 * x[0] + ln.n1 * x[1] + x[2] * g(ln) <= ln.b + 1e-12;
        if (ok) best = std::max(best, x[2]);
      }
    }
  }
  return best;
}

/// Largest axis box area in a polygon: scan the aspect angle, best placement
/// per angle in closed form, then golden refinement.
inline double box_grid(const std::vector<Line>& lines) {
  auto f = [&](const std::vector<double>& v) {
    const double w = std::cos(v[0]), h = std::sin(v[0]);
    if (w <= 0 || h <= 0) return -1.0;
    const double t = max_scale(lines, [&](const Line& l) { return std::abs(l.n0) * w + std::abs(l.n1) * h; });
    return 4.0 * t * t * w * h;
  };
  std::vector<std::pair<double, std::vector<double>>> scored;
  for (int k = 1; k < 200; ++k) {
    std::vector<double> v{std::numbers::pi / 2 * k / 200};
    scored.emplace_back(f(v), v);
  }
  return pattern_search(f, top_points(std::move(scored), 3), std::numbers::pi / 400, 1e-10);
}

/// Largest ellipse area in a polygon: grid over (angle, log aspect), best
/// placement per shape in closed form, then hill-climbing refinement.
inline double ellipse_grid(const std::vector<Line>& lines) {
  auto f = [&](const std::vector<double>& v) {
    const double c = std::cos(v[0]), s = std::sin(v[0]);
    const double a1 = std::exp(v[1]), a2 = std::exp(-v[1]);
    const double t = max_scale(lines, [&](const Line& l) {
      const double p = c * l.n0 + s * l.n1, q = -s * l.n0 + c * l.n1;
      return std::hypot(a1 * p, a2 * q);
    });
    return std::numbers::pi * t * t;
  };
  std::vector<std::pair<double, std::vector<double>>> scored;
  for (int k = 0; k < 90; ++k) {
    for (int m = -40; m <= 40; ++m) {
      std::vector<double> v{std::numbers::pi * k / 90, 0.05 * m};
      scored.emplace_back(f(v), v);
    }
  }
  return pattern_search(f, top_points(std::move(scored), 3), 0.05, 1e-10);
}

}  // namespace oracle
