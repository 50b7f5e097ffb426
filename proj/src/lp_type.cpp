#include "qhelly/lp_type.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qhelly/generators.hpp"

namespace qh {

namespace {

class Runner {
 public:
  Runner(const LpTypeProblem& p, RunStats& st) : p_(p), st_(st) {}

  SolveReport call(std::vector<int>& idx) {
    std::sort(idx.begin(), idx.end());
    ++st_.oracle_calls;
    return p_.basis_oracle(idx);
  }

  double value(const SolveReport& r) const {
    if (r.status == SolveStatus::Infeasible) return std::numeric_limits<double>::infinity();
    if (r.status == SolveStatus::Unbounded) return -std::numeric_limits<double>::infinity();
    return p_.value(r);
  }

  bool violates(const SolveReport& r, int c) {
    ++st_.violation_tests;
    return p_.violates(r, c);
  }

  // Scans seq past the basis, which occupies its first |basis| entries.
  void run(const std::vector<int>& seq, std::vector<int>& basis, SolveReport& sol, int depth) {
    st_.recursion_depth = std::max(st_.recursion_depth, depth);
    for (std::size_t i = basis.size(); i < seq.size(); ++i) {
      if (sol.status == SolveStatus::Infeasible) return;
      if (!violates(sol, seq[i])) continue;
      std::vector<int> cand = basis;
      cand.push_back(seq[i]);
      std::sort(cand.begin(), cand.end());
      best_tuple(cand, basis, sol);
      std::vector<int> next = basis;
      for (std::size_t j = 0; j <= i; ++j) {
        if (std::find(basis.begin(), basis.end(), seq[j]) == basis.end()) next.push_back(seq[j]);
      }
      run(next, basis, sol, depth + 1);
    }
  }

 private:
  // Every delta-tuple of cand; highest value wins, preferring tuples whose
  // solution no candidate violates, ties to the lexicographically first.
  void best_tuple(const std::vector<int>& cand, std::vector<int>& basis, SolveReport& sol) {
    const int n = static_cast<int>(cand.size());
    const int k = std::min(n, p_.combinatorial_dim);
    std::vector<int> pick(k);
    for (int i = 0; i < k; ++i) pick[i] = i;
    bool have = false, have_valid = false;
    double best_val = 0.0;
    for (;;) {
      std::vector<int> tuple(k);
      for (int i = 0; i < k; ++i) tuple[i] = cand[pick[i]];
      SolveReport r = call(tuple);
      const double v = value(r);
      bool valid = true;
      if (r.status != SolveStatus::Infeasible) {
        for (int c : cand) {
          if (std::find(tuple.begin(), tuple.end(), c) != tuple.end()) continue;
          if (violates(r, c)) {
            valid = false;
            break;
          }
        }
      }
      const bool better = !have || (valid && !have_valid) || (valid == have_valid && v > best_val);
      if (better) {
        have = true;
        have_valid = valid;
        best_val = v;
        basis = tuple;
        sol = std::move(r);
      }
      int i = k - 1;
      while (i >= 0 && pick[i] == n - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }

  const LpTypeProblem& p_;
  RunStats& st_;
};

}  // namespace

LpTypeResult solve(const LpTypeProblem& problem, std::uint64_t seed) {
  if (problem.num_constraints < 1) throw Error(ErrorKind::InvalidInput, "LP-type problem has no constraints");
  if (problem.combinatorial_dim < 1) throw Error(ErrorKind::InvalidInput, "combinatorial dimension must be >= 1");
  LpTypeResult out;
  out.stats.seed = seed;
  Runner runner(problem, out.stats);

  std::vector<int> seq(problem.num_constraints);
  for (int i = 0; i < problem.num_constraints; ++i) seq[i] = i;
  CounterRng rng(seed);
  for (int i = problem.num_constraints - 1; i > 0; --i) std::swap(seq[i], seq[rng.uniform_int(0, i)]);

  const int k = std::min(problem.num_constraints, problem.combinatorial_dim);
  std::vector<int> basis(seq.begin(), seq.begin() + k);
  SolveReport sol = runner.call(basis);
  // keep the basis at the front of the scan order in oracle order
  std::vector<int> order = basis;
  order.insert(order.end(), seq.begin() + k, seq.end());
  runner.run(order, basis, sol, 0);
  out.report = std::move(sol);
  out.basis = std::move(basis);
  return out;
}

// --- instantiations ---------------------------------------------------------------

LpTypeProblem box_lp_type(std::shared_ptr<const std::vector<HPolytope>> family) {
  if (!family || family->empty()) throw Error(ErrorKind::InvalidInput, "empty family");
  LpTypeProblem p;
  p.num_constraints = static_cast<int>(family->size());
  p.combinatorial_dim = 2 * family->front().dim();
  p.basis_oracle = [family](std::span<const int> idx) {
    std::vector<HPolytope> sub;
    for (int i : idx) sub.push_back((*family)[i]);
    return max_volume_box(sub);
  };
  p.violates = [family](const SolveReport& r, int c) {
    if (!r.witness) return true;
    const auto& box = std::get<AxisBox>(*r.witness);
    for (const auto& h : (*family)[c].halfspaces()) {
      if (support(box, h.normal) > h.offset + kViolationTol) return true;
    }
    return false;
  };
  p.value = [](const SolveReport& r) { return -r.objective_value; };
  return p;
}

namespace {

struct BallFit {
  bool ok = false;
  Vec center;
  double radius = 0.0;
};

// Circumscribed ball of the points within their affine hull.
BallFit circumball(const std::vector<Vec>& pts) {
  BallFit f;
  const Vec& p0 = pts.front();
  const int k = static_cast<int>(pts.size()) - 1;
  if (k == 0) {
    f.ok = true;
    f.center = p0;
    return f;
  }
  Mat diff(p0.size(), k);
  for (int j = 0; j < k; ++j) diff.col(j) = pts[j + 1] - p0;
  const Mat m = 2.0 * diff.transpose() * diff;
  Vec rhs(k);
  for (int j = 0; j < k; ++j) rhs[j] = diff.col(j).squaredNorm();
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) return f;
  const Vec t = lu.solve(rhs);
  f.ok = true;
  f.center = p0 + diff * t;
  f.radius = (f.center - p0).norm();
  return f;
}

SolveReport ball_report(const BallFit& b) {
  SolveReport r;
  r.status = SolveStatus::Optimal;
  r.objective_value = b.radius;
  r.metrics["radius"] = b.radius;
  const int d = static_cast<int>(b.center.size());
  if (b.radius > 0.0) {
    r.witness = Ellipsoid(b.center, b.radius * Mat::Identity(d, d));
  } else {
    r.witness = AxisBox(b.center, Vec::Zero(d));
  }
  return r;
}

Vec body_center(const Body& b) {
  if (const auto* e = std::get_if<Ellipsoid>(&b)) return e->center;
  return std::get<AxisBox>(b).center;
}

}  // namespace

LpTypeProblem enclosing_ball_lp_type(std::shared_ptr<const std::vector<Vec>> points) {
  if (!points || points->empty()) throw Error(ErrorKind::InvalidInput, "no points");
  LpTypeProblem p;
  p.num_constraints = static_cast<int>(points->size());
  p.combinatorial_dim = static_cast<int>(points->front().size()) + 1;
  p.basis_oracle = [points](std::span<const int> idx) {
    const int n = static_cast<int>(idx.size());
    BallFit best;
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<Vec> sub;
      for (int i = 0; i < n; ++i) {
        if (mask & (1 << i)) sub.push_back((*points)[idx[i]]);
      }
      const BallFit f = circumball(sub);
      if (!f.ok || (best.ok && f.radius >= best.radius)) continue;
      bool covers = true;
      for (int i : idx) {
        if (((*points)[i] - f.center).norm() > f.radius * (1.0 + 1e-12) + 1e-12) {
          covers = false;
          break;
        }
      }
      if (covers) best = f;
    }
    return ball_report(best);
  };
  p.violates = [points](const SolveReport& r, int c) {
    return ((*points)[c] - body_center(*r.witness)).norm() > r.metrics.at("radius") + kViolationTol;
  };
  p.value = [](const SolveReport& r) { return r.objective_value; };
  return p;
}

LpTypeProblem approx_lp_type(std::shared_ptr<const std::vector<HPolytope>> family, ApproxClass cls) {
  if (!family || family->empty()) throw Error(ErrorKind::InvalidInput, "empty family");
  const int d = family->front().dim();
  LpTypeProblem p;
  p.num_constraints = static_cast<int>(family->size());
  p.combinatorial_dim = static_cast<int>(cls.directions.cols()) + d + 1;
  auto shared = std::make_shared<const ApproxClass>(std::move(cls));
  p.basis_oracle = [family, shared](std::span<const int> idx) {
    std::vector<HPolytope> sub;
    for (int i : idx) sub.push_back((*family)[i]);
    const ApproxResult a = min_eps_approx(sub, *shared);
    SolveReport r;
    r.status = SolveStatus::Optimal;
    r.objective_value = a.eps;
    r.witness = a.witness;
    for (int i = 0; i < a.translate.size(); ++i) r.metrics["translate_" + std::to_string(i)] = a.translate[i];
    return r;
  };
  p.violates = [family, shared, d](const SolveReport& r, int c) {
    // The bisection bracket is 1e-6; allow twice that before calling a violation.
    const double slack = 2e-6;
    Vec a(d);
    for (int i = 0; i < d; ++i) a[i] = r.metrics.at("translate_" + std::to_string(i));
    const auto& k = (*family)[c];
    Zonotope w = std::holds_alternative<AxisBox>(*r.witness) ? Zonotope::from_box(std::get<AxisBox>(*r.witness))
                                                              : std::get<Zonotope>(*r.witness);
    w.center = a;
    for (const auto& h : k.halfspaces()) {
      if (support(w, h.normal) > h.offset + kViolationTol) return true;
    }
    w.coeffs *= 1.0 + r.objective_value + slack;
    for (const auto& x : vertices(k)) {
      if (!contains_point(Body(w), x, kViolationTol)) return true;
    }
    return false;
  };
  p.value = [](const SolveReport& r) { return r.objective_value; };
  return p;
}

// --- benchmarking -------------------------------------------------------------------

std::vector<BenchRow> lp_type_bench(const LpTypeGenerator& gen, std::span<const int> sizes, int trials,
                                    std::uint64_t seed) {
  std::vector<BenchRow> rows;
  const CounterRng master(seed);
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    for (int t = 0; t < trials; ++t) {
      CounterRng rng = master.split(s * 1000003ULL + static_cast<std::uint64_t>(t));
      const LpTypeProblem prob = gen(sizes[s], rng);
      const std::uint64_t run_seed = rng.next_u64();
      const auto res = solve(prob, run_seed);
      rows.push_back({sizes[s], t, run_seed, res.stats.oracle_calls, res.stats.violation_tests,
                      res.report.objective_value});
    }
  }
  return rows;
}

std::vector<CallsRow> calibrate_calls(const LpTypeGenerator& gen, std::span<const int> sizes, int trials,
                                      std::uint64_t seed) {
  std::vector<CallsRow> out;
  if (trials <= 0) return out;
  const auto rows = lp_type_bench(gen, sizes, trials, seed);
  for (int n : sizes) {
    double total = 0.0;
    int count = 0;
    for (const auto& r : rows) {
      if (r.n == n) {
        total += static_cast<double>(r.oracle_calls);
        ++count;
      }
    }
    out.push_back({n, total / count});
  }
  return out;
}

LpTypeGenerator enclosing_ball_generator(int d) {
  return [d](int n, CounterRng& rng) {
    auto pts = std::make_shared<std::vector<Vec>>();
    for (int i = 0; i < n; ++i) {
      Vec p(d);
      for (int j = 0; j < d; ++j) p[j] = rng.uniform();
      pts->push_back(p);
    }
    return enclosing_ball_lp_type(pts);
  };
}

LpTypeGenerator max_box_generator(int d) {
  return [d](int n, CounterRng& rng) {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::TangentHalfspaces;
    spec.dim = d;
    spec.count = n;
    spec.planted = Ellipsoid(Vec::Zero(d), Mat::Identity(d, d));
    spec.halfspaces_per_body = 1;
    return box_lp_type(std::make_shared<const std::vector<HPolytope>>(random_family(spec, rng.next_u64())));
  };
}

}  // namespace qh
