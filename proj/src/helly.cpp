#include "qhelly/helly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "qhelly/generators.hpp"
#include "qhelly/rng.hpp"

namespace qh {

double score(const SolveReport& report) {
  switch (report.status) {
    case SolveStatus::Unbounded: return std::numeric_limits<double>::infinity();
    case SolveStatus::Infeasible: return -std::numeric_limits<double>::infinity();
    default: return report.objective_value;
  }
}

namespace {

bool next_combination(std::vector<int>& pick, int n) {
  const int k = static_cast<int>(pick.size());
  int i = k - 1;
  while (i >= 0 && pick[i] == n - k + i) --i;
  if (i < 0) return false;
  ++pick[i];
  for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
  return true;
}

std::vector<int> first_combination(int k) {
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  return pick;
}

std::vector<HPolytope> pick_bodies(std::span<const HPolytope> family, std::span<const int> idx) {
  std::vector<HPolytope> out;
  for (int i : idx) out.push_back(family[i]);
  return out;
}

double rel_slack(double slack, double threshold) {
  return slack * std::max(1.0, std::isfinite(threshold) ? std::abs(threshold) : 1.0);
}

HellyCheckResult helly_core(std::span<const HPolytope> family, int k, const WitnessSolver& solver,
                            double premise_threshold, double conclusion_threshold) {
  const int n = static_cast<int>(family.size());
  if (k < 1) throw Error(ErrorKind::InvalidInput, "subset size must be positive");
  if (n < k) throw Error(ErrorKind::InvalidInput, "family smaller than the Helly number");
  if (n > kMaxHellyFamily) throw Error(ErrorKind::TooManySubsets, "family too large for exhaustive subsets");
  HellyCheckResult res;
  res.premise_holds = true;
  res.min_subset_value = std::numeric_limits<double>::infinity();
  auto pick = first_combination(k);
  do {
    const auto sub = pick_bodies(family, pick);
    const double v = score(solver(sub));
    res.min_subset_value = std::min(res.min_subset_value, v);
    if (v < premise_threshold && res.premise_holds) {
      res.premise_holds = false;
      res.violating_subset = pick;
    }
  } while (next_combination(pick, n));
  const SolveReport full = solver(family);
  res.conclusion_value = score(full);
  res.conclusion_holds = res.conclusion_value >= conclusion_threshold;
  res.witness = full.witness;
  return res;
}

}  // namespace

HellyCheckResult check_helly(std::span<const HPolytope> family, int k, const WitnessSolver& solver,
                             double threshold, double slack) {
  return helly_core(family, k, solver, threshold - rel_slack(kPremiseSlack, threshold),
                    threshold - rel_slack(slack, threshold));
}

// --- matroids -------------------------------------------------------------------

PartitionMatroid::PartitionMatroid(std::vector<std::vector<int>> classes) : classes_(std::move(classes)) {
  for (const auto& c : classes_) n_ += static_cast<int>(c.size());
  class_of_.assign(n_, -1);
  for (int ci = 0; ci < static_cast<int>(classes_.size()); ++ci) {
    if (classes_[ci].empty()) throw Error(ErrorKind::InvalidInput, "empty matroid class");
    for (int v : classes_[ci]) {
      if (v < 0 || v >= n_ || class_of_[v] != -1) throw Error(ErrorKind::InvalidInput, "classes must partition 0..n-1");
      class_of_[v] = ci;
    }
  }
}

PartitionMatroid PartitionMatroid::free(int n) {
  std::vector<std::vector<int>> cls;
  for (int i = 0; i < n; ++i) cls.push_back({i});
  return PartitionMatroid(std::move(cls));
}

int PartitionMatroid::rank(std::span<const int> s) const {
  std::vector<bool> hit(classes_.size(), false);
  int r = 0;
  for (int v : s) {
    if (v < 0 || v >= n_) throw Error(ErrorKind::InvalidInput, "element out of range");
    if (!hit[class_of_[v]]) {
      hit[class_of_[v]] = true;
      ++r;
    }
  }
  return r;
}

bool PartitionMatroid::independent(std::span<const int> s) const {
  std::vector<int> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  return rank(s) == static_cast<int>(s.size());
}

namespace {

// Solves subfamilies keyed by their set of distinct bodies.
class MemoSolver {
 public:
  MemoSolver(std::span<const HPolytope> family, const WitnessSolver& solver) : family_(family), solver_(solver) {
    canon_.resize(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
      canon_[i] = static_cast<int>(i);
      for (std::size_t j = 0; j < i; ++j) {
        if (family[j] == family[i]) {
          canon_[i] = canon_[j];
          break;
        }
      }
    }
  }

  const SolveReport& get(std::span<const int> idx) {
    std::vector<int> key;
    for (int i : idx) key.push_back(canon_[i]);
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    SolveReport r;
    if (key.empty()) {
      r.status = SolveStatus::Unbounded;
    } else {
      r = solver_(pick_bodies(family_, key));
    }
    ++solves_;
    return memo_.emplace(key, std::move(r)).first->second;
  }

  long solves() const { return solves_; }

 private:
  std::span<const HPolytope> family_;
  const WitnessSolver& solver_;
  std::vector<int> canon_;
  std::map<std::vector<int>, SolveReport> memo_;
  long solves_ = 0;
};

// Calls fn on every choice of one element per class.
void for_each_transversal(const std::vector<std::vector<int>>& classes, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<std::size_t> at(classes.size(), 0);
  std::vector<int> pick(classes.size());
  for (;;) {
    for (std::size_t c = 0; c < classes.size(); ++c) pick[c] = classes[c][at[c]];
    fn(pick);
    std::size_t c = classes.size();
    while (c > 0) {
      --c;
      if (++at[c] < classes[c].size()) break;
      at[c] = 0;
      if (c == 0) return;
    }
    if (classes.empty()) return;
  }
}

long transversal_count(const std::vector<std::vector<int>>& classes) {
  long total = 1;
  for (const auto& c : classes) {
    total *= static_cast<long>(c.size());
    if (total > kMaxIndependentSets) return total;
  }
  return total;
}

}  // namespace

MatroidHellyResult check_matroid_helly(std::span<const HPolytope> family, const PartitionMatroid& matroid,
                                       const WitnessSolver& solver, double threshold, int rank_bound, double slack) {
  if (matroid.ground_size() != static_cast<int>(family.size())) {
    throw Error(ErrorKind::DimensionMismatch, "matroid ground set does not match the family");
  }
  const auto& classes = matroid.classes();
  if (transversal_count(classes) > kMaxIndependentSets) {
    throw Error(ErrorKind::TooManyTransversals, "too many independent sets");
  }
  MemoSolver memo(family, solver);
  MatroidHellyResult res;
  res.min_independent_value = std::numeric_limits<double>::infinity();
  for_each_transversal(classes, [&](const std::vector<int>& pick) {
    res.min_independent_value = std::min(res.min_independent_value, score(memo.get(pick)));
  });
  res.premise_holds = res.min_independent_value >= threshold - rel_slack(kPremiseSlack, threshold);

  const double target = threshold - rel_slack(slack, threshold);
  const int num_classes = static_cast<int>(classes.size());
  const int need = std::clamp(num_classes - rank_bound, 0, num_classes);
  auto pick = first_combination(need);
  do {
    std::vector<int> tau;
    for (int c : pick) tau.insert(tau.end(), classes[c].begin(), classes[c].end());
    std::sort(tau.begin(), tau.end());
    if (score(memo.get(tau)) < target) continue;
    for (int v = 0; v < matroid.ground_size(); ++v) {
      if (std::binary_search(tau.begin(), tau.end(), v)) continue;
      std::vector<int> grown = tau;
      grown.insert(std::upper_bound(grown.begin(), grown.end(), v), v);
      if (score(memo.get(grown)) >= target) tau = std::move(grown);
    }
    const SolveReport& r = memo.get(tau);
    res.tau = tau;
    res.tau_value = score(r);
    res.witness = r.witness;
    break;
  } while (need > 0 && next_combination(pick, num_classes));
  res.distinct_solves = memo.solves();
  return res;
}

ColorfulResult check_colorful_helly(const std::vector<std::vector<HPolytope>>& classes, const WitnessSolver& solver,
                                    double threshold, int expected_classes, double slack) {
  if (static_cast<int>(classes.size()) != expected_classes) {
    throw Error(ErrorKind::TheoremArityMismatch, "class count does not match the theorem");
  }
  std::vector<HPolytope> flat;
  std::vector<std::vector<int>> idx;
  for (const auto& c : classes) {
    if (c.empty()) throw Error(ErrorKind::InvalidInput, "empty color class");
    if (static_cast<int>(c.size()) > kMaxClassSize) throw Error(ErrorKind::TooManyTransversals, "color class too large");
    std::vector<int> ids;
    for (const auto& p : c) {
      ids.push_back(static_cast<int>(flat.size()));
      flat.push_back(p);
    }
    idx.push_back(std::move(ids));
  }
  const PartitionMatroid m(idx);
  const auto r = check_matroid_helly(flat, m, solver, threshold, expected_classes - 1, slack);
  ColorfulResult out;
  out.premise_holds = r.premise_holds;
  if (!r.premise_holds) return out;
  // report the first class whose full intersection carries the witness
  MemoSolver memo(flat, solver);
  for (int c = 0; c < static_cast<int>(idx.size()); ++c) {
    const SolveReport& rep = memo.get(idx[c]);
    if (score(rep) >= threshold - rel_slack(slack, threshold)) {
      out.class_index = c;
      out.witness = rep.witness;
      break;
    }
  }
  return out;
}

HellyCheckResult check_diameter_theorems(std::span<const HPolytope> family, int k, DiameterVariant variant,
                                         const Mat& hset) {
  if (family.empty()) throw Error(ErrorKind::InvalidInput, "empty family");
  const int d = family.front().dim();
  WitnessSolver solver;
  double guarantee = 0.0;
  int arity = 0;
  switch (variant) {
    case DiameterVariant::BoxDiameter:
      arity = 2 * d;
      guarantee = 1.0 / std::sqrt(static_cast<double>(d));
      solver = [](std::span<const HPolytope> f) { return max_box_diameter(f); };
      break;
    case DiameterVariant::IncreasingDiameter:
      arity = 2 * d;
      guarantee = 1.0 / std::sqrt(static_cast<double>(d));
      solver = [](std::span<const HPolytope> f) { return max_increasing_segment(f, SegmentNorm::L2); };
      break;
    case DiameterVariant::HConvexDiameter:
      arity = static_cast<int>(hset.cols());
      guarantee = 1.0 / std::sqrt(static_cast<double>(arity));
      solver = [hset](std::span<const HPolytope> f) { return max_hconvex(f, hset, HConvexObjective::Diameter); };
      break;
  }
  if (k != arity) throw Error(ErrorKind::TheoremArityMismatch, "subset size does not match the theorem");
  return helly_core(family, k, solver, 1.0 - kPremiseSlack, guarantee - kPremiseSlack);
}

// --- suites -------------------------------------------------------------------------

std::string_view to_string(Theorem t) {
  switch (t) {
    case Theorem::Box: return "box";
    case Theorem::Zonotope: return "zonotope";
    case Theorem::Ellipsoid: return "ellipsoid";
    case Theorem::HConvex: return "hconvex";
    case Theorem::AxisEllipsoid: return "axis-ellipsoid";
    case Theorem::Centered: return "centered";
    case Theorem::Translate: return "translate";
    case Theorem::BoxDiameter: return "box-diam";
    case Theorem::IncreasingDiameter: return "incr-diam";
  }
  return "unknown";
}

std::optional<Theorem> theorem_from_string(std::string_view s) {
  for (Theorem t : {Theorem::Box, Theorem::Zonotope, Theorem::Ellipsoid, Theorem::HConvex, Theorem::AxisEllipsoid,
                    Theorem::Centered, Theorem::Translate, Theorem::BoxDiameter, Theorem::IncreasingDiameter}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

int SuiteReport::failures() const {
  return static_cast<int>(std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.failed(); }));
}

int SuiteReport::premise_count() const {
  return static_cast<int>(std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.premise_holds; }));
}

namespace {

struct SuiteCase {
  std::vector<HPolytope> family;
  WitnessSolver solver;
  int k = 0;
  double premise_threshold = 0.0;
  double conclusion_threshold = 0.0;
  // Solver whose optimum obeys the Helly number exactly (surrogate for diameters).
  WitnessSolver tight_solver;
  bool matroid = false;
};

Vec random_center(int d, CounterRng& rng) {
  Vec c(d);
  for (int i = 0; i < d; ++i) c[i] = rng.uniform(-1.0, 1.0);
  return c;
}

Vec orthant_direction(int d, CounterRng& rng) {
  Vec w(d);
  for (int i = 0; i < d; ++i) w[i] = rng.uniform(0.2, 1.0);
  return w.normalized();
}

Mat zonotope_directions(int d) {
  Mat dirs(d, d + 1);
  dirs.leftCols(d) = Mat::Identity(d, d);
  dirs.col(d) = Vec::Ones(d).normalized();
  return dirs;
}

Mat random_hset(int m, CounterRng& rng) {
  for (;;) {
    std::vector<double> ang(m);
    for (auto& a : ang) a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    std::sort(ang.begin(), ang.end());
    double max_gap = ang.front() + 2.0 * std::numbers::pi - ang.back();
    double min_gap = max_gap;
    for (int i = 0; i + 1 < m; ++i) {
      max_gap = std::max(max_gap, ang[i + 1] - ang[i]);
      min_gap = std::min(min_gap, ang[i + 1] - ang[i]);
    }
    if (max_gap > 0.8 * std::numbers::pi || min_gap < 0.15) continue;
    Mat h(2, m);
    for (int i = 0; i < m; ++i) h.col(i) << std::cos(ang[i]), std::sin(ang[i]);
    return h;
  }
}

HPolytope random_shape(int d, CounterRng& rng) {
  if (d == 2) {
    std::vector<Vec> pts;
    const int n = rng.uniform_int(3, 5);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < n; ++i) {
      const double a = phase + 2.0 * std::numbers::pi * (i + rng.uniform(-0.3, 0.3)) / n;
      const double r = rng.uniform(0.6, 1.2);
      pts.push_back(Vec(Eigen::Vector2d(r * std::cos(a), r * std::sin(a))));
    }
    return HPolytope::polygon(pts);
  }
  Vec hw(d);
  for (int i = 0; i < d; ++i) hw[i] = rng.uniform(0.4, 1.0);
  return HPolytope::box(-hw, hw);
}

SuiteCase make_case(Theorem th, int d, CounterRng& rng) {
  SuiteCase sc;
  GeneratorSpec spec;
  spec.dim = d;
  spec.count = 8;
  spec.kind = GeneratorKind::RandomPolytopeIntersections;
  double planted_value = 0.0;
  switch (th) {
    case Theorem::Box: {
      AxisBox b(random_center(d, rng), Vec(orthant_direction(d, rng) * 1.2));
      planted_value = volume(b);
      spec.planted = b;
      sc.k = 2 * d;
      sc.solver = [](std::span<const HPolytope> f) { return max_volume_box(f); };
      break;
    }
    case Theorem::Zonotope: {
      const Mat dirs = zonotope_directions(d);
      Vec alpha(d + 1);
      for (int i = 0; i <= d; ++i) alpha[i] = rng.uniform(0.5, 1.5);
      Zonotope z(random_center(d, rng), dirs, alpha);
      planted_value = volume(z);
      spec.planted = z;
      sc.k = (d + 1) + d;
      sc.solver = [dirs](std::span<const HPolytope> f) { return max_volume_zonotope(f, dirs); };
      break;
    }
    case Theorem::Ellipsoid:
    case Theorem::AxisEllipsoid:
    case Theorem::Centered: {
      Mat a = random_spd(d, 0.5, 1.5, rng);
      Vec c = random_center(d, rng);
      EllipsoidConstraint ec = EllipsoidConstraint::Free;
      if (th == Theorem::AxisEllipsoid) {
        a = Mat(a.diagonal().asDiagonal());
        ec = EllipsoidConstraint::AxisParallel;
        sc.k = 2 * d;
      } else if (th == Theorem::Centered) {
        c.setZero();
        ec = EllipsoidConstraint::CenteredAtOrigin;
        sc.k = d * (d + 1) / 2;
        spec.count = 7;
      } else {
        sc.k = d * (d + 3) / 2;
        sc.matroid = true;
        spec.count = 7;
      }
      Ellipsoid e(c, a);
      planted_value = volume(e);
      spec.planted = e;
      sc.solver = [ec](std::span<const HPolytope> f) { return max_volume_ellipsoid(f, ec); };
      break;
    }
    case Theorem::HConvex: {
      if (d != 2) throw Error(ErrorKind::DimensionTooLarge, "H-convex suite is planar");
      const Mat h = random_hset(6, rng);
      const Vec c = random_center(d, rng);
      Vec s(6);
      for (int i = 0; i < 6; ++i) s[i] = h.col(i).dot(c) + rng.uniform(0.5, 1.5);
      HConvexSet k(h, s);
      planted_value = volume(k);
      spec.planted = k;
      sc.k = 6;
      sc.solver = [h](std::span<const HPolytope> f) { return max_hconvex(f, h, HConvexObjective::Volume); };
      break;
    }
    case Theorem::Translate: {
      const HPolytope shape = random_shape(d, rng);
      spec.planted = shape.translated(random_center(d, rng));
      planted_value = 1.0;
      sc.k = d + 1;
      sc.solver = [shape](std::span<const HPolytope> f) { return max_homothet(f, shape); };
      break;
    }
    case Theorem::BoxDiameter: {
      spec.planted = AxisBox(random_center(d, rng), Vec(0.5 * orthant_direction(d, rng)));
      sc.k = 2 * d;
      sc.solver = [](std::span<const HPolytope> f) { return max_box_diameter(f); };
      sc.tight_solver = [](std::span<const HPolytope> f) { return max_perimeter_box(f); };
      sc.family = random_family(spec, rng.next_u64());
      sc.premise_threshold = 1.0 - kPremiseSlack;
      sc.conclusion_threshold = 1.0 / std::sqrt(static_cast<double>(d)) - kPremiseSlack;
      return sc;
    }
    case Theorem::IncreasingDiameter: {
      Mat dir(d, 1);
      dir.col(0) = orthant_direction(d, rng);
      spec.planted = Zonotope(random_center(d, rng), dir, Vec::Ones(1));
      sc.k = 2 * d;
      sc.solver = [](std::span<const HPolytope> f) { return max_increasing_segment(f, SegmentNorm::L2); };
      sc.tight_solver = [](std::span<const HPolytope> f) { return max_increasing_segment(f, SegmentNorm::L1); };
      sc.family = random_family(spec, rng.next_u64());
      sc.premise_threshold = 1.0 - kPremiseSlack;
      sc.conclusion_threshold = 1.0 / std::sqrt(static_cast<double>(d)) - kPremiseSlack;
      return sc;
    }
  }
  sc.family = random_family(spec, rng.next_u64());
  sc.premise_threshold = planted_value - rel_slack(kPremiseSlack, planted_value);
  sc.conclusion_threshold = planted_value - rel_slack(1e-6, planted_value);
  return sc;
}

TrialOutcome run_trial(Theorem th, int d, int trial, const CounterRng& master) {
  CounterRng rng = master.split(static_cast<std::uint64_t>(trial));
  TrialOutcome out;
  out.trial = trial;
  out.seed = rng.split(0xfeed).next_u64();
  SuiteCase sc = make_case(th, d, rng);
  out.helly_number = sc.k;
  out.threshold = sc.premise_threshold;
  if (sc.matroid) {
    // 5 (= Helly number) copies of the family as colour classes, rank bound one less.
    const int n = static_cast<int>(sc.family.size());
    std::vector<HPolytope> ground;
    std::vector<std::vector<int>> classes(sc.k);
    for (int c = 0; c < sc.k; ++c) {
      for (int i = 0; i < n; ++i) {
        classes[c].push_back(static_cast<int>(ground.size()));
        ground.push_back(sc.family[i]);
      }
    }
    const auto r = check_matroid_helly(ground, PartitionMatroid(classes), sc.solver, sc.premise_threshold, sc.k - 1);
    out.premise_holds = r.premise_holds;
    out.conclusion_holds = r.tau.has_value() && r.tau_value >= sc.conclusion_threshold;
    out.full_value = r.tau ? r.tau_value : -std::numeric_limits<double>::infinity();
    out.min_subset_value = r.min_independent_value;
    // the weakest independent set bounds the best tau from below
    if (r.tau) {
      out.tight_holds = r.tau_value >= r.min_independent_value - rel_slack(1e-6, r.min_independent_value);
    } else {
      out.tight_holds = !r.premise_holds;
    }
  } else {
    const auto r = helly_core(sc.family, sc.k, sc.solver, sc.premise_threshold, sc.conclusion_threshold);
    out.premise_holds = r.premise_holds;
    out.conclusion_holds = r.conclusion_holds;
    out.full_value = r.conclusion_value;
    out.min_subset_value = r.min_subset_value;
    if (sc.tight_solver) {
      const auto t = helly_core(sc.family, sc.k, sc.tight_solver, -std::numeric_limits<double>::infinity(),
                                -std::numeric_limits<double>::infinity());
      out.full_value = t.conclusion_value;
      out.min_subset_value = t.min_subset_value;
    }
    out.tight_holds = out.full_value >= out.min_subset_value - rel_slack(1e-6, out.min_subset_value);
  }
  if (out.failed()) out.family = sc.family;
  return out;
}

}  // namespace

SuiteReport run_suite(Theorem theorem, int d, int trials, std::uint64_t seed, int threads) {
  check_dim(d);
  if (trials < 0) throw Error(ErrorKind::InvalidInput, "trials must be >= 0");
  SuiteReport rep;
  rep.theorem = theorem;
  rep.dim = d;
  rep.trials = trials;
  rep.seed = seed;
  rep.outcomes.resize(trials);
  const CounterRng master(seed);
  parallel_for(trials, threads, [&](int t) { rep.outcomes[t] = run_trial(theorem, d, t, master); });
  return rep;
}

}  // namespace qh
