// Acceptance gate: `acceptance <n> [cli] [workdir]` prints one PASS/FAIL line
// for check n and exits nonzero on failure.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>

#include "qhelly/helly.hpp"
#include "qhelly/io.hpp"
#include "qhelly/john.hpp"
#include "qhelly/lp_type.hpp"
#include "qhelly/rng.hpp"
#include "qhelly/solvers.hpp"
#include "qhelly/tverberg.hpp"

using namespace qh;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

HPolytope random_polygon(CounterRng& rng, int m) {
  for (;;) {
    std::vector<Halfspace> hs;
    const Vec c = v2(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
    for (int i = 0; i < m; ++i) {
      const double t = 2 * kPi * (i + rng.uniform(0.1, 0.9)) / m;
      const Vec n = v2(std::cos(t), std::sin(t));
      hs.push_back(Halfspace::make(n, n.dot(c) + rng.uniform(0.5, 1.5)));
    }
    HPolytope p(2, hs);
    if (p.bounded()) return p;
  }
}

Mat random_spd(int d, CounterRng& rng) {
  Mat g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = rng.normal();
  }
  return g * g.transpose() + 0.05 * Mat::Identity(d, d);
}

void solver_fixtures(Outcome& o) {
  const std::vector<HPolytope> square = {HPolytope::box(v2(-1, -1), v2(1, 1))};
  const std::vector<HPolytope> tri = {HPolytope::polygon({v2(0, 0), v2(1, 0), v2(0, 1)})};
  const double a = max_volume_ellipsoid(square).objective_value;
  const double b = max_volume_ellipsoid(tri).objective_value;
  const double c = max_volume_box(tri).objective_value;
  const std::vector<Vec> pts = {v2(1, 0), v2(-1, 0), v2(0, 1), v2(0, -1)};
  const double e = min_enclosing_ellipsoid(pts).objective_value;
  o.detail.precision(10);
  o.detail << "square MVIE " << a << ", triangle MVIE " << b << ", triangle box " << c << ", MVEE " << e;
  o.expect(std::abs(a - kPi) <= 1e-5, "square MVIE");
  o.expect(std::abs(b - kPi / (6 * std::sqrt(3.0))) <= 1e-4, "triangle MVIE");
  o.expect(std::abs(c - 0.25) <= 1e-6, "triangle box");
  o.expect(std::abs(e - kPi) <= 1e-5, "MVEE");
}

void helly_suites(Outcome& o) {
  const std::pair<Theorem, std::uint64_t> suites[] = {
      {Theorem::Box, 101},          {Theorem::Zonotope, 102}, {Theorem::Ellipsoid, 103}, {Theorem::HConvex, 104},
      {Theorem::AxisEllipsoid, 105}, {Theorem::Centered, 106}, {Theorem::Translate, 107}};
  for (const auto& [th, seed] : suites) {
    const SuiteReport rep = run_suite(th, 2, 200, seed);
    int bad = 0;
    for (const auto& t : rep.outcomes) bad += t.premise_holds && !t.conclusion_holds;
    o.detail << to_string(th) << " " << bad << "/" << rep.premise_count() << "; ";
    o.expect(static_cast<int>(rep.outcomes.size()) == 200 && bad == 0, std::string(to_string(th)));
  }
}

void counterexample(Outcome& o) {
  const JohnCounterexample ce = john_counterexample(2, 0);
  const auto& c = ce.certificate;
  double worst_subset = 1e300;
  for (double s : c.subset_areas) worst_subset = std::min(worst_subset, s);
  o.detail.precision(10);
  o.detail << ce.family.size() << " halfspaces, residual " << std::max(c.identity_residual, c.mean_residual) << ", full area "
           << c.full_area << ", smallest 4-subset area " << worst_subset;
  o.expect(ce.family.size() == 5, "family size");
  for (const auto& p : ce.family) o.expect(p.halfspaces().size() == 1, "single halfspace");
  o.expect(std::max(c.identity_residual, c.mean_residual) < 1e-9, "John residual");
  o.expect(std::abs(c.full_area - kPi) <= 1e-5, "full area");
  o.expect(c.subset_areas.size() == 5 && worst_subset > kPi + 1e-3, "subset areas");
}

void lp_type(Outcome& o) {
  const auto gen = max_box_generator(2);
  CounterRng master(4);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    CounterRng rng = master.split(static_cast<std::uint64_t>(t));
    const LpTypeProblem prob = gen(12, rng);
    const double got = prob.value(solve(prob, 7000 + static_cast<std::uint64_t>(t)).report);
    double best = -1e300;
    std::vector<int> s(4);
    for (s[0] = 0; s[0] < 12; ++s[0])
      for (s[1] = s[0] + 1; s[1] < 12; ++s[1])
        for (s[2] = s[1] + 1; s[2] < 12; ++s[2])
          for (s[3] = s[2] + 1; s[3] < 12; ++s[3]) best = std::max(best, prob.value(prob.basis_oracle(s)));
    worst = std::max(worst, std::abs(got - best) / std::max(1.0, std::abs(best)));
  }
  const std::vector<int> sizes = {50, 100, 200, 400};
  const auto calls = calibrate_calls(enclosing_ball_generator(2), sizes, 50, 44);
  double m100 = 0, m400 = 0;
  for (const auto& row : calls) {
    if (row.n == 100) m100 = row.mean_oracle_calls;
    if (row.n == 400) m400 = row.mean_oracle_calls;
  }
  o.detail << "max box deviation " << worst << ", mean calls n=100 " << m100 << ", n=400 " << m400;
  o.expect(worst <= 1e-7, "max box vs enumeration");
  o.expect(m100 > 0 && m400 < 8 * m100, "call growth");
}

Body unit_area_box(CounterRng& rng) {
  const double w = std::exp(rng.uniform(-1, 1));
  return AxisBox(v2(rng.uniform(-1, 1), rng.uniform(-1, 1)), v2(0.5 * w, 0.5 / w));
}

Body unit_area_ellipse(CounterRng& rng) {
  const double t = rng.uniform(0, kPi);
  const double a = std::exp(rng.uniform(-0.7, 0.7));
  Mat r(2, 2);
  r << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  return Ellipsoid(v2(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                   r * Vec(v2(a, 1 / a)).asDiagonal() * r.transpose() / std::sqrt(kPi));
}

void tverberg(Outcome& o) {
  CounterRng rng(5);
  double least_box = 1e300, least_ell = 1e300;
  int box_ok = 0, ell_ok = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<Body> boxes;
    for (int i = 0; i < 5; ++i) boxes.push_back(unit_area_box(rng));
    try {
      const auto chart = make_chart("zonotope", boxes, 1.0);
      const auto cert = quantitative_tverberg(boxes, *chart, 2, 1.0);
      least_box = std::min(least_box, cert.objective_value);
      box_ok += cert.objective_value >= 1 - 1e-6 && verify_certificate(to_json(cert)).ok;
    } catch (const Error& e) {
      o.detail << "box instance " << t << ": " << e.what() << "; ";
    }
  }
  const auto det = ellipsoid_det_chart(2, 1.0);
  for (int t = 0; t < 50; ++t) {
    std::vector<Body> ells;
    for (int i = 0; i < 7; ++i) ells.push_back(unit_area_ellipse(rng));
    try {
      const auto cert = quantitative_tverberg(ells, *det, 2, 1.0);
      least_ell = std::min(least_ell, cert.objective_value);
      ell_ok += cert.objective_value >= 1 - 1e-6 && verify_certificate(to_json(cert)).ok;
    } catch (const Error& e) {
      o.detail << "ellipse instance " << t << ": " << e.what() << "; ";
    }
  }
  std::vector<HPolytope> squares;
  for (int i = 0; i < 7; ++i) {
    const Vec c = v2(rng.uniform(-1, 1), rng.uniform(-1, 1));
    squares.push_back(HPolytope::box(c, c + v2(1, 1)));
  }
  double vol = 0.0;
  try {
    vol = volume_tverberg(squares, 2).objective_value;
  } catch (const Error& e) {
    o.detail << "squares: " << e.what() << "; ";
  }
  o.detail << "boxes " << box_ok << "/100 (least " << least_box << "), ellipses " << ell_ok << "/50 (least " << least_ell
           << "), squares witness volume " << vol;
  o.expect(box_ok == 100, "box certificates");
  o.expect(ell_ok == 50, "ellipse certificates");
  o.expect(vol >= 0.25, "volume version");
}

void properties(Outcome& o) {
  CounterRng rng(6);
  std::vector<Vec> dirs;
  for (int k = 0; k < 64; ++k) dirs.push_back(rng.unit_vector(2));
  Mat hex(2, 6);
  for (int k = 0; k < 6; ++k) hex.col(k) = v2(std::cos(kPi * k / 3), std::sin(kPi * k / 3));
  Mat zdirs(2, 3);
  zdirs << 1, 0, std::sqrt(0.5), 0, 1, std::sqrt(0.5);

  struct Case {
    std::unique_ptr<Chart> chart;
    std::function<Body()> sample;
  };
  std::vector<Case> cases;
  cases.push_back({zonotope_chart(zdirs), [&] {
                     return Body(Zonotope(v2(rng.uniform(-1, 1), rng.uniform(-1, 1)), zdirs,
                                          Vec(Eigen::Vector3d(rng.uniform(0.1, 2), rng.uniform(0.1, 2), rng.uniform(0.1, 2)))));
                   }});
  cases.push_back({ellipsoid_det_chart(2, 0.0), [&] { return Body(Ellipsoid(v2(rng.uniform(-1, 1), rng.uniform(-1, 1)), random_spd(2, rng))); }});
  cases.push_back({ellipsoid_sum_chart(2), [&] { return Body(Ellipsoid(Vec::Zero(2), random_spd(2, rng) + 2.0 * Mat::Ones(2, 2))); }});
  cases.push_back({segment_chart(2, 1.0), [&] {
                     Mat w(2, 1);
                     w << rng.uniform(0.05, 1), rng.uniform(0.05, 1);
                     return Body(Zonotope(v2(rng.uniform(-1, 1), rng.uniform(-1, 1)), w / w.sum(), Vec::Ones(1)));
                   }});
  cases.push_back({hconvex_chart(hex), [&] {
                     Vec s(6);
                     for (int k = 0; k < 6; ++k) s[k] = rng.uniform(0.7, 1.3);
                     const HConvexSet raw(hex, s);
                     for (int k = 0; k < 6; ++k) s[k] = support(raw, Vec(hex.col(k)));
                     return Body(HConvexSet(hex, s));
                   }});

  double round_trip = 0.0, transport = -1e300;
  for (auto& c : cases) {
    for (int t = 0; t < 1000; ++t) {
      const Body k = c.chart->prepare(c.sample());
      const Body back = c.chart->decode(c.chart->lift(k));
      for (const auto& u : dirs) round_trip = std::max(round_trip, std::abs(support(back, u) - support(k, u)));
    }
    for (int t = 0; t < 1000; ++t) {
      const Body p = c.chart->prepare(c.sample());
      const Body q = c.chart->prepare(c.sample());
      Vec w(2);
      const double lam = rng.uniform();
      w << lam, 1 - lam;
      const Body m = c.chart->decode(c.chart->combine({c.chart->lift(p), c.chart->lift(q)}, w));
      for (const auto& u : dirs) transport = std::max(transport, support(m, u) - std::max(support(p, u), support(q, u)));
    }
  }

  double zono = 1e300, det = 1e300;
  for (int t = 0; t < 1000; ++t) {
    const int k = rng.uniform_int(1, 6);
    Mat g(2, k);
    Vec a(k), b(k);
    for (int i = 0; i < k; ++i) {
      g.col(i) = rng.unit_vector(2);
      a[i] = rng.uniform(0, 2);
      b[i] = rng.uniform(0, 2);
    }
    const double lam = rng.uniform();
    zono = std::min(zono, zonotope_volume(g, lam * a + (1 - lam) * b) -
                              std::pow(zonotope_volume(g, a), lam) * std::pow(zonotope_volume(g, b), 1 - lam));
    const Mat x = random_spd(3, rng), y = random_spd(3, rng);
    det = std::min(det, (lam * x + (1 - lam) * y).determinant() -
                            std::pow(x.determinant(), lam) * std::pow(y.determinant(), 1 - lam));
  }

  double john = -1e300;
  for (int t = 0; t < 1000; ++t) {
    const HPolytope k = random_polygon(rng, rng.uniform_int(3, 8));
    const std::vector<HPolytope> fam = {k};
    const SolveReport r = max_volume_ellipsoid(fam);
    john = std::max(john, r.optimal() ? volume(k) - 4.0 * r.objective_value : 1e300);
  }
  o.detail << "round trip " << round_trip << ", transport excess " << transport << ", zonotope log-concavity "
           << zono << ", det log-concavity " << det << ", John excess " << john;
  o.expect(round_trip < 1e-9, "round trip");
  o.expect(transport <= 1e-9, "transport");
  o.expect(zono >= -1e-9 && det >= -1e-9, "log-concavity");
  o.expect(john <= 1e-6, "John ratio");
}

void approximation(Outcome& o) {
  const std::vector<HPolytope> two = {HPolytope::box(v2(0, 0), v2(1, 1)), HPolytope::box(v2(0.25, 0), v2(0.75, 1))};
  const double s = std::sqrt(2.0);
  const std::vector<HPolytope> rotated = {HPolytope::box(v2(-1, -1), v2(1, 1)),
                                          HPolytope::polygon({v2(s, 0), v2(0, s), v2(-s, 0), v2(0, -s)})};
  const double a = min_eps_approx(two, ApproxClass::box(2)).eps;
  const double b = min_eps_approx(rotated, ApproxClass::box(2)).eps;
  o.detail.precision(10);
  o.detail << "two-box eps " << a << " (expected 1), rotated-square eps " << b << " (expected " << s - 1 << ")";
  o.expect(std::abs(a - 1.0) <= 1e-5, "two-box");
  o.expect(std::abs(b - (s - 1.0)) <= 1e-4, "rotated square");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void reproducibility(Outcome& o, const std::string& cli, const std::string& dir, const std::string& fixtures) {
  if (cli.empty()) {
    o.expect(false, "CLI path not given");
    return;
  }
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"helly", "helly-test --theorem box --trials 20 --seed 9"},
      {"helly_ell", "helly-test --theorem ellipsoid --trials 5 --seed 9"},
      {"bench", "lptype-bench --problem ball --d 2 --trials 5 --sizes 20,40 --seed 9"},
      {"ce", "counterexample --d 2 --seed 9"},
      {"tv", "tverberg --chart ellipsoid-det --r 2 --threshold 1 --in " + fixtures + "/ellipses7.json"},
      {"approx", "approx --class box --in " + fixtures + "/triangle_zono.json"},
  };
  int same = 0;
  for (const auto& [name, args] : runs) {
    std::string out[2];
    for (int k = 0; k < 2; ++k) {
      const std::string path = dir + "/repro_" + name + ".out";
      std::remove(path.c_str());
      const std::string cmd = "\"" + cli + "\" " + args + " --out \"" + path + "\" 2>/dev/null";
      const int rc = std::system(cmd.c_str());
      (void)rc;
      out[k] = slurp(path);
    }
    const bool ok = !out[0].empty() && out[0] == out[1];
    same += ok;
    o.expect(ok, name);
  }
  o.detail << same << "/" << runs.size() << " command outputs byte-identical across reruns";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <1-8> [cli] [workdir] [fixtures]\n";
    return 2;
  }
  const int which = std::atoi(argv[1]);
  const std::string cli = argc > 2 ? argv[2] : "";
  const std::string dir = argc > 3 ? argv[3] : ".";
  const std::string fixtures = argc > 4 ? argv[4] : ".";
  const char* names[] = {"", "solver fixtures", "Helly suites", "sharpness counterexample", "LP-type", "Tverberg",
                         "chart and measure properties", "approximation", "reproducibility"};
  if (which < 1 || which > 8) {
    std::cerr << "unknown check " << which << '\n';
    return 2;
  }
  Outcome o;
  try {
    switch (which) {
      case 1: solver_fixtures(o); break;
      case 2: helly_suites(o); break;
      case 3: counterexample(o); break;
      case 4: lp_type(o); break;
      case 5: tverberg(o); break;
      case 6: properties(o); break;
      case 7: approximation(o); break;
      default: reproducibility(o, cli, dir, fixtures); break;
    }
  } catch (const std::exception& e) {
    o.expect(false, std::string("exception: ") + e.what());
  }
  std::cout << "acceptance " << which << " (" << names[which] << "): " << (o.pass ? "PASS" : "FAIL") << " | "
            << o.detail.str() << std::endl;
  return o.pass ? 0 : 1;
}
