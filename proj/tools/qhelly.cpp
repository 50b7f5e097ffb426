#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qhelly/helly.hpp"
#include "qhelly/io.hpp"
#include "qhelly/john.hpp"
#include "qhelly/lp_type.hpp"
#include "qhelly/parallel.hpp"
#include "qhelly/rng.hpp"
#include "qhelly/solvers.hpp"
#include "qhelly/tverberg.hpp"
#include "qhelly/version.hpp"

namespace {

using qh::Json;

struct Options {
  std::string in, out, cert;
  std::uint64_t seed = 0;
  int d = 2;
  int trials = 200;
  int r = 2;
  double threshold = 1.0;
  std::string objective = "volume";
  std::string constraint = "free";
  std::string theorem;
  std::string chart;
  std::string cls = "box";
  std::string problem = "box";
  std::vector<int> sizes{50, 100, 200, 400};
  std::optional<double> eps;
};

Json config(const std::string& cmd, const Options& o) {
  Json c;
  c["command"] = cmd;
  c["seed"] = o.seed;
  if (!o.in.empty()) c["input_path"] = o.in;
  if (!o.out.empty()) c["output_path"] = o.out;
  if (!o.cert.empty()) c["cert_path"] = o.cert;
  if (cmd == "helly-test" || cmd == "lptype-bench") {
    c["dimension"] = o.d;
    c["trials"] = o.trials;
  }
  if (cmd == "helly-test") c["theorem"] = o.theorem;
  if (cmd == "counterexample") c["dimension"] = o.d;
  if (cmd == "tverberg") {
    c["chart"] = o.chart;
    c["r"] = o.r;
    c["threshold"] = o.threshold;
  }
  if (cmd.starts_with("solve-")) c["objective"] = o.objective;
  if (cmd == "solve-ellipsoid") c["constraint"] = o.constraint;
  if (cmd == "approx") {
    c["class"] = o.cls;
    if (o.eps) c["eps"] = *o.eps;
  }
  if (cmd == "lptype-bench") {
    c["problem"] = o.problem;
    c["sizes"] = o.sizes;
  }
  return c;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text << '\n';
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw qh::Error(qh::ErrorKind::InvalidInput, "cannot write " + o.out);
  f << text << '\n';
}

Json envelope(const std::string& cmd, const Options& o, Json result) {
  Json j;
  j["version"] = qh::kVersion;
  j["rng"] = qh::CounterRng::kName;
  j["config"] = config(cmd, o);
  j["result"] = std::move(result);
  return j;
}

Json load_input(const Options& o) {
  if (o.in.empty()) throw qh::Error(qh::ErrorKind::InvalidInput, "--in is required");
  return qh::read_json_file(o.in);
}

qh::Mat required_matrix(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw qh::Error(qh::ErrorKind::InvalidInput, std::string("input needs a \"") + key + "\" matrix");
  }
  // rows are directions, stored as columns internally
  return qh::mat_from_json(j.at(key)).transpose();
}

qh::Objective parse_objective(const std::string& s) {
  if (s == "volume") return qh::Objective::Volume;
  if (s == "perimeter") return qh::Objective::Perimeter;
  if (s == "trace") return qh::Objective::Trace;
  if (s == "diameter") return qh::Objective::Diameter;
  if (s == "gaussian") return qh::Objective::Gaussian;
  throw qh::Error(qh::ErrorKind::InvalidInput, "unknown objective '" + s + "'");
}

int run_solve(const std::string& cmd, const Options& o) {
  const Json in = load_input(o);
  auto family = qh::family_from_json(in);
  qh::WitnessClass wc = qh::WitnessClass::box();
  if (cmd == "solve-zonotope") {
    wc = qh::WitnessClass::zonotope(required_matrix(in, "directions"));
  } else if (cmd == "solve-hconvex") {
    wc = qh::WitnessClass::hconvex(required_matrix(in, "hset"));
  } else if (cmd == "solve-ellipsoid") {
    wc = qh::WitnessClass::ellipsoid();
    if (o.constraint == "centered") {
      wc.kind = qh::WitnessClassKind::EllipsoidCentered;
    } else if (o.constraint == "axis") {
      wc.kind = qh::WitnessClassKind::EllipsoidAxisParallel;
    } else if (o.constraint != "free") {
      throw qh::Error(qh::ErrorKind::InvalidInput, "unknown constraint '" + o.constraint + "'");
    }
  }
  const qh::WitnessProblem prob(std::move(family), wc, parse_objective(o.objective));
  emit(o, envelope(cmd, o, qh::to_json(qh::solve(prob))).dump(2));
  return 0;
}

int run_approx(const Options& o) {
  const Json in = load_input(o);
  const auto family = qh::family_from_json(in);
  if (family.empty()) throw qh::Error(qh::ErrorKind::InvalidInput, "empty family");
  qh::ApproxClass cls = qh::ApproxClass::box(family.front().dim());
  if (o.cls == "zonotope") {
    cls = qh::ApproxClass::zonotope(required_matrix(in, "directions"));
  } else if (o.cls != "box") {
    throw qh::Error(qh::ErrorKind::InvalidInput, "unknown class '" + o.cls + "'");
  }
  const qh::ApproxResult res = o.eps ? qh::simultaneous_approx(family, cls, *o.eps) : qh::min_eps_approx(family, cls);
  Json r;
  r["feasible"] = res.feasible;
  r["eps"] = res.eps;
  if (res.witness) r["witness"] = qh::to_json(*res.witness);
  if (res.translate.size() > 0) r["translate"] = qh::to_json(res.translate);
  emit(o, envelope("approx", o, r).dump(2));
  return 0;
}

int run_bench(const Options& o) {
  qh::LpTypeGenerator gen;
  if (o.problem == "ball") {
    gen = qh::enclosing_ball_generator(o.d);
  } else if (o.problem == "box") {
    gen = qh::max_box_generator(o.d);
  } else {
    throw qh::Error(qh::ErrorKind::InvalidInput, "unknown problem '" + o.problem + "'");
  }
  std::ostringstream csv;
  csv << "# version " << qh::kVersion << ", rng " << qh::CounterRng::kName << ", config "
      << config("lptype-bench", o).dump() << '\n';
  csv << "n,trial,seed,oracle_calls,violation_tests,objective\n";
  csv.precision(17);
  for (const auto& row : qh::lp_type_bench(gen, o.sizes, o.trials, o.seed)) {
    csv << row.n << ',' << row.trial << ',' << row.seed << ',' << row.oracle_calls << ',' << row.violation_tests
        << ',' << row.objective << '\n';
  }
  std::string text = csv.str();
  text.pop_back();
  emit(o, text);
  return 0;
}

int run_helly(const Options& o) {
  const auto th = qh::theorem_from_string(o.theorem);
  if (!th) throw qh::Error(qh::ErrorKind::InvalidInput, "unknown theorem '" + o.theorem + "'");
  if (o.trials < 1) throw qh::Error(qh::ErrorKind::InvalidInput, "--trials must be positive");
  const qh::SuiteReport rep = qh::run_suite(*th, o.d, o.trials, o.seed);
  Json r;
  r["theorem"] = std::string(qh::to_string(rep.theorem));
  r["trials"] = rep.trials;
  r["premise_count"] = rep.premise_count();
  r["failures"] = rep.failures();
  Json outcomes = Json::array();
  for (const auto& t : rep.outcomes) {
    Json j;
    j["trial"] = t.trial;
    j["seed"] = t.seed;
    j["helly_number"] = t.helly_number;
    j["threshold"] = t.threshold;
    j["premise_holds"] = t.premise_holds;
    j["conclusion_holds"] = t.conclusion_holds;
    j["full_value"] = t.full_value;
    j["min_subset_value"] = t.min_subset_value;
    j["tight_holds"] = t.tight_holds;
    if (t.failed()) {
      Json fam = Json::array();
      for (const auto& b : t.family) fam.push_back(qh::to_json(qh::Body(b)));
      j["family"] = fam;
    }
    outcomes.push_back(j);
  }
  r["outcomes"] = outcomes;
  emit(o, envelope("helly-test", o, r).dump(2));
  return rep.failures() == 0 ? 0 : 1;
}

int run_counterexample(const Options& o) {
  const qh::JohnCounterexample ce = qh::john_counterexample(o.d, o.seed);
  const auto& c = ce.certificate;
  Json r;
  Json fam = Json::array();
  for (const auto& b : ce.family) fam.push_back(qh::to_json(qh::Body(b)));
  r["family"] = fam;
  Json dirs = Json::array();
  for (const auto& u : c.directions) dirs.push_back(qh::to_json(u));
  r["directions"] = dirs;
  r["weights"] = qh::to_json(c.weights);
  r["identity_residual"] = c.identity_residual;
  r["mean_residual"] = c.mean_residual;
  r["critical"] = c.critical;
  r["restarts"] = c.restarts;
  r["full_area"] = c.full_area;
  r["subset_areas"] = c.subset_areas;
  r["min_gap"] = c.min_gap;
  emit(o, envelope("counterexample", o, r).dump(2));
  const bool ok = c.critical && c.identity_residual < 1e-9 && c.min_gap > 0.0;
  return ok ? 0 : 1;
}

int run_tverberg(const Options& o) {
  const Json in = load_input(o);
  const Json& list = in.is_object() && in.contains("family") ? in.at("family") : in;
  if (!list.is_array()) throw qh::Error(qh::ErrorKind::InvalidInput, "input must be a list of bodies");
  std::vector<qh::Body> bodies;
  for (const auto& b : list) bodies.push_back(qh::body_from_json(b));
  if (bodies.empty()) throw qh::Error(qh::ErrorKind::InvalidInput, "empty family");
  const auto chart = qh::make_chart(o.chart, bodies, o.threshold);
  const qh::TverbergCertificate cert = qh::quantitative_tverberg(bodies, *chart, o.r, o.threshold);
  emit(o, envelope("tverberg", o, qh::to_json(cert)).dump(2));
  return 0;
}

int run_verify(const Options& o) {
  if (o.cert.empty()) throw qh::Error(qh::ErrorKind::InvalidInput, "--cert is required");
  Json j = qh::read_json_file(o.cert);
  if (j.is_object() && j.contains("result")) j = j.at("result");
  if (!j.is_object()) throw qh::Error(qh::ErrorKind::InvalidInput, "certificate must be an object");
  const qh::VerifyResult v = qh::verify_certificate(j);
  Json r;
  r["ok"] = v.ok;
  r["problems"] = v.problems;
  r["min_gap"] = v.min_gap;
  r["objective_value"] = v.objective_value;
  emit(o, envelope("verify", o, r).dump(2));
  return v.ok ? 0 : 1;
}

int exit_code_for(qh::ErrorKind k) {
  switch (k) {
    case qh::ErrorKind::ContainmentAuditFailed:
    case qh::ErrorKind::NotFound:
    case qh::ErrorKind::SearchFailed:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantitative Helly and Tverberg toolkit"};
  app.set_version_flag("--version", qh::kVersion);
  app.require_subcommand(1);
  Options o;

  auto add_io = [&](CLI::App* s) {
    s->add_option("--in", o.in, "input JSON")->required();
    s->add_option("--out", o.out, "output path (default stdout)");
  };
  auto add_seed = [&](CLI::App* s) { s->add_option("--seed", o.seed, "RNG seed"); };

  for (const char* name : {"solve-box", "solve-zonotope", "solve-ellipsoid", "solve-hconvex"}) {
    auto* s = app.add_subcommand(name, "solve a witness problem");
    add_io(s);
    s->add_option("--objective", o.objective, "volume|perimeter|trace|diameter|gaussian");
    if (std::string(name) == "solve-ellipsoid") s->add_option("--constraint", o.constraint, "free|centered|axis");
  }
  auto* approx = app.add_subcommand("approx", "simultaneous approximation by one witness");
  add_io(approx);
  approx->add_option("--class", o.cls, "box|zonotope");
  approx->add_option("--eps", o.eps, "test a fixed eps instead of minimizing");

  auto* bench = app.add_subcommand("lptype-bench", "randomized LP-type solver statistics (CSV)");
  bench->add_option("--problem", o.problem, "box|ball");
  bench->add_option("--d", o.d, "dimension");
  bench->add_option("--trials", o.trials, "trials per size");
  bench->add_option("--sizes", o.sizes, "family sizes")->delimiter(',');
  bench->add_option("--out", o.out, "output path");
  add_seed(bench);

  auto* helly = app.add_subcommand("helly-test", "seeded Helly suite");
  helly->add_option("--theorem", o.theorem, "box|zonotope|ellipsoid|hconvex|axis-ellipsoid|centered|translate|box-diam|incr-diam")
      ->required();
  helly->add_option("--d", o.d, "dimension");
  helly->add_option("--trials", o.trials, "trial count");
  helly->add_option("--out", o.out, "output path");
  add_seed(helly);

  auto* ce = app.add_subcommand("counterexample", "sharpness family from a John decomposition");
  ce->add_option("--d", o.d, "dimension");
  ce->add_option("--out", o.out, "output path");
  add_seed(ce);

  auto* tv = app.add_subcommand("tverberg", "quantitative Tverberg certificate");
  tv->add_option("--chart", o.chart, "zonotope|hconvex|ellipsoid-det|ellipsoid-sum|segment")->required();
  tv->add_option("--r", o.r, "number of parts");
  tv->add_option("--threshold", o.threshold, "objective threshold");
  add_io(tv);

  auto* ver = app.add_subcommand("verify", "independent certificate check");
  ver->add_option("--cert", o.cert, "certificate JSON")->required();
  ver->add_option("--out", o.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string cmd = sub->get_name();
  const auto start = std::chrono::steady_clock::now();
  int code = 0;
  try {
    if (cmd.starts_with("solve-")) {
      code = run_solve(cmd, o);
    } else if (cmd == "approx") {
      code = run_approx(o);
    } else if (cmd == "lptype-bench") {
      code = run_bench(o);
    } else if (cmd == "helly-test") {
      code = run_helly(o);
    } else if (cmd == "counterexample") {
      code = run_counterexample(o);
    } else if (cmd == "tverberg") {
      code = run_tverberg(o);
    } else {
      code = run_verify(o);
    }
  } catch (const qh::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = 2;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << "qhelly " << qh::kVersion << " " << cmd << " wall_time_s=" << secs << '\n';
  return code;
}
