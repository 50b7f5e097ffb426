#include <algorithm>
#include <set>

#include "qhelly/rng.hpp"
#include "qhelly/tverberg.hpp"

namespace qh {

namespace {

double l1_length(const Zonotope& z) {
  double s = 0.0;
  for (int i = 0; i < z.num_directions(); ++i) s += z.coeffs[i] * z.directions.col(i).cwiseAbs().sum();
  return s;
}

}  // namespace

VerifyResult verify_certificate(const Json& cert) {
  VerifyResult out;
  std::vector<Body> inputs;
  std::vector<std::vector<int>> partition;
  Body witness;
  double threshold = 0.0;
  std::string chart;
  int r = 0;
  try {
    chart = cert.at("chart").get<std::string>();
    r = cert.at("r").get<int>();
    threshold = cert.at("threshold").get<double>();
    for (const auto& b : cert.at("inputs")) inputs.push_back(body_from_json(b));
    partition = cert.at("partition").get<std::vector<std::vector<int>>>();
    witness = body_from_json(cert.at("decoded_witness"));
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed certificate: ") + e.what());
  }
  if (inputs.empty()) throw Error(ErrorKind::InvalidInput, "certificate has no inputs");
  const int d = body_dim(witness);
  for (const auto& b : inputs) {
    if (body_dim(b) != d) throw Error(ErrorKind::DimensionMismatch, "input and witness dimensions differ");
  }

  const int n = static_cast<int>(inputs.size());
  if (static_cast<int>(partition.size()) != r) out.problems.push_back("partition does not have r parts");
  std::set<int> seen;
  for (const auto& part : partition) {
    if (part.empty()) out.problems.push_back("empty part");
    for (int i : part) {
      if (i < 0 || i >= n) {
        out.problems.push_back("index out of range");
      } else if (!seen.insert(i).second) {
        out.problems.push_back("index used twice");
      }
    }
  }
  if (static_cast<int>(seen.size()) != n) out.problems.push_back("partition does not cover every input");

  if (chart == "segment") {
    const auto* z = std::get_if<Zonotope>(&witness);
    if (!z) throw Error(ErrorKind::InvalidInput, "segment certificate needs a zonotope witness");
    out.objective_value = l1_length(*z);
  } else {
    out.objective_value = volume(witness);
  }
  if (out.objective_value < threshold - 1e-6 * std::max(1.0, std::abs(threshold))) {
    out.problems.push_back("witness objective below threshold");
  }

  if (out.problems.empty()) {
    CounterRng rng(0x7e51f1);
    std::vector<Vec> dirs;
    for (int i = 0; i < d; ++i) {
      dirs.push_back(Vec::Unit(d, i));
      dirs.push_back(-Vec::Unit(d, i));
    }
    const int m = d == 2 ? 2000 : 3000;
    for (int k = 0; k < m; ++k) dirs.push_back(rng.unit_vector(d));
    out.min_gap = std::numeric_limits<double>::infinity();
    for (const auto& u : dirs) {
      const double hw = support(witness, u);
      for (const auto& part : partition) {
        double best = -std::numeric_limits<double>::infinity();
        for (int i : part) best = std::max(best, support(inputs[static_cast<std::size_t>(i)], u));
        out.min_gap = std::min(out.min_gap, best - hw);
      }
    }
    if (out.min_gap < -1e-6) out.problems.push_back("witness not contained in a part hull");
  }
  out.ok = out.problems.empty();
  return out;
}

}  // namespace qh
