#include "qhelly/io.hpp"

#include <fstream>
#include <sstream>

namespace qh {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) bad(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

Json to_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json to_json(const Mat& m) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(to_json(Vec(m.row(i).transpose())));
  return a;
}

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) bad("expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], "vector entry");
  return v;
}

Mat mat_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad("expected a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Vec r = vec_from_json(j[static_cast<std::size_t>(i)]);
    if (r.size() != cols) bad("ragged matrix");
    m.row(i) = r.transpose();
  }
  return m;
}

Json to_json(const Body& body) {
  Json j;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, HPolytope>) {
          j["type"] = "hpolytope";
          j["dim"] = b.dim();
          Json hs = Json::array();
          for (const auto& h : b.halfspaces()) hs.push_back({{"normal", to_json(h.normal)}, {"offset", h.offset}});
          j["halfspaces"] = hs;
        } else if constexpr (std::is_same_v<T, AxisBox>) {
          j["type"] = "axisbox";
          j["dim"] = b.dim();
          j["center"] = to_json(b.center);
          j["halfwidths"] = to_json(b.halfwidths);
        } else if constexpr (std::is_same_v<T, Zonotope>) {
          j["type"] = "zonotope";
          j["dim"] = b.dim();
          j["center"] = to_json(b.center);
          j["directions"] = to_json(Mat(b.directions.transpose()));
          j["coeffs"] = to_json(b.coeffs);
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          j["type"] = "ellipsoid";
          j["dim"] = b.dim();
          j["center"] = to_json(b.center);
          j["shape"] = to_json(b.shape);
        } else {
          j["type"] = "hconvex";
          j["dim"] = b.dim();
          j["hset"] = to_json(Mat(b.hset.transpose()));
          j["supports"] = to_json(b.supports);
        }
      },
      body);
  return j;
}

Body body_from_json(const Json& j) {
  if (!j.is_object()) bad("body must be an object");
  const auto type = field(j, "type");
  if (!type.is_string()) bad("body type must be a string");
  const auto t = type.get<std::string>();
  const Json& dj = field(j, "dim");
  if (!dj.is_number_integer()) bad("dim must be an integer");
  const int d = dj.get<int>();
  check_dim(d);
  auto sized = [&](const Vec& v, const char* what) {
    if (v.size() != d) throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has wrong length");
    return v;
  };
  if (t == "hpolytope") {
    const Json& hs = field(j, "halfspaces");
    if (!hs.is_array()) bad("halfspaces must be an array");
    std::vector<Halfspace> out;
    for (const auto& h : hs) {
      out.push_back(Halfspace::make(sized(vec_from_json(field(h, "normal")), "normal"),
                                    number(field(h, "offset"), "offset")));
    }
    return HPolytope(d, std::move(out));
  }
  if (t == "axisbox") {
    return AxisBox(sized(vec_from_json(field(j, "center")), "center"),
                   sized(vec_from_json(field(j, "halfwidths")), "halfwidths"));
  }
  if (t == "zonotope") {
    const Mat dirs = mat_from_json(field(j, "directions"));
    if (dirs.cols() != d) throw Error(ErrorKind::DimensionMismatch, "direction has wrong length");
    return Zonotope(sized(vec_from_json(field(j, "center")), "center"), dirs.transpose(),
                    vec_from_json(field(j, "coeffs")));
  }
  if (t == "ellipsoid") {
    const Mat a = mat_from_json(field(j, "shape"));
    if (a.rows() != d || a.cols() != d) throw Error(ErrorKind::DimensionMismatch, "shape must be d x d");
    return Ellipsoid(sized(vec_from_json(field(j, "center")), "center"), a);
  }
  if (t == "hconvex") {
    const Mat h = mat_from_json(field(j, "hset"));
    if (h.cols() != d) throw Error(ErrorKind::DimensionMismatch, "hset direction has wrong length");
    return HConvexSet(h.transpose(), vec_from_json(field(j, "supports")));
  }
  bad("unknown body type '" + t + "'");
}

HPolytope as_hpolytope(const Body& body) {
  if (const auto* p = std::get_if<HPolytope>(&body)) return *p;
  if (const auto* b = std::get_if<AxisBox>(&body)) return HPolytope::box(b->center - b->halfwidths, b->center + b->halfwidths);
  if (const auto* h = std::get_if<HConvexSet>(&body)) return h->to_polytope();
  bad("family members must be hpolytope, axisbox or hconvex bodies");
}

std::vector<HPolytope> family_from_json(const Json& j) {
  const Json* arr = &j;
  if (j.is_object()) arr = &field(j, "family");
  if (!arr->is_array() || arr->empty()) bad("family must be a nonempty array");
  std::vector<HPolytope> fam;
  for (const auto& b : *arr) fam.push_back(as_hpolytope(body_from_json(b)));
  for (const auto& p : fam) {
    if (p.dim() != fam.front().dim()) throw Error(ErrorKind::DimensionMismatch, "family dimensions differ");
  }
  return fam;
}

Json to_json(const SolveReport& report) {
  Json j;
  j["status"] = std::string(to_string(report.status));
  j["objective_value"] = report.objective_value;
  j["iterations"] = report.iterations;
  j["kkt_residual"] = report.kkt_residual;
  j["degenerate"] = report.degenerate;
  j["witness"] = report.witness ? to_json(*report.witness) : Json(nullptr);
  Json m = Json::object();
  for (const auto& [k, v] : report.metrics) m[k] = v;
  j["metrics"] = m;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    bad("malformed JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace qh
