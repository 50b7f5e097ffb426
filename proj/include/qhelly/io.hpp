#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qhelly/geom.hpp"
#include "qhelly/solvers.hpp"

namespace qh {

using Json = nlohmann::ordered_json;

Json to_json(const Vec& v);
Json to_json(const Mat& m);  // row-major nested arrays
Json to_json(const Body& body);
Json to_json(const SolveReport& report);

Vec vec_from_json(const Json& j);
Mat mat_from_json(const Json& j);
/// Throws InvalidInput on malformed or unknown bodies.
Body body_from_json(const Json& j);
/// Accepts a list of bodies or an object with a "family" list. Axis boxes and
/// H-convex sets are converted to their halfspace form.
std::vector<HPolytope> family_from_json(const Json& j);
HPolytope as_hpolytope(const Body& body);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace qh
