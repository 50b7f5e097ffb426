#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qhelly/geom.hpp"
#include "qhelly/rng.hpp"

namespace qh {

enum class GeneratorKind { TangentHalfspaces, RandomPolytopeIntersections, ShiftedSlabs };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::RandomPolytopeIntersections;
  int dim = 2;
  int count = 8;
  /// Body every generated member contains (ignored by ShiftedSlabs).
  std::optional<Body> planted;
  int halfspaces_per_body = 3;
  /// Probability that a generated halfspace touches the planted body.
  double tight_fraction = 0.5;
  double max_slack = 0.5;
  /// Width of the common slab region for ShiftedSlabs; 0 gives a single point.
  double overlap = 1.0;
  /// Members are intersected with [-bound, bound]^d; 0 disables.
  double bound = 10.0;
};

/// Deterministic in (spec, seed).
std::vector<HPolytope> random_family(const GeneratorSpec& spec, std::uint64_t seed);

/// Random symmetric positive-definite matrix with eigenvalues in [lo, hi].
Mat random_spd(int d, double lo, double hi, CounterRng& rng);

}  // namespace qh
