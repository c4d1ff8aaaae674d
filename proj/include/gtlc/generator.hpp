#pragma once

// Random well-formed programs for differential and soundness testing.

#include <cstdint>

#include "gtlc/ast.hpp"

namespace gtlc {

struct GenConfig {
  std::uint64_t seed = 0;
  /// Total modules including main; clamped to [1, 6].
  int modules = 4;
  /// Depth bound for generated expressions.
  int size = 4;
  double typed_fraction = 0.5;
  /// Chance that a module requires a given earlier module.
  double boundary_density = 0.6;
  /// Chance that an untyped subterm, or the type a typed module assumes for
  /// an untyped import, disagrees with the intended type.
  double violation_rate = 0.25;
};

/// Deterministic in `cfg`; the result always passes check_wellformed.
SurfaceProgram gen_program(const GenConfig& cfg);

}  // namespace gtlc
