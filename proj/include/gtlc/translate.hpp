#pragma once

// Compilation of gradually-typed programs into the contract language.
// Each module becomes one `let`; each require that crosses the typed/untyped
// line becomes an inner `let` rebinding the import to a monitored version.

#include <vector>

#include "gtlc/ast.hpp"

namespace gtlc {

struct Boundary {
  Party pos;
  Party neg;
  Contract contract;
  ConPath site;
};

struct CompiledProgram {
  ConPtr root;
  /// Every Mon node of `root`, in pre-order.
  std::vector<Boundary> boundaries;
};

Contract compile_type(const Ty& t);

/// Drops type annotations. When `scope` is given, every `opaque` inside is
/// annotated with the identifiers it could reference (scope plus enclosing
/// λ parameters).
ConPtr erase(const SurfaceExpr& body, const std::optional<std::vector<std::string>>& scope = std::nullopt);

/// Precondition: check_wellformed(p) is empty.
CompiledProgram compile_program(const SurfaceProgram& p);

std::vector<Boundary> index_boundaries(const ConPtr& root);

}  // namespace gtlc
