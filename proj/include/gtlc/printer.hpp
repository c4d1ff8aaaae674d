#pragma once

#include <string>

#include "gtlc/ast.hpp"

namespace gtlc {

std::string to_string(const Ty& t);
std::string to_string(const Contract& c);
std::string to_string(Primitive p);
std::string to_string(const BlameLabel& l);

std::string print(const SurfaceExpr& e);
std::string print(const SurfaceModule& m);
/// One module per line; re-parses to a structurally equal program.
std::string print(const SurfaceProgram& p);

/// Flat single-line form.
std::string print(const ConExpr& e);
/// Breaks `let`, `λ` and application bodies across lines past `width`.
std::string pretty(const ConExpr& e, std::size_t width = 72);

}  // namespace gtlc
