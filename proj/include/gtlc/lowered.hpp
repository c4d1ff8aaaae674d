#pragma once

// Index-based form of a closed ConExpr shared by the concrete and symbolic
// evaluators. Node ids double as syntactic labels.

#include <cstdint>
#include <string>
#include <vector>

#include "gtlc/ast.hpp"

namespace gtlc::detail {

enum class Op : std::uint8_t { Var, Int, Bool, Prim, App, If, Lambda, Mon, Blame, Let, Opaque };

struct Resolved {
  std::uint32_t depth;   // de Bruijn index
  std::uint32_t binder;  // id of the binding Lambda or Let
};

struct LNode {
  Op op = Op::Opaque;
  std::uint32_t kid[3] = {0, 0, 0};
  Resolved var{0, 0};
  bool boolean = false;
  Primitive prim = Primitive::IsInt;
  const Integer* integer = nullptr;
  const Contract* contract = nullptr;
  std::uint32_t pos = 0;  // party ids for Mon and Blame (blamed, holder)
  std::uint32_t neg = 0;
  std::vector<Resolved> scope;  // Opaque: identifiers it may reference
};

struct Lowered {
  ConPtr source;  // keeps literals and contracts alive
  std::vector<LNode> nodes;
  std::uint32_t root = 0;
  std::vector<std::string> parties;

  std::uint32_t party(const std::string& name);
};

/// Throws std::invalid_argument when `e` has free identifiers.
Lowered lower(const ConPtr& e);

}  // namespace gtlc::detail
