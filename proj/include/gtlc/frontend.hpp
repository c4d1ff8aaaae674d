#pragma once

// Concrete syntax and well-formedness for gradually-typed programs.
//
//   program  ::= module*
//   module   ::= (module X T require* F) | (module X (require X)* E)
//   require  ::= (require X) | (require/typed X T)
//              | (opaque-require X) | (opaque-require X T)
//   T        ::= Int | Bool | (-> T T)
//   E, F     ::= X | integer | #t | #f | int? | bool? | opaque
//              | (E E) | (if E E E) | (λ (X) E) | (λ (X : T) F)
//
// `lambda` is accepted for `λ`. `opaque-require` behaves like the require
// (or require/typed) it abbreviates but marks its target as never analyzed.

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gtlc/ast.hpp"
#include "gtlc/diagnostic.hpp"

namespace gtlc {

/// Later entries shadow earlier ones.
using TypeEnv = std::vector<std::pair<std::string, Ty>>;
using NameEnv = std::vector<std::string>;

Checked<SurfaceProgram> parse_program(std::string_view text);
/// Parses one contract-language expression, e.g. the output of `print`.
Checked<ConPtr> parse_con(std::string_view text);
Checked<Ty> parse_type(std::string_view text);
Checked<Contract> parse_contract(std::string_view text);

Checked<TypeEnv> ty_env(std::span<const Require> imports, std::span<const SurfaceModule> prior);
Checked<NameEnv> name_env(std::span<const Require> imports, std::span<const SurfaceModule> prior);

/// Synthesizes the type of a typed body, or checks it against `expected`
/// when given (needed for `opaque`, which has whatever type is demanded).
Checked<Ty> typecheck_expr(const TypeEnv& env, const SurfaceExpr& body,
                           const std::optional<Ty>& expected = std::nullopt);

/// Empty result means the program is well-formed.
std::vector<Diagnostic> check_wellformed(const SurfaceProgram& p);

/// Parse and check in one go.
Checked<SurfaceProgram> load_program(std::string_view text);

}  // namespace gtlc
