#pragma once

// Modular verification and contract weakening. Each module is analyzed
// against a slice of the program in which every other module is opaque; a
// blame label the analysis rules out licenses weakening the monitors
// between the two parties.

#include <chrono>
#include <cstddef>
#include <set>
#include <vector>

#include "gtlc/ast.hpp"
#include "gtlc/symbolic_eval.hpp"
#include "gtlc/translate.hpp"

namespace gtlc {

/// Every module but `target` gets an opaque body; modules named by an
/// `opaque-require` stay opaque even when they are the target.
/// Throws std::invalid_argument for an unknown module.
SurfaceProgram slice_for_module(const SurfaceProgram& p, const Party& target);

/// Removes the obligations of the party at polarity `s`.
Contract copt(const Contract& c, Polarity s);

/// Precondition: blame with blamed = x and holder = x2 is unreachable.
/// Monitors with parties (x, x2) lose their positive obligations and those
/// with parties (x2, x) their negative ones; monitors left with any/c are
/// dropped.
ConPtr opt(const ConPtr& e, const Party& x, const Party& x2);

/// Drops `(mon (p n) any/c E)` and `(let [x x] E)`.
ConPtr normalize(const ConPtr& e);

struct Verdict {
  Party module;
  /// Parties X' for which blame (module, X') was proven unreachable.
  std::set<Party> safe_against;
  bool exhausted = false;
  /// Not analyzed: the module is opaque to the verifier.
  bool skipped = false;
  /// Trusted without analysis because it is typed.
  bool trusted = false;
  BlameSet blame;
  std::chrono::nanoseconds analysis_time{0};
};

/// Analyzes the slice for `module`. `budget` bounds the abstract states.
Verdict verify_module(const SurfaceProgram& p, const Party& module, std::size_t budget = kDefaultStateCap);

struct Disposition {
  enum class Kind { Kept, Weakened, Removed };

  Boundary boundary;
  Kind kind = Kind::Kept;
  Contract after;
};

const char* to_string(Disposition::Kind k);

struct OptimizationReport {
  std::size_t monitors_before = 0;
  std::size_t monitors_after = 0;
  std::vector<Disposition> boundaries;
  std::vector<Verdict> verdicts;

  std::size_t count(Disposition::Kind k) const;
};

struct OptimizeOptions {
  /// Typed modules are never blamed, so they are safe against every party
  /// without analysis.
  bool trust_typed = true;
  std::size_t budget = kDefaultStateCap;
};

struct Optimized {
  CompiledProgram program;
  OptimizationReport report;
};

/// Precondition: check_wellformed(p) is empty.
Optimized optimize_program(const SurfaceProgram& p, const OptimizeOptions& options = {});

}  // namespace gtlc
