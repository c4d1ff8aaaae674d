#pragma once

// Finite abstract machine over the contract language with `opaque`. The
// machine over-approximates every concrete run of every program obtained by
// replacing each `opaque` with arbitrary closed code, and reports the blame
// labels that can be raised by monitors it can see.
//
// Finitization: variables are allocated per binder (plus one address per
// `if` branch that refines a tested variable), monitor wrappers per
// (origin monitor, sub-contract, parties), continuations per
// (expression, environment). The store is global and only grows, so the
// reachable state space is finite and the worklist reaches a fixpoint.
//
// Values escaping to unknown code are collected in one havoc address; every
// escaped function is applied to a fresh opaque argument and its results
// escape in turn.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gtlc/ast.hpp"

namespace gtlc {

enum class Refinement : std::uint8_t {
  IsInt = 1,
  IsBool = 2,
  IsFn = 4,
  NotInt = 8,
  NotBool = 16,
  NotFn = 32,
};

/// What is known about an opaque value on the current path. Kept canonical:
/// a positive fact drops the negative ones it implies, and two negative
/// facts become the remaining positive one.
struct Refinements {
  std::uint8_t bits = 0;

  bool has(Refinement r) const noexcept { return (bits & static_cast<std::uint8_t>(r)) != 0; }
  bool may_be_int() const noexcept;
  bool may_be_bool() const noexcept;
  bool may_be_fn() const noexcept;

  friend bool operator==(Refinements, Refinements) = default;
};

std::string to_string(Refinements r);

enum class Predicate { IsInt, IsBool, IsFn };

/// Adds the fact "predicate(o) == outcome"; nullopt when it contradicts `o`.
std::optional<Refinements> refine(Refinements o, Predicate p, bool outcome);

struct BlameSet {
  std::set<BlameLabel> labels;
  /// The state cap was hit; every label must be assumed reachable.
  bool exhausted = false;
  std::size_t states = 0;

  bool contains(const BlameLabel& l) const { return exhausted || labels.count(l) != 0; }
};

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

BlameSet analyze(const ConPtr& e, std::size_t state_cap = kDefaultStateCap);

namespace symbolic {

struct AbsValue {
  enum class Tag : std::uint8_t { Const, Bool, Closure, Prim, Opaque, Guarded };

  Tag tag = Tag::Opaque;
  /// Const: literal id; Bool: 0/1; Closure: λ node; Prim: operator;
  /// Opaque: refinement bits; Guarded: monitor id.
  std::uint32_t a = 0;
  /// Closure: environment id.
  std::uint32_t b = 0;

  static AbsValue opaque(Refinements r = {}) { return AbsValue{Tag::Opaque, r.bits, 0}; }
  bool is_opaque() const noexcept { return tag == Tag::Opaque; }
  Refinements refinements() const noexcept { return Refinements{static_cast<std::uint8_t>(a)}; }

  friend bool operator==(const AbsValue&, const AbsValue&) = default;
};

struct State {
  enum class Mode : std::uint8_t { Eval, Return, Apply, Havoc };

  Mode mode = Mode::Eval;
  std::uint32_t node = 0;  // Eval
  std::uint32_t env = 0;   // Eval
  AbsValue value;          // Return: the value; Apply: the operator; Havoc: the escaped value
  AbsValue arg;            // Apply
  std::uint32_t kont = 0;

  friend bool operator==(const State&, const State&) = default;
};

struct Step {
  std::vector<State> next;
  std::vector<BlameLabel> blames;
};

/// The abstract machine itself; `analyze` is the usual entry point.
class Machine {
 public:
  Machine(const ConPtr& e, std::size_t state_cap);
  ~Machine();
  Machine(const Machine&) = delete;
  Machine& operator=(const Machine&) = delete;

  BlameSet run();

  /// Values that reached the top-level continuation during `run`.
  std::vector<AbsValue> results() const;
  /// Successors of letting unknown code interact with `v`.
  std::vector<State> havoc(const AbsValue& v);
  /// One transition; updates the shared store.
  Step step(const State& s);
  std::string describe(const AbsValue& v) const;
  /// Contract and parties of a Guarded value.
  std::optional<std::pair<Contract, BlameLabel>> guard_info(const AbsValue& v) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace symbolic

}  // namespace gtlc
