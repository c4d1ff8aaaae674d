#pragma once

// Call-by-value, left-to-right evaluation of the contract language with
// higher-order monitors and blame, instrumented with check counters.

#include <chrono>
#include <cstdint>
#include <memory>
#include <string>

#include "gtlc/ast.hpp"

namespace gtlc {

/// A run's final value, detached from the evaluator's heap.
struct ValueView {
  enum class Kind { Int, Bool, Closure, Prim, Guarded };

  Kind kind = Kind::Int;
  Integer integer;
  bool boolean = false;
  Primitive prim = Primitive::IsInt;
  std::string param;  // Closure
  // Guarded
  std::optional<Contract> contract;
  Party pos;
  Party neg;
  std::shared_ptr<const ValueView> inner;

  bool is_function() const noexcept { return kind != Kind::Int && kind != Kind::Bool; }
};

std::string to_string(const ValueView& v);

struct Answer {
  enum class Kind { Value, Blamed, Stuck, OutOfFuel };

  Kind kind = Kind::Stuck;
  ValueView value;
  BlameLabel label;
  std::string reason;

  bool is_value() const noexcept { return kind == Kind::Value; }
  bool is_blame() const noexcept { return kind == Kind::Blamed; }
};

std::string to_string(const Answer& a);

/// First-order values compare by content; any two functions are equal,
/// since wrappers are unobservable except through application.
bool same_observation(const Answer& a, const Answer& b);

struct Metrics {
  std::uint64_t flat_checks = 0;
  std::uint64_t wrappers_allocated = 0;
  std::uint64_t wrapped_calls = 0;
  std::uint64_t steps = 0;
  std::chrono::nanoseconds wall_time{0};
};

struct RunResult {
  Answer answer;
  Metrics metrics;
};

inline constexpr std::uint64_t kDefaultFuel = 10'000'000;

/// Precondition: `e` is closed (throws std::invalid_argument otherwise).
RunResult eval(const ConPtr& e, std::uint64_t fuel = kDefaultFuel);

}  // namespace gtlc
