#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gtlc/ast.hpp"

namespace gtlc {

struct Diagnostic {
  enum class Kind { Parse, Unbound, DuplicateModule, RequireKindMismatch, TypeError, MainMissing };

  Kind kind;
  std::string message;
  Span span;
};

std::string_view kind_name(Diagnostic::Kind k) noexcept;
/// `file:line:col: kind: message`, resolving the span against `text`.
std::string format(const Diagnostic& d, std::string_view text, std::string_view file = "<input>");

/// A value or the diagnostics explaining why there is none.
template <class T>
struct Checked {
  std::optional<T> value;
  std::vector<Diagnostic> diagnostics;

  static Checked ok(T v) { return Checked{std::move(v), {}}; }
  static Checked fail(Diagnostic d) { return Checked{std::nullopt, {std::move(d)}}; }
  static Checked fail(std::vector<Diagnostic> ds) { return Checked{std::nullopt, std::move(ds)}; }

  bool ok() const noexcept { return value.has_value(); }
  explicit operator bool() const noexcept { return ok(); }
  const T& operator*() const { return *value; }
  const T* operator->() const { return &*value; }
};

}  // namespace gtlc
