#pragma once

// Minimal s-expression reader shared by the surface and contract-language
// parsers. `;` starts a line comment; `[`/`]` pair like parentheses.

#include <string>
#include <string_view>
#include <vector>

#include "gtlc/diagnostic.hpp"

namespace gtlc {

struct Datum {
  enum class Kind { Atom, List };

  Kind kind = Kind::Atom;
  std::string atom;
  std::vector<Datum> items;
  Span span;
  char open = '(';

  bool is_atom() const noexcept { return kind == Kind::Atom; }
  bool is_atom(std::string_view s) const noexcept { return kind == Kind::Atom && atom == s; }
  bool is_list() const noexcept { return kind == Kind::List; }
  /// True for a list whose first element is the atom `head`.
  bool headed(std::string_view head) const noexcept {
    return is_list() && !items.empty() && items.front().is_atom(head);
  }
};

Checked<std::vector<Datum>> read_data(std::string_view text);

bool is_identifier(std::string_view s) noexcept;
bool is_integer_literal(std::string_view s) noexcept;
bool is_reserved(std::string_view s) noexcept;

}  // namespace gtlc
