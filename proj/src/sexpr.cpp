#include "gtlc/sexpr.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace gtlc {

namespace {

bool is_delimiter(char c) {
  return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '[' || c == ']' || c == ';';
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Checked<std::vector<Datum>> run() {
    std::vector<Datum> out;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) break;
      auto d = datum();
      if (!d) return Checked<std::vector<Datum>>::fail(std::move(d.diagnostics));
      out.push_back(std::move(*d.value));
    }
    return Checked<std::vector<Datum>>::ok(std::move(out));
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  Checked<Datum> error(std::string msg, std::size_t begin, std::size_t end) {
    end = std::min(std::max(end, begin), text_.size());
    begin = std::min(begin, end);
    return Checked<Datum>::fail(Diagnostic{Diagnostic::Kind::Parse, std::move(msg), Span{begin, end}});
  }

  Checked<Datum> datum() {
    const std::size_t start = pos_;
    const char c = text_[pos_];
    if (c == ')' || c == ']') return error(std::string("unexpected '") + c + "'", start, start + 1);
    if (c == '(' || c == '[') {
      const char close = c == '(' ? ')' : ']';
      ++pos_;
      Datum list;
      list.kind = Datum::Kind::List;
      list.open = c;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) return error("unbalanced parenthesis", start, text_.size());
        const char d = text_[pos_];
        if (d == ')' || d == ']') {
          if (d != close) return error(std::string("mismatched '") + d + "'", pos_, pos_ + 1);
          ++pos_;
          break;
        }
        auto item = datum();
        if (!item) return item;
        list.items.push_back(std::move(*item.value));
      }
      list.span = Span{start, pos_};
      return Checked<Datum>::ok(std::move(list));
    }
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) ++pos_;
    Datum atom;
    atom.atom = std::string(text_.substr(start, pos_ - start));
    atom.span = Span{start, pos_};
    return Checked<Datum>::ok(std::move(atom));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Checked<std::vector<Datum>> read_data(std::string_view text) { return Reader(text).run(); }

bool is_identifier(std::string_view s) noexcept {
  if (s.empty()) return false;
  const auto first = static_cast<unsigned char>(s.front());
  if (!std::isalpha(first) && first != '_') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char ch) {
    const auto u = static_cast<unsigned char>(ch);
    return std::isalnum(u) || ch == '_' || ch == '!' || ch == '?' || ch == '-';
  });
}

bool is_integer_literal(std::string_view s) noexcept {
  if (!s.empty() && s.front() == '-') s.remove_prefix(1);
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
}

bool is_reserved(std::string_view s) noexcept {
  static constexpr std::array<std::string_view, 15> kReserved = {
      "int?", "bool?", "opaque", "if", "lambda", "module", "require", "require/typed",
      "opaque-require", "let", "mon", "blame", "any/c", "Int", "Bool"};
  return std::find(kReserved.begin(), kReserved.end(), s) != kReserved.end();
}

}  // namespace gtlc
