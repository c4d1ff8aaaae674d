#pragma once

// Syntax of the gradually-typed module language (surface) and of the untyped
// contract language it compiles to (con). All nodes are immutable and shared.

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace gtlc {

using Integer = boost::multiprecision::cpp_int;

/// A module name used as a contract party.
struct Party {
  std::string name;

  friend auto operator<=>(const Party&, const Party&) = default;
};

/// `blamed` broke a contract it holds with `holder`.
struct BlameLabel {
  Party blamed;
  Party holder;

  friend auto operator<=>(const BlameLabel&, const BlameLabel&) = default;
};

enum class Polarity { Pos, Neg };

constexpr Polarity flip(Polarity s) noexcept {
  return s == Polarity::Pos ? Polarity::Neg : Polarity::Pos;
}

enum class Primitive { IsInt, IsBool };

/// Byte offsets [begin, end) into the source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class Ty {
 public:
  enum class Kind { Int, Bool, Arrow };

  static Ty integer() { return Ty(Kind::Int, nullptr); }
  static Ty boolean() { return Ty(Kind::Bool, nullptr); }
  static Ty arrow(Ty dom, Ty cod) {
    return Ty(Kind::Arrow, std::make_shared<const std::pair<Ty, Ty>>(std::move(dom), std::move(cod)));
  }

  Kind kind() const noexcept { return kind_; }
  bool is_arrow() const noexcept { return kind_ == Kind::Arrow; }
  const Ty& dom() const { return parts_->first; }
  const Ty& cod() const { return parts_->second; }

  friend bool operator==(const Ty& a, const Ty& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ != Kind::Arrow || a.parts_ == b.parts_) return true;
    return a.dom() == b.dom() && a.cod() == b.cod();
  }

 private:
  Ty(Kind k, std::shared_ptr<const std::pair<Ty, Ty>> parts) : kind_(k), parts_(std::move(parts)) {}

  Kind kind_;
  std::shared_ptr<const std::pair<Ty, Ty>> parts_;
};

class Contract {
 public:
  enum class Kind { FlatInt, FlatBool, Any, Arrow };

  static Contract flat_int() { return Contract(Kind::FlatInt, nullptr); }
  static Contract flat_bool() { return Contract(Kind::FlatBool, nullptr); }
  static Contract any() { return Contract(Kind::Any, nullptr); }
  static Contract arrow(Contract dom, Contract cod) {
    return Contract(Kind::Arrow,
                    std::make_shared<const std::pair<Contract, Contract>>(std::move(dom), std::move(cod)));
  }

  Kind kind() const noexcept { return kind_; }
  bool is_arrow() const noexcept { return kind_ == Kind::Arrow; }
  bool is_flat() const noexcept { return kind_ == Kind::FlatInt || kind_ == Kind::FlatBool; }
  bool is_any() const noexcept { return kind_ == Kind::Any; }
  const Contract& dom() const { return parts_->first; }
  const Contract& cod() const { return parts_->second; }

  friend bool operator==(const Contract& a, const Contract& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ != Kind::Arrow || a.parts_ == b.parts_) return true;
    return a.dom() == b.dom() && a.cod() == b.cod();
  }

 private:
  Contract(Kind k, std::shared_ptr<const std::pair<Contract, Contract>> parts)
      : kind_(k), parts_(std::move(parts)) {}

  Kind kind_;
  std::shared_ptr<const std::pair<Contract, Contract>> parts_;
};

// ---------------------------------------------------------------------------
// Surface language

struct SurfaceExpr;
using SurfacePtr = std::shared_ptr<const SurfaceExpr>;

namespace surface {

struct Var { std::string name; };
struct IntLit { Integer value; };
struct BoolLit { bool value; };
struct Prim { Primitive op; };
struct App { SurfacePtr fn, arg; };
struct If { SurfacePtr test, then_branch, else_branch; };
/// `annotation` is present in typed bodies and absent in untyped ones.
struct Lambda {
  std::string param;
  std::optional<Ty> annotation;
  SurfacePtr body;
};
struct Opaque {};

}  // namespace surface

struct SurfaceExpr {
  using Node = std::variant<surface::Var, surface::IntLit, surface::BoolLit, surface::Prim, surface::App,
                            surface::If, surface::Lambda, surface::Opaque>;
  Node node;
  Span span;

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&node);
  }
};

namespace surface {

SurfacePtr var(std::string name, Span span = {});
SurfacePtr integer(Integer value, Span span = {});
SurfacePtr boolean(bool value, Span span = {});
SurfacePtr prim(Primitive op, Span span = {});
SurfacePtr app(SurfacePtr fn, SurfacePtr arg, Span span = {});
SurfacePtr if_(SurfacePtr test, SurfacePtr then_branch, SurfacePtr else_branch, Span span = {});
SurfacePtr lambda(std::string param, std::optional<Ty> annotation, SurfacePtr body, Span span = {});
SurfacePtr opaque(Span span = {});

}  // namespace surface

struct Require {
  enum class Kind { Plain, Typed };

  Kind kind = Kind::Plain;
  Party target;
  /// Present iff kind == Typed.
  std::optional<Ty> annotation;
  /// Written as `opaque-require`: the target is never analyzed.
  bool opaque = false;
  Span span;

  static Require plain(std::string target) { return Require{Kind::Plain, Party{std::move(target)}, {}, false, {}}; }
  static Require typed(std::string target, Ty t) {
    return Require{Kind::Typed, Party{std::move(target)}, std::move(t), false, {}};
  }
};

struct SurfaceModule {
  Party name;
  /// Present iff the module is typed.
  std::optional<Ty> annotation;
  std::vector<Require> imports;
  SurfacePtr body;
  Span span;

  bool typed() const noexcept { return annotation.has_value(); }
};

struct SurfaceProgram {
  std::vector<SurfaceModule> modules;

  const SurfaceModule* find(const Party& name) const;
  /// Modules named by some `opaque-require`.
  std::vector<Party> opaque_targets() const;
};

// ---------------------------------------------------------------------------
// Contract language

struct ConExpr;
using ConPtr = std::shared_ptr<const ConExpr>;

namespace con {

struct Var { std::string name; };
struct IntLit { Integer value; };
struct BoolLit { bool value; };
struct Prim { Primitive op; };
struct App { ConPtr fn, arg; };
struct If { ConPtr test, then_branch, else_branch; };
struct Lambda {
  std::string param;
  ConPtr body;
};
struct Mon {
  Party pos;
  Party neg;
  Contract contract;
  ConPtr body;
};
struct BlameTerm { BlameLabel label; };
struct Let {
  std::string name;
  ConPtr rhs, body;
};
/// `scope`, when set, lists the identifiers the unknown code may reference;
/// unset means every identifier in lexical scope. Ignored by equality.
struct Opaque {
  std::optional<std::vector<std::string>> scope;
};

}  // namespace con

struct ConExpr {
  using Node = std::variant<con::Var, con::IntLit, con::BoolLit, con::Prim, con::App, con::If, con::Lambda,
                            con::Mon, con::BlameTerm, con::Let, con::Opaque>;
  Node node;

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&node);
  }
};

namespace con {

ConPtr var(std::string name);
ConPtr integer(Integer value);
ConPtr boolean(bool value);
ConPtr prim(Primitive op);
ConPtr app(ConPtr fn, ConPtr arg);
ConPtr if_(ConPtr test, ConPtr then_branch, ConPtr else_branch);
ConPtr lambda(std::string param, ConPtr body);
ConPtr mon(Party pos, Party neg, Contract contract, ConPtr body);
ConPtr blame(BlameLabel label);
ConPtr let(std::string name, ConPtr rhs, ConPtr body);
ConPtr opaque(std::optional<std::vector<std::string>> scope = std::nullopt);

}  // namespace con

/// Child positions: App fn=0 arg=1; If test=0 then=1 else=2; Lambda body=0;
/// Mon body=0; Let rhs=0 body=1.
using ConPath = std::vector<int>;

std::vector<ConPtr> children(const ConExpr& e);
const ConExpr& at_path(const ConExpr& root, const ConPath& path);
/// Returns root with the subtree at `path` replaced.
ConPtr replace_at(const ConPtr& root, const ConPath& path, ConPtr replacement);

/// Alpha-equivalence over lambda- and let-bound identifiers.
bool structurally_equal(const ConExpr& a, const ConExpr& b);
/// Exact equality ignoring source spans.
bool structurally_equal(const SurfaceExpr& a, const SurfaceExpr& b);
bool structurally_equal(const SurfaceProgram& a, const SurfaceProgram& b);

std::size_t count_monitors(const ConExpr& e);

}  // namespace gtlc
