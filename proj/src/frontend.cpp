#include "gtlc/frontend.hpp"

#include <algorithm>

#include "gtlc/printer.hpp"
#include "gtlc/sexpr.hpp"

namespace gtlc {

std::string_view kind_name(Diagnostic::Kind k) noexcept {
  switch (k) {
    case Diagnostic::Kind::Parse: return "parse";
    case Diagnostic::Kind::Unbound: return "unbound";
    case Diagnostic::Kind::DuplicateModule: return "duplicate-module";
    case Diagnostic::Kind::RequireKindMismatch: return "require-kind-mismatch";
    case Diagnostic::Kind::TypeError: return "type-error";
    case Diagnostic::Kind::MainMissing: return "main-missing";
  }
  return "unknown";
}

std::string format(const Diagnostic& d, std::string_view text, std::string_view file) {
  std::size_t line = 1;
  std::size_t col = 1;
  const std::size_t stop = std::min(d.span.begin, text.size());
  for (std::size_t i = 0; i < stop; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
      ++col;
    }
  }
  return std::string(file) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
         std::string(kind_name(d.kind)) + ": " + d.message;
}

namespace {

constexpr std::string_view kLambda = "λ";

Diagnostic parse_error(std::string msg, Span span) {
  return Diagnostic{Diagnostic::Kind::Parse, std::move(msg), span};
}

bool is_lambda_head(const Datum& d) { return d.is_atom(kLambda) || d.is_atom("lambda"); }

Checked<Ty> type_of(const Datum& d) {
  if (d.is_atom("Int")) return Checked<Ty>::ok(Ty::integer());
  if (d.is_atom("Bool")) return Checked<Ty>::ok(Ty::boolean());
  if (d.headed("->") && d.items.size() == 3) {
    auto dom = type_of(d.items[1]);
    if (!dom) return dom;
    auto cod = type_of(d.items[2]);
    if (!cod) return cod;
    return Checked<Ty>::ok(Ty::arrow(*dom, *cod));
  }
  return Checked<Ty>::fail(parse_error("expected a type: Int, Bool or (-> T T)", d.span));
}

bool looks_like_type(const Datum& d) { return d.is_atom("Int") || d.is_atom("Bool") || d.headed("->"); }

Checked<std::string> identifier(const Datum& d, std::string_view what) {
  if (d.is_atom() && is_identifier(d.atom) && !is_reserved(d.atom)) return Checked<std::string>::ok(d.atom);
  return Checked<std::string>::fail(parse_error("expected " + std::string(what), d.span));
}

Checked<SurfacePtr> surface_expr(const Datum& d) {
  using R = Checked<SurfacePtr>;
  if (d.is_atom()) {
    const std::string& a = d.atom;
    if (a == "#t" || a == "#f") return R::ok(surface::boolean(a == "#t", d.span));
    if (a == "int?") return R::ok(surface::prim(Primitive::IsInt, d.span));
    if (a == "bool?") return R::ok(surface::prim(Primitive::IsBool, d.span));
    if (a == "opaque") return R::ok(surface::opaque(d.span));
    if (is_integer_literal(a)) return R::ok(surface::integer(Integer(a), d.span));
    if (is_identifier(a) && !is_reserved(a)) return R::ok(surface::var(a, d.span));
    return R::fail(parse_error("unexpected token '" + a + "'", d.span));
  }
  if (d.items.empty()) return R::fail(parse_error("empty form", d.span));
  const Datum& head = d.items.front();
  if (head.is_atom("if")) {
    if (d.items.size() != 4) return R::fail(parse_error("if takes a test and two branches", d.span));
    auto t = surface_expr(d.items[1]);
    if (!t) return t;
    auto c = surface_expr(d.items[2]);
    if (!c) return c;
    auto e = surface_expr(d.items[3]);
    if (!e) return e;
    return R::ok(surface::if_(*t, *c, *e, d.span));
  }
  if (is_lambda_head(head)) {
    if (d.items.size() != 3 || !d.items[1].is_list()) {
      return R::fail(parse_error("λ takes a parameter list and a body", d.span));
    }
    const auto& binder = d.items[1].items;
    std::optional<Ty> annotation;
    if (binder.size() == 3 && binder[1].is_atom(":")) {
      auto t = type_of(binder[2]);
      if (!t) return R::fail(std::move(t.diagnostics));
      annotation = *t;
    } else if (binder.size() != 1) {
      return R::fail(parse_error("λ takes exactly one parameter", d.items[1].span));
    }
    auto param = identifier(binder[0], "a parameter name");
    if (!param) return R::fail(std::move(param.diagnostics));
    auto body = surface_expr(d.items[2]);
    if (!body) return body;
    return R::ok(surface::lambda(*param, std::move(annotation), *body, d.span));
  }
  if (head.is_atom() && is_reserved(head.atom) && head.atom != "int?" && head.atom != "bool?" &&
      head.atom != "opaque") {
    return R::fail(parse_error("'" + head.atom + "' is not valid in expression position", head.span));
  }
  if (d.items.size() != 2) return R::fail(parse_error("application takes exactly one argument", d.span));
  auto f = surface_expr(d.items[0]);
  if (!f) return f;
  auto x = surface_expr(d.items[1]);
  if (!x) return x;
  return R::ok(surface::app(*f, *x, d.span));
}

Checked<Require> require_form(const Datum& d) {
  using R = Checked<Require>;
  Require r;
  r.span = d.span;
  const auto& head = d.items.front().atom;
  if (head == "require") {
    if (d.items.size() != 2) return R::fail(parse_error("(require X) takes one module name", d.span));
  } else if (head == "require/typed") {
    if (d.items.size() != 3) return R::fail(parse_error("(require/typed X T) takes a module and a type", d.span));
    r.kind = Require::Kind::Typed;
  } else {
    if (d.items.size() != 2 && d.items.size() != 3) {
      return R::fail(parse_error("(opaque-require X [T]) takes a module and an optional type", d.span));
    }
    r.opaque = true;
    if (d.items.size() == 3) r.kind = Require::Kind::Typed;
  }
  auto name = identifier(d.items[1], "a module name");
  if (!name) return R::fail(std::move(name.diagnostics));
  r.target = Party{*name};
  if (r.kind == Require::Kind::Typed) {
    auto t = type_of(d.items[2]);
    if (!t) return R::fail(std::move(t.diagnostics));
    r.annotation = *t;
  }
  return R::ok(std::move(r));
}

bool is_require_form(const Datum& d) {
  return d.headed("require") || d.headed("require/typed") || d.headed("opaque-require");
}

Checked<SurfaceModule> module_form(const Datum& d) {
  using R = Checked<SurfaceModule>;
  if (!d.headed("module")) return R::fail(parse_error("expected (module ...)", d.span));
  if (d.items.size() < 3) return R::fail(parse_error("module needs a name and a body", d.span));
  auto name = identifier(d.items[1], "a module name");
  if (!name) return R::fail(std::move(name.diagnostics));
  SurfaceModule m;
  m.name = Party{*name};
  m.span = d.span;
  std::size_t i = 2;
  if (d.items.size() >= 4 && looks_like_type(d.items[2])) {
    auto t = type_of(d.items[2]);
    if (!t) return R::fail(std::move(t.diagnostics));
    m.annotation = *t;
    ++i;
  }
  for (; i + 1 < d.items.size(); ++i) {
    if (!is_require_form(d.items[i])) {
      return R::fail(parse_error("expected a require form or the module body", d.items[i].span));
    }
    auto r = require_form(d.items[i]);
    if (!r) return R::fail(std::move(r.diagnostics));
    m.imports.push_back(std::move(*r.value));
  }
  if (i >= d.items.size()) return R::fail(parse_error("module has no body", d.span));
  auto body = surface_expr(d.items[i]);
  if (!body) return R::fail(std::move(body.diagnostics));
  m.body = *body;
  return R::ok(std::move(m));
}

Checked<Contract> contract_of(const Datum& d) {
  using R = Checked<Contract>;
  if (d.is_atom("int?")) return R::ok(Contract::flat_int());
  if (d.is_atom("bool?")) return R::ok(Contract::flat_bool());
  if (d.is_atom("any/c")) return R::ok(Contract::any());
  if (d.headed("->") && d.items.size() == 3) {
    auto dom = contract_of(d.items[1]);
    if (!dom) return dom;
    auto cod = contract_of(d.items[2]);
    if (!cod) return cod;
    return R::ok(Contract::arrow(*dom, *cod));
  }
  return R::fail(parse_error("expected a contract: int?, bool?, any/c or (-> C C)", d.span));
}

Checked<ConPtr> con_expr(const Datum& d) {
  using R = Checked<ConPtr>;
  if (d.is_atom()) {
    const std::string& a = d.atom;
    if (a == "#t" || a == "#f") return R::ok(con::boolean(a == "#t"));
    if (a == "int?") return R::ok(con::prim(Primitive::IsInt));
    if (a == "bool?") return R::ok(con::prim(Primitive::IsBool));
    if (a == "opaque") return R::ok(con::opaque());
    if (is_integer_literal(a)) return R::ok(con::integer(Integer(a)));
    if (is_identifier(a) && !is_reserved(a)) return R::ok(con::var(a));
    return R::fail(parse_error("unexpected token '" + a + "'", d.span));
  }
  if (d.items.empty()) return R::fail(parse_error("empty form", d.span));
  const Datum& head = d.items.front();
  if (head.is_atom("if")) {
    if (d.items.size() != 4) return R::fail(parse_error("if takes a test and two branches", d.span));
    auto t = con_expr(d.items[1]);
    if (!t) return t;
    auto c = con_expr(d.items[2]);
    if (!c) return c;
    auto e = con_expr(d.items[3]);
    if (!e) return e;
    return R::ok(con::if_(*t, *c, *e));
  }
  if (is_lambda_head(head)) {
    if (d.items.size() != 3 || !d.items[1].is_list() || d.items[1].items.size() != 1) {
      return R::fail(parse_error("λ takes one parameter and a body", d.span));
    }
    auto param = identifier(d.items[1].items[0], "a parameter name");
    if (!param) return R::fail(std::move(param.diagnostics));
    auto body = con_expr(d.items[2]);
    if (!body) return body;
    return R::ok(con::lambda(*param, *body));
  }
  if (head.is_atom("let")) {
    if (d.items.size() != 3 || !d.items[1].is_list() || d.items[1].items.size() != 2) {
      return R::fail(parse_error("let takes [name rhs] and a body", d.span));
    }
    auto name = identifier(d.items[1].items[0], "a let-bound name");
    if (!name) return R::fail(std::move(name.diagnostics));
    auto rhs = con_expr(d.items[1].items[1]);
    if (!rhs) return rhs;
    auto body = con_expr(d.items[2]);
    if (!body) return body;
    return R::ok(con::let(*name, *rhs, *body));
  }
  if (head.is_atom("mon")) {
    if (d.items.size() != 4 || !d.items[1].is_list() || d.items[1].items.size() != 2) {
      return R::fail(parse_error("mon takes (pos neg), a contract and an expression", d.span));
    }
    auto pos = identifier(d.items[1].items[0], "a party name");
    if (!pos) return R::fail(std::move(pos.diagnostics));
    auto neg = identifier(d.items[1].items[1], "a party name");
    if (!neg) return R::fail(std::move(neg.diagnostics));
    auto c = contract_of(d.items[2]);
    if (!c) return R::fail(std::move(c.diagnostics));
    auto body = con_expr(d.items[3]);
    if (!body) return body;
    return R::ok(con::mon(Party{*pos}, Party{*neg}, *c, *body));
  }
  if (head.is_atom("blame")) {
    if (d.items.size() != 3) return R::fail(parse_error("blame takes the blamed party and the holder", d.span));
    auto blamed = identifier(d.items[1], "a party name");
    if (!blamed) return R::fail(std::move(blamed.diagnostics));
    auto holder = identifier(d.items[2], "a party name");
    if (!holder) return R::fail(std::move(holder.diagnostics));
    return R::ok(con::blame(BlameLabel{Party{*blamed}, Party{*holder}}));
  }
  if (head.is_atom() && is_reserved(head.atom) && head.atom != "int?" && head.atom != "bool?" &&
      head.atom != "opaque") {
    return R::fail(parse_error("'" + head.atom + "' is not valid in expression position", head.span));
  }
  if (d.items.size() != 2) return R::fail(parse_error("application takes exactly one argument", d.span));
  auto f = con_expr(d.items[0]);
  if (!f) return f;
  auto x = con_expr(d.items[1]);
  if (!x) return x;
  return R::ok(con::app(*f, *x));
}

// ---------------------------------------------------------------------------
// Typing

Diagnostic type_error(std::string msg, Span span) {
  return Diagnostic{Diagnostic::Kind::TypeError, std::move(msg), span};
}

class TypeChecker {
 public:
  explicit TypeChecker(TypeEnv env) : env_(std::move(env)) {}

  Checked<Ty> synth(const SurfaceExpr& e) {
    using R = Checked<Ty>;
    if (auto* v = e.as<surface::Var>()) {
      for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
        if (it->first == v->name) return R::ok(it->second);
      }
      return R::fail(Diagnostic{Diagnostic::Kind::Unbound, "unbound identifier '" + v->name + "'", e.span});
    }
    if (e.as<surface::IntLit>()) return R::ok(Ty::integer());
    if (e.as<surface::BoolLit>()) return R::ok(Ty::boolean());
    if (e.as<surface::Prim>()) {
      return R::fail(type_error("cannot infer the type of a primitive outside an application", e.span));
    }
    if (e.as<surface::Opaque>()) return R::fail(type_error("cannot infer the type of opaque here", e.span));
    if (auto* a = e.as<surface::App>()) {
      if (a->fn->as<surface::Prim>()) {
        if (auto bad = any_type(*a->arg)) return R::fail(std::move(*bad));
        return R::ok(Ty::boolean());
      }
      if (a->fn->as<surface::Opaque>()) {
        return R::fail(type_error("cannot infer the result type of an opaque operator", e.span));
      }
      auto f = synth(*a->fn);
      if (!f) return f;
      if (!f->is_arrow()) {
        return R::fail(type_error("applying a non-function of type " + to_string(*f), a->fn->span));
      }
      if (auto bad = check(*a->arg, f->dom())) return R::fail(std::move(*bad));
      return R::ok(f->cod());
    }
    if (auto* i = e.as<surface::If>()) {
      if (auto bad = check(*i->test, Ty::boolean())) return R::fail(std::move(*bad));
      const bool then_opaque = i->then_branch->as<surface::Opaque>() != nullptr;
      const SurfaceExpr& first = then_opaque ? *i->else_branch : *i->then_branch;
      const SurfaceExpr& second = then_opaque ? *i->then_branch : *i->else_branch;
      auto t = synth(first);
      if (!t) return t;
      if (auto bad = check(second, *t)) return R::fail(std::move(*bad));
      return t;
    }
    if (auto* l = e.as<surface::Lambda>()) {
      if (!l->annotation) return R::fail(type_error("λ in a typed module needs a parameter type", e.span));
      env_.emplace_back(l->param, *l->annotation);
      auto body = synth(*l->body);
      env_.pop_back();
      if (!body) return body;
      return R::ok(Ty::arrow(*l->annotation, *body));
    }
    return R::fail(type_error("unsupported expression", e.span));
  }

  std::optional<Diagnostic> check(const SurfaceExpr& e, const Ty& want) {
    if (e.as<surface::Opaque>()) return std::nullopt;
    if (auto* l = e.as<surface::Lambda>()) {
      if (!l->annotation) return type_error("λ in a typed module needs a parameter type", e.span);
      if (!want.is_arrow() || !(want.dom() == *l->annotation)) {
        return type_error("expected " + to_string(want) + " but found a function taking " + to_string(*l->annotation),
                          e.span);
      }
      env_.emplace_back(l->param, *l->annotation);
      auto bad = check(*l->body, want.cod());
      env_.pop_back();
      return bad;
    }
    if (auto* i = e.as<surface::If>()) {
      if (auto bad = check(*i->test, Ty::boolean())) return bad;
      if (auto bad = check(*i->then_branch, want)) return bad;
      return check(*i->else_branch, want);
    }
    if (e.as<surface::Prim>()) {
      if (want.is_arrow() && want.cod() == Ty::boolean()) return std::nullopt;
      return type_error("a primitive predicate has type (-> T Bool), not " + to_string(want), e.span);
    }
    if (auto* a = e.as<surface::App>()) {
      if (a->fn->as<surface::Opaque>()) return any_type(*a->arg);
      if (a->fn->as<surface::Prim>()) {
        if (auto bad = any_type(*a->arg)) return bad;
        if (!(want == Ty::boolean())) return type_error("expected " + to_string(want) + " but found Bool", e.span);
        return std::nullopt;
      }
    }
    auto got = synth(e);
    if (!got) return std::move(got.diagnostics.front());
    if (!(*got == want)) return type_error("expected " + to_string(want) + " but found " + to_string(*got), e.span);
    return std::nullopt;
  }

 private:
  // Arguments of int?/bool? may have any type; they only need to be typable.
  std::optional<Diagnostic> any_type(const SurfaceExpr& e) {
    if (e.as<surface::Opaque>()) return std::nullopt;
    if (auto* a = e.as<surface::App>(); a && a->fn->as<surface::Opaque>()) return any_type(*a->arg);
    if (e.as<surface::Prim>()) return std::nullopt;
    auto t = synth(e);
    if (!t) return std::move(t.diagnostics.front());
    return std::nullopt;
  }

  TypeEnv env_;
};

void check_closed(const SurfaceExpr& e, std::vector<std::string>& scope, std::vector<Diagnostic>& out) {
  if (auto* v = e.as<surface::Var>()) {
    if (std::find(scope.begin(), scope.end(), v->name) == scope.end()) {
      out.push_back(Diagnostic{Diagnostic::Kind::Unbound, "unbound identifier '" + v->name + "'", e.span});
    }
  } else if (auto* a = e.as<surface::App>()) {
    check_closed(*a->fn, scope, out);
    check_closed(*a->arg, scope, out);
  } else if (auto* i = e.as<surface::If>()) {
    check_closed(*i->test, scope, out);
    check_closed(*i->then_branch, scope, out);
    check_closed(*i->else_branch, scope, out);
  } else if (auto* l = e.as<surface::Lambda>()) {
    if (l->annotation) out.push_back(type_error("λ in an untyped module cannot carry a type", e.span));
    scope.push_back(l->param);
    check_closed(*l->body, scope, out);
    scope.pop_back();
  }
}

const SurfaceModule* lookup(std::span<const SurfaceModule> prior, const Party& name) {
  for (const auto& m : prior) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

Diagnostic unbound_module(const Require& r) {
  return Diagnostic{Diagnostic::Kind::Unbound, "module '" + r.target.name + "' is not defined before this require",
                    r.span};
}

}  // namespace

Checked<SurfaceProgram> parse_program(std::string_view text) {
  auto data = read_data(text);
  if (!data) return Checked<SurfaceProgram>::fail(std::move(data.diagnostics));
  SurfaceProgram p;
  std::vector<Diagnostic> errors;
  for (const auto& d : *data) {
    auto m = module_form(d);
    if (!m) {
      errors.insert(errors.end(), m.diagnostics.begin(), m.diagnostics.end());
      continue;
    }
    p.modules.push_back(std::move(*m.value));
  }
  if (!errors.empty()) return Checked<SurfaceProgram>::fail(std::move(errors));
  return Checked<SurfaceProgram>::ok(std::move(p));
}

Checked<ConPtr> parse_con(std::string_view text) {
  auto data = read_data(text);
  if (!data) return Checked<ConPtr>::fail(std::move(data.diagnostics));
  if (data->size() != 1) {
    return Checked<ConPtr>::fail(parse_error("expected exactly one expression", Span{0, text.size()}));
  }
  return con_expr(data->front());
}

Checked<Ty> parse_type(std::string_view text) {
  auto data = read_data(text);
  if (!data) return Checked<Ty>::fail(std::move(data.diagnostics));
  if (data->size() != 1) return Checked<Ty>::fail(parse_error("expected exactly one type", Span{0, text.size()}));
  return type_of(data->front());
}

Checked<Contract> parse_contract(std::string_view text) {
  auto data = read_data(text);
  if (!data) return Checked<Contract>::fail(std::move(data.diagnostics));
  if (data->size() != 1) {
    return Checked<Contract>::fail(parse_error("expected exactly one contract", Span{0, text.size()}));
  }
  return contract_of(data->front());
}

Checked<TypeEnv> ty_env(std::span<const Require> imports, std::span<const SurfaceModule> prior) {
  TypeEnv env;
  std::vector<Diagnostic> errors;
  for (const auto& r : imports) {
    const SurfaceModule* target = lookup(prior, r.target);
    if (!target) {
      errors.push_back(unbound_module(r));
      continue;
    }
    if (r.kind == Require::Kind::Plain) {
      if (!target->typed()) {
        errors.push_back(Diagnostic{Diagnostic::Kind::RequireKindMismatch,
                                    "typed module requires untyped '" + r.target.name + "' without a type",
                                    r.span});
        continue;
      }
      env.emplace_back(r.target.name, *target->annotation);
    } else {
      if (target->typed()) {
        errors.push_back(Diagnostic{Diagnostic::Kind::RequireKindMismatch,
                                    "require/typed of typed module '" + r.target.name + "'", r.span});
        continue;
      }
      env.emplace_back(r.target.name, *r.annotation);
    }
  }
  if (!errors.empty()) return Checked<TypeEnv>::fail(std::move(errors));
  return Checked<TypeEnv>::ok(std::move(env));
}

Checked<NameEnv> name_env(std::span<const Require> imports, std::span<const SurfaceModule> prior) {
  NameEnv env;
  std::vector<Diagnostic> errors;
  for (const auto& r : imports) {
    if (r.kind != Require::Kind::Plain) {
      errors.push_back(Diagnostic{Diagnostic::Kind::RequireKindMismatch,
                                  "untyped modules use plain requires only", r.span});
      continue;
    }
    if (!lookup(prior, r.target)) {
      errors.push_back(unbound_module(r));
      continue;
    }
    env.push_back(r.target.name);
  }
  if (!errors.empty()) return Checked<NameEnv>::fail(std::move(errors));
  return Checked<NameEnv>::ok(std::move(env));
}

Checked<Ty> typecheck_expr(const TypeEnv& env, const SurfaceExpr& body, const std::optional<Ty>& expected) {
  TypeChecker tc(env);
  if (!expected) return tc.synth(body);
  if (auto bad = tc.check(body, *expected)) return Checked<Ty>::fail(std::move(*bad));
  return Checked<Ty>::ok(*expected);
}

std::vector<Diagnostic> check_wellformed(const SurfaceProgram& p) {
  std::vector<Diagnostic> out;
  bool has_main = false;
  const std::span<const SurfaceModule> all(p.modules);
  for (std::size_t i = 0; i < p.modules.size(); ++i) {
    const SurfaceModule& m = p.modules[i];
    const auto prior = all.first(i);
    if (lookup(prior, m.name)) {
      out.push_back(Diagnostic{Diagnostic::Kind::DuplicateModule, "module '" + m.name.name + "' is defined twice",
                               m.span});
    }
    if (m.name.name == "main") {
      has_main = true;
      if (m.typed()) out.push_back(type_error("module main must be untyped", m.span));
    }
    if (m.typed()) {
      auto env = ty_env(m.imports, prior);
      if (!env) {
        out.insert(out.end(), env.diagnostics.begin(), env.diagnostics.end());
        continue;
      }
      auto t = typecheck_expr(*env, *m.body, m.annotation);
      out.insert(out.end(), t.diagnostics.begin(), t.diagnostics.end());
    } else {
      auto env = name_env(m.imports, prior);
      if (!env) {
        out.insert(out.end(), env.diagnostics.begin(), env.diagnostics.end());
        continue;
      }
      std::vector<std::string> scope = *env;
      check_closed(*m.body, scope, out);
    }
  }
  if (!has_main) {
    const std::size_t end = p.modules.empty() ? 0 : p.modules.back().span.end;
    out.push_back(Diagnostic{Diagnostic::Kind::MainMissing, "program has no module named main", Span{end, end}});
  }
  return out;
}

Checked<SurfaceProgram> load_program(std::string_view text) {
  auto p = parse_program(text);
  if (!p) return p;
  auto problems = check_wellformed(*p);
  if (!problems.empty()) return Checked<SurfaceProgram>::fail(std::move(problems));
  return p;
}

}  // namespace gtlc
