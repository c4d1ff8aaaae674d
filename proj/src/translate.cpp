#include "gtlc/translate.hpp"

namespace gtlc {

Contract compile_type(const Ty& t) {
  switch (t.kind()) {
    case Ty::Kind::Int: return Contract::flat_int();
    case Ty::Kind::Bool: return Contract::flat_bool();
    case Ty::Kind::Arrow: return Contract::arrow(compile_type(t.dom()), compile_type(t.cod()));
  }
  return Contract::any();
}

namespace {

ConPtr erase_in(const SurfaceExpr& e, std::vector<std::string>* scope) {
  if (auto* v = e.as<surface::Var>()) return con::var(v->name);
  if (auto* i = e.as<surface::IntLit>()) return con::integer(i->value);
  if (auto* b = e.as<surface::BoolLit>()) return con::boolean(b->value);
  if (auto* p = e.as<surface::Prim>()) return con::prim(p->op);
  if (auto* a = e.as<surface::App>()) return con::app(erase_in(*a->fn, scope), erase_in(*a->arg, scope));
  if (auto* i = e.as<surface::If>()) {
    return con::if_(erase_in(*i->test, scope), erase_in(*i->then_branch, scope), erase_in(*i->else_branch, scope));
  }
  if (auto* l = e.as<surface::Lambda>()) {
    if (scope) scope->push_back(l->param);
    auto body = erase_in(*l->body, scope);
    if (scope) scope->pop_back();
    return con::lambda(l->param, std::move(body));
  }
  if (scope) return con::opaque(*scope);
  return con::opaque();
}

bool monitored(const SurfaceModule& requirer, const Require& r, const SurfaceProgram& p) {
  if (requirer.typed()) return r.kind == Require::Kind::Typed;
  const SurfaceModule* target = p.find(r.target);
  return target && target->typed();
}

Contract boundary_contract(const Require& r, const SurfaceProgram& p) {
  if (r.annotation) return compile_type(*r.annotation);
  return compile_type(*p.find(r.target)->annotation);
}

ConPtr compile_module(const SurfaceModule& m, const SurfaceProgram& p) {
  std::vector<std::string> scope;
  for (const auto& r : m.imports) scope.push_back(r.target.name);
  ConPtr core = erase_in(*m.body, &scope);
  for (auto it = m.imports.rbegin(); it != m.imports.rend(); ++it) {
    if (!monitored(m, *it, p)) continue;
    const std::string& x = it->target.name;
    core = con::let(x, con::mon(it->target, m.name, boundary_contract(*it, p), con::var(x)), std::move(core));
  }
  return core;
}

void collect(const ConPtr& e, ConPath& path, std::vector<Boundary>& out) {
  if (auto* m = e->as<con::Mon>()) out.push_back(Boundary{m->pos, m->neg, m->contract, path});
  auto kids = children(*e);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(static_cast<int>(i));
    collect(kids[i], path, out);
    path.pop_back();
  }
}

}  // namespace

ConPtr erase(const SurfaceExpr& body, const std::optional<std::vector<std::string>>& scope) {
  if (!scope) return erase_in(body, nullptr);
  auto names = *scope;
  return erase_in(body, &names);
}

CompiledProgram compile_program(const SurfaceProgram& p) {
  ConPtr root = con::var("main");
  for (auto it = p.modules.rbegin(); it != p.modules.rend(); ++it) {
    root = con::let(it->name.name, compile_module(*it, p), std::move(root));
  }
  CompiledProgram out{root, {}};
  out.boundaries = index_boundaries(root);
  return out;
}

std::vector<Boundary> index_boundaries(const ConPtr& root) {
  std::vector<Boundary> out;
  ConPath path;
  collect(root, path, out);
  return out;
}

}  // namespace gtlc
