#include "gtlc/lowered.hpp"

#include <algorithm>
#include <stdexcept>

namespace gtlc::detail {

std::uint32_t Lowered::party(const std::string& name) {
  auto it = std::find(parties.begin(), parties.end(), name);
  if (it != parties.end()) return static_cast<std::uint32_t>(it - parties.begin());
  parties.push_back(name);
  return static_cast<std::uint32_t>(parties.size() - 1);
}

namespace {

struct Binding {
  std::string name;
  std::uint32_t binder;
};

class Lowerer {
 public:
  explicit Lowerer(Lowered& out) : out_(out) {}

  std::uint32_t walk(const ConExpr& e) {
    const auto id = static_cast<std::uint32_t>(out_.nodes.size());
    out_.nodes.emplace_back();
    LNode n;
    if (auto* v = e.as<con::Var>()) {
      n.op = Op::Var;
      n.var = resolve(v->name);
    } else if (auto* i = e.as<con::IntLit>()) {
      n.op = Op::Int;
      n.integer = &i->value;
    } else if (auto* b = e.as<con::BoolLit>()) {
      n.op = Op::Bool;
      n.boolean = b->value;
    } else if (auto* p = e.as<con::Prim>()) {
      n.op = Op::Prim;
      n.prim = p->op;
    } else if (auto* a = e.as<con::App>()) {
      n.op = Op::App;
      n.kid[0] = walk(*a->fn);
      n.kid[1] = walk(*a->arg);
    } else if (auto* c = e.as<con::If>()) {
      n.op = Op::If;
      n.kid[0] = walk(*c->test);
      n.kid[1] = walk(*c->then_branch);
      n.kid[2] = walk(*c->else_branch);
    } else if (auto* l = e.as<con::Lambda>()) {
      n.op = Op::Lambda;
      scope_.push_back({l->param, id});
      n.kid[0] = walk(*l->body);
      scope_.pop_back();
    } else if (auto* m = e.as<con::Mon>()) {
      n.op = Op::Mon;
      n.contract = &m->contract;
      n.pos = out_.party(m->pos.name);
      n.neg = out_.party(m->neg.name);
      n.kid[0] = walk(*m->body);
    } else if (auto* bl = e.as<con::BlameTerm>()) {
      n.op = Op::Blame;
      n.pos = out_.party(bl->label.blamed.name);
      n.neg = out_.party(bl->label.holder.name);
    } else if (auto* l = e.as<con::Let>()) {
      n.op = Op::Let;
      n.kid[0] = walk(*l->rhs);
      scope_.push_back({l->name, id});
      n.kid[1] = walk(*l->body);
      scope_.pop_back();
    } else if (auto* o = e.as<con::Opaque>()) {
      n.op = Op::Opaque;
      n.scope = visible(o->scope);
    }
    out_.nodes[id] = std::move(n);
    return id;
  }

 private:
  std::optional<Resolved> lookup(const std::string& name) const {
    for (std::size_t i = scope_.size(); i-- > 0;) {
      if (scope_[i].name == name) {
        return Resolved{static_cast<std::uint32_t>(scope_.size() - 1 - i), scope_[i].binder};
      }
    }
    return std::nullopt;
  }

  Resolved resolve(const std::string& name) const {
    if (auto r = lookup(name)) return *r;
    throw std::invalid_argument("free identifier '" + name + "'");
  }

  std::vector<Resolved> visible(const std::optional<std::vector<std::string>>& names) const {
    std::vector<Resolved> out;
    auto add = [&](const std::string& name) {
      auto r = lookup(name);
      if (!r) return;
      for (const auto& seen : out) {
        if (seen.binder == r->binder) return;
      }
      out.push_back(*r);
    };
    if (names) {
      for (const auto& name : *names) add(name);
    } else {
      for (std::size_t i = scope_.size(); i-- > 0;) add(scope_[i].name);
    }
    return out;
  }

  Lowered& out_;
  std::vector<Binding> scope_;
};

}  // namespace

Lowered lower(const ConPtr& e) {
  Lowered out;
  out.source = e;
  Lowerer l(out);
  out.root = l.walk(*e);
  return out;
}

}  // namespace gtlc::detail
