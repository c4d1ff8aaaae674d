#include "gtlc/ast.hpp"

#include <algorithm>
#include <stdexcept>

namespace gtlc {

namespace surface {

namespace {
SurfacePtr make(SurfaceExpr::Node node, Span span) {
  return std::make_shared<const SurfaceExpr>(SurfaceExpr{std::move(node), span});
}
}  // namespace

SurfacePtr var(std::string name, Span span) { return make(Var{std::move(name)}, span); }
SurfacePtr integer(Integer value, Span span) { return make(IntLit{std::move(value)}, span); }
SurfacePtr boolean(bool value, Span span) { return make(BoolLit{value}, span); }
SurfacePtr prim(Primitive op, Span span) { return make(Prim{op}, span); }
SurfacePtr app(SurfacePtr fn, SurfacePtr arg, Span span) { return make(App{std::move(fn), std::move(arg)}, span); }
SurfacePtr if_(SurfacePtr test, SurfacePtr then_branch, SurfacePtr else_branch, Span span) {
  return make(If{std::move(test), std::move(then_branch), std::move(else_branch)}, span);
}
SurfacePtr lambda(std::string param, std::optional<Ty> annotation, SurfacePtr body, Span span) {
  return make(Lambda{std::move(param), std::move(annotation), std::move(body)}, span);
}
SurfacePtr opaque(Span span) { return make(Opaque{}, span); }

}  // namespace surface

const SurfaceModule* SurfaceProgram::find(const Party& name) const {
  for (const auto& m : modules) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

std::vector<Party> SurfaceProgram::opaque_targets() const {
  std::vector<Party> out;
  for (const auto& m : modules) {
    for (const auto& r : m.imports) {
      if (r.opaque && std::find(out.begin(), out.end(), r.target) == out.end()) out.push_back(r.target);
    }
  }
  return out;
}

namespace con {

namespace {
ConPtr make(ConExpr::Node node) { return std::make_shared<const ConExpr>(ConExpr{std::move(node)}); }
}  // namespace

ConPtr var(std::string name) { return make(Var{std::move(name)}); }
ConPtr integer(Integer value) { return make(IntLit{std::move(value)}); }
ConPtr boolean(bool value) { return make(BoolLit{value}); }
ConPtr prim(Primitive op) { return make(Prim{op}); }
ConPtr app(ConPtr fn, ConPtr arg) { return make(App{std::move(fn), std::move(arg)}); }
ConPtr if_(ConPtr test, ConPtr then_branch, ConPtr else_branch) {
  return make(If{std::move(test), std::move(then_branch), std::move(else_branch)});
}
ConPtr lambda(std::string param, ConPtr body) { return make(Lambda{std::move(param), std::move(body)}); }
ConPtr mon(Party pos, Party neg, Contract contract, ConPtr body) {
  return make(Mon{std::move(pos), std::move(neg), std::move(contract), std::move(body)});
}
ConPtr blame(BlameLabel label) { return make(BlameTerm{std::move(label)}); }
ConPtr let(std::string name, ConPtr rhs, ConPtr body) {
  return make(Let{std::move(name), std::move(rhs), std::move(body)});
}
ConPtr opaque(std::optional<std::vector<std::string>> scope) { return make(Opaque{std::move(scope)}); }

}  // namespace con

std::vector<ConPtr> children(const ConExpr& e) {
  if (auto* a = e.as<con::App>()) return {a->fn, a->arg};
  if (auto* i = e.as<con::If>()) return {i->test, i->then_branch, i->else_branch};
  if (auto* l = e.as<con::Lambda>()) return {l->body};
  if (auto* m = e.as<con::Mon>()) return {m->body};
  if (auto* l = e.as<con::Let>()) return {l->rhs, l->body};
  return {};
}

const ConExpr& at_path(const ConExpr& root, const ConPath& path) {
  const ConExpr* cur = &root;
  for (int step : path) {
    auto kids = children(*cur);
    if (step < 0 || static_cast<std::size_t>(step) >= kids.size()) throw std::out_of_range("at_path: bad path");
    cur = kids[static_cast<std::size_t>(step)].get();
  }
  return *cur;
}

namespace {

ConPtr replace_rec(const ConPtr& node, const ConPath& path, std::size_t depth, ConPtr replacement) {
  if (depth == path.size()) return replacement;
  const int step = path[depth];
  auto sub = [&](const ConPtr& child) { return replace_rec(child, path, depth + 1, replacement); };
  const ConExpr& e = *node;
  if (auto* a = e.as<con::App>()) {
    if (step == 0) return con::app(sub(a->fn), a->arg);
    if (step == 1) return con::app(a->fn, sub(a->arg));
  } else if (auto* i = e.as<con::If>()) {
    if (step == 0) return con::if_(sub(i->test), i->then_branch, i->else_branch);
    if (step == 1) return con::if_(i->test, sub(i->then_branch), i->else_branch);
    if (step == 2) return con::if_(i->test, i->then_branch, sub(i->else_branch));
  } else if (auto* l = e.as<con::Lambda>()) {
    if (step == 0) return con::lambda(l->param, sub(l->body));
  } else if (auto* m = e.as<con::Mon>()) {
    if (step == 0) return con::mon(m->pos, m->neg, m->contract, sub(m->body));
  } else if (auto* l = e.as<con::Let>()) {
    if (step == 0) return con::let(l->name, sub(l->rhs), l->body);
    if (step == 1) return con::let(l->name, l->rhs, sub(l->body));
  }
  throw std::out_of_range("replace_at: bad path");
}

// Binder stacks pair up identifiers bound at the same depth on each side.
struct AlphaCompare {
  std::vector<std::string> left;
  std::vector<std::string> right;

  static std::ptrdiff_t lookup(const std::vector<std::string>& stack, const std::string& name) {
    for (std::size_t i = stack.size(); i-- > 0;) {
      if (stack[i] == name) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
  }

  bool under(const std::string& x, const std::string& y, const ConExpr& a, const ConExpr& b) {
    left.push_back(x);
    right.push_back(y);
    const bool eq = same(a, b);
    left.pop_back();
    right.pop_back();
    return eq;
  }

  bool same(const ConExpr& a, const ConExpr& b) {
    if (a.node.index() != b.node.index()) return false;
    if (auto* x = a.as<con::Var>()) {
      auto* y = b.as<con::Var>();
      const auto i = lookup(left, x->name);
      const auto j = lookup(right, y->name);
      if (i < 0 && j < 0) return x->name == y->name;
      return i == j;
    }
    if (auto* x = a.as<con::IntLit>()) return x->value == b.as<con::IntLit>()->value;
    if (auto* x = a.as<con::BoolLit>()) return x->value == b.as<con::BoolLit>()->value;
    if (auto* x = a.as<con::Prim>()) return x->op == b.as<con::Prim>()->op;
    if (auto* x = a.as<con::App>()) {
      auto* y = b.as<con::App>();
      return same(*x->fn, *y->fn) && same(*x->arg, *y->arg);
    }
    if (auto* x = a.as<con::If>()) {
      auto* y = b.as<con::If>();
      return same(*x->test, *y->test) && same(*x->then_branch, *y->then_branch) &&
             same(*x->else_branch, *y->else_branch);
    }
    if (auto* x = a.as<con::Lambda>()) {
      auto* y = b.as<con::Lambda>();
      return under(x->param, y->param, *x->body, *y->body);
    }
    if (auto* x = a.as<con::Mon>()) {
      auto* y = b.as<con::Mon>();
      return x->pos == y->pos && x->neg == y->neg && x->contract == y->contract && same(*x->body, *y->body);
    }
    if (auto* x = a.as<con::BlameTerm>()) return x->label == b.as<con::BlameTerm>()->label;
    if (auto* x = a.as<con::Let>()) {
      auto* y = b.as<con::Let>();
      return same(*x->rhs, *y->rhs) && under(x->name, y->name, *x->body, *y->body);
    }
    return true;  // Opaque
  }
};

}  // namespace

ConPtr replace_at(const ConPtr& root, const ConPath& path, ConPtr replacement) {
  return replace_rec(root, path, 0, std::move(replacement));
}

bool structurally_equal(const ConExpr& a, const ConExpr& b) {
  AlphaCompare cmp;
  return cmp.same(a, b);
}

bool structurally_equal(const SurfaceExpr& a, const SurfaceExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto* x = a.as<surface::Var>()) return x->name == b.as<surface::Var>()->name;
  if (auto* x = a.as<surface::IntLit>()) return x->value == b.as<surface::IntLit>()->value;
  if (auto* x = a.as<surface::BoolLit>()) return x->value == b.as<surface::BoolLit>()->value;
  if (auto* x = a.as<surface::Prim>()) return x->op == b.as<surface::Prim>()->op;
  if (auto* x = a.as<surface::App>()) {
    auto* y = b.as<surface::App>();
    return structurally_equal(*x->fn, *y->fn) && structurally_equal(*x->arg, *y->arg);
  }
  if (auto* x = a.as<surface::If>()) {
    auto* y = b.as<surface::If>();
    return structurally_equal(*x->test, *y->test) && structurally_equal(*x->then_branch, *y->then_branch) &&
           structurally_equal(*x->else_branch, *y->else_branch);
  }
  if (auto* x = a.as<surface::Lambda>()) {
    auto* y = b.as<surface::Lambda>();
    return x->param == y->param && x->annotation == y->annotation && structurally_equal(*x->body, *y->body);
  }
  return true;  // Opaque
}

bool structurally_equal(const SurfaceProgram& a, const SurfaceProgram& b) {
  if (a.modules.size() != b.modules.size()) return false;
  for (std::size_t i = 0; i < a.modules.size(); ++i) {
    const auto& m = a.modules[i];
    const auto& n = b.modules[i];
    if (m.name != n.name || m.annotation != n.annotation || m.imports.size() != n.imports.size()) return false;
    for (std::size_t j = 0; j < m.imports.size(); ++j) {
      const auto& r = m.imports[j];
      const auto& s = n.imports[j];
      if (r.kind != s.kind || r.target != s.target || r.annotation != s.annotation || r.opaque != s.opaque) {
        return false;
      }
    }
    if (!structurally_equal(*m.body, *n.body)) return false;
  }
  return true;
}

std::size_t count_monitors(const ConExpr& e) {
  std::size_t n = e.as<con::Mon>() ? 1 : 0;
  for (const auto& c : children(e)) n += count_monitors(*c);
  return n;
}

}  // namespace gtlc
