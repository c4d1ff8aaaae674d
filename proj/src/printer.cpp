#include "gtlc/printer.hpp"

#include <sstream>

namespace gtlc {

std::string to_string(const Ty& t) {
  switch (t.kind()) {
    case Ty::Kind::Int: return "Int";
    case Ty::Kind::Bool: return "Bool";
    case Ty::Kind::Arrow: return "(-> " + to_string(t.dom()) + " " + to_string(t.cod()) + ")";
  }
  return {};
}

std::string to_string(const Contract& c) {
  switch (c.kind()) {
    case Contract::Kind::FlatInt: return "int?";
    case Contract::Kind::FlatBool: return "bool?";
    case Contract::Kind::Any: return "any/c";
    case Contract::Kind::Arrow: return "(-> " + to_string(c.dom()) + " " + to_string(c.cod()) + ")";
  }
  return {};
}

std::string to_string(Primitive p) { return p == Primitive::IsInt ? "int?" : "bool?"; }

std::string to_string(const BlameLabel& l) { return "(blame " + l.blamed.name + " " + l.holder.name + ")"; }

std::string print(const SurfaceExpr& e) {
  if (auto* v = e.as<surface::Var>()) return v->name;
  if (auto* i = e.as<surface::IntLit>()) return i->value.str();
  if (auto* b = e.as<surface::BoolLit>()) return b->value ? "#t" : "#f";
  if (auto* p = e.as<surface::Prim>()) return to_string(p->op);
  if (auto* a = e.as<surface::App>()) return "(" + print(*a->fn) + " " + print(*a->arg) + ")";
  if (auto* i = e.as<surface::If>()) {
    return "(if " + print(*i->test) + " " + print(*i->then_branch) + " " + print(*i->else_branch) + ")";
  }
  if (auto* l = e.as<surface::Lambda>()) {
    std::string binder = l->annotation ? l->param + " : " + to_string(*l->annotation) : l->param;
    return "(λ (" + binder + ") " + print(*l->body) + ")";
  }
  return "opaque";
}

namespace {

std::string print_require(const Require& r) {
  std::string head;
  if (r.opaque) {
    head = "opaque-require";
  } else {
    head = r.kind == Require::Kind::Typed ? "require/typed" : "require";
  }
  std::string out = "(" + head + " " + r.target.name;
  if (r.annotation) out += " " + to_string(*r.annotation);
  return out + ")";
}

}  // namespace

std::string print(const SurfaceModule& m) {
  std::string out = "(module " + m.name.name;
  if (m.annotation) out += " " + to_string(*m.annotation);
  for (const auto& r : m.imports) out += " " + print_require(r);
  return out + " " + print(*m.body) + ")";
}

std::string print(const SurfaceProgram& p) {
  std::string out;
  for (const auto& m : p.modules) out += print(m) + "\n";
  return out;
}

std::string print(const ConExpr& e) {
  if (auto* v = e.as<con::Var>()) return v->name;
  if (auto* i = e.as<con::IntLit>()) return i->value.str();
  if (auto* b = e.as<con::BoolLit>()) return b->value ? "#t" : "#f";
  if (auto* p = e.as<con::Prim>()) return to_string(p->op);
  if (auto* a = e.as<con::App>()) return "(" + print(*a->fn) + " " + print(*a->arg) + ")";
  if (auto* i = e.as<con::If>()) {
    return "(if " + print(*i->test) + " " + print(*i->then_branch) + " " + print(*i->else_branch) + ")";
  }
  if (auto* l = e.as<con::Lambda>()) return "(λ (" + l->param + ") " + print(*l->body) + ")";
  if (auto* m = e.as<con::Mon>()) {
    return "(mon (" + m->pos.name + " " + m->neg.name + ") " + to_string(m->contract) + " " + print(*m->body) + ")";
  }
  if (auto* b = e.as<con::BlameTerm>()) return to_string(b->label);
  if (auto* l = e.as<con::Let>()) return "(let [" + l->name + " " + print(*l->rhs) + "] " + print(*l->body) + ")";
  return "opaque";
}

namespace {

// Display width counts code points so `λ` is one column.
std::size_t columns(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

void layout(const ConExpr& e, std::size_t indent, std::size_t width, std::ostringstream& out) {
  const std::string flat = print(e);
  if (indent + columns(flat) <= width) {
    out << flat;
    return;
  }
  const std::string pad(indent + 2, ' ');
  if (auto* l = e.as<con::Let>()) {
    out << "(let [" << l->name << " ";
    layout(*l->rhs, indent + 7 + l->name.size(), width, out);
    out << "]\n" << pad;
    layout(*l->body, indent + 2, width, out);
    out << ")";
  } else if (auto* f = e.as<con::Lambda>()) {
    out << "(λ (" << f->param << ")\n" << pad;
    layout(*f->body, indent + 2, width, out);
    out << ")";
  } else if (auto* m = e.as<con::Mon>()) {
    out << "(mon (" << m->pos.name << " " << m->neg.name << ") " << to_string(m->contract) << "\n" << pad;
    layout(*m->body, indent + 2, width, out);
    out << ")";
  } else if (auto* a = e.as<con::App>()) {
    out << "(";
    layout(*a->fn, indent + 1, width, out);
    out << "\n" << pad;
    layout(*a->arg, indent + 2, width, out);
    out << ")";
  } else if (auto* i = e.as<con::If>()) {
    out << "(if ";
    layout(*i->test, indent + 4, width, out);
    out << "\n" << pad;
    layout(*i->then_branch, indent + 2, width, out);
    out << "\n" << pad;
    layout(*i->else_branch, indent + 2, width, out);
    out << ")";
  } else {
    out << flat;
  }
}

}  // namespace

std::string pretty(const ConExpr& e, std::size_t width) {
  std::ostringstream out;
  layout(e, 0, width, out);
  return out.str();
}

}  // namespace gtlc
