#include "gtlc/optimizer.hpp"

#include <algorithm>
#include <stdexcept>

namespace gtlc {

SurfaceProgram slice_for_module(const SurfaceProgram& p, const Party& target) {
  if (p.find(target) == nullptr) throw std::invalid_argument("unknown module '" + target.name + "'");
  const auto hidden = p.opaque_targets();
  SurfaceProgram out = p;
  for (auto& m : out.modules) {
    const bool keep = m.name == target && std::find(hidden.begin(), hidden.end(), m.name) == hidden.end();
    if (!keep) m.body = surface::opaque(m.body->span);
  }
  return out;
}

Contract copt(const Contract& c, Polarity s) {
  switch (c.kind()) {
    case Contract::Kind::Any:
      return c;
    case Contract::Kind::FlatInt:
    case Contract::Kind::FlatBool:
      return s == Polarity::Pos ? Contract::any() : c;
    case Contract::Kind::Arrow: {
      Contract out = Contract::arrow(copt(c.dom(), flip(s)), copt(c.cod(), s));
      if (s == Polarity::Pos && out.dom().is_any() && out.cod().is_any()) return Contract::any();
      return out;
    }
  }
  return c;
}

namespace {

// Rebuilds `e` bottom-up with `on_mon` and `on_let` applied; unchanged
// subtrees keep their identity so callers can detect a fixpoint by pointer.
template <class OnMon, class OnLet>
ConPtr rewrite(const ConPtr& e, const OnMon& on_mon, const OnLet& on_let) {
  auto go = [&](const ConPtr& c) { return rewrite(c, on_mon, on_let); };
  const ConExpr& x = *e;
  if (auto* a = x.as<con::App>()) {
    auto f = go(a->fn);
    auto g = go(a->arg);
    return f == a->fn && g == a->arg ? e : con::app(std::move(f), std::move(g));
  }
  if (auto* i = x.as<con::If>()) {
    auto t = go(i->test);
    auto y = go(i->then_branch);
    auto n = go(i->else_branch);
    if (t == i->test && y == i->then_branch && n == i->else_branch) return e;
    return con::if_(std::move(t), std::move(y), std::move(n));
  }
  if (auto* l = x.as<con::Lambda>()) {
    auto b = go(l->body);
    return b == l->body ? e : con::lambda(l->param, std::move(b));
  }
  if (auto* m = x.as<con::Mon>()) return on_mon(e, *m, go(m->body));
  if (auto* l = x.as<con::Let>()) return on_let(e, *l, go(l->rhs), go(l->body));
  return e;
}

ConPtr keep_let(const ConPtr& e, const con::Let& l, ConPtr rhs, ConPtr body) {
  if (rhs == l.rhs && body == l.body) return e;
  return con::let(l.name, std::move(rhs), std::move(body));
}

using Pair = std::pair<Party, Party>;

/// The contract `opt` leaves on a monitor with these parties once every
/// pair has been applied until nothing changes.
Contract fold_contract(Contract c, const Party& pos, const Party& neg, const std::vector<Pair>& pairs) {
  for (;;) {
    Contract before = c;
    for (const auto& [x, x2] : pairs) {
      if (pos == x && neg == x2) {
        c = copt(c, Polarity::Pos);
      } else if (pos == x2 && neg == x) {
        c = copt(c, Polarity::Neg);
      }
    }
    if (c == before) return c;
  }
}

}  // namespace

ConPtr opt(const ConPtr& e, const Party& x, const Party& x2) {
  auto on_mon = [&](const ConPtr& self, const con::Mon& m, ConPtr body) -> ConPtr {
    Contract c = m.contract;
    if (m.pos == x && m.neg == x2) {
      c = copt(c, Polarity::Pos);
    } else if (m.pos == x2 && m.neg == x) {
      c = copt(c, Polarity::Neg);
    }
    if (c.is_any()) return body;
    if (c == m.contract && body == m.body) return self;
    return con::mon(m.pos, m.neg, std::move(c), std::move(body));
  };
  return rewrite(e, on_mon, keep_let);
}

ConPtr normalize(const ConPtr& e) {
  auto on_mon = [](const ConPtr& self, const con::Mon& m, ConPtr body) -> ConPtr {
    if (m.contract.is_any()) return body;
    return body == m.body ? self : con::mon(m.pos, m.neg, m.contract, std::move(body));
  };
  auto on_let = [](const ConPtr& self, const con::Let& l, ConPtr rhs, ConPtr body) -> ConPtr {
    if (auto* v = rhs->as<con::Var>(); v && v->name == l.name) return body;
    return keep_let(self, l, std::move(rhs), std::move(body));
  };
  return rewrite(e, on_mon, on_let);
}

Verdict verify_module(const SurfaceProgram& p, const Party& module, std::size_t budget) {
  Verdict v;
  v.module = module;
  const auto hidden = p.opaque_targets();
  if (std::find(hidden.begin(), hidden.end(), module) != hidden.end()) {
    if (p.find(module) == nullptr) throw std::invalid_argument("unknown module '" + module.name + "'");
    v.skipped = true;
    return v;
  }
  const auto start = std::chrono::steady_clock::now();
  const CompiledProgram slice = compile_program(slice_for_module(p, module));
  v.blame = analyze(slice.root, budget);
  v.analysis_time = std::chrono::steady_clock::now() - start;
  v.exhausted = v.blame.exhausted;
  if (v.exhausted) return v;
  for (const auto& m : p.modules) {
    if (m.name != module && !v.blame.labels.count(BlameLabel{module, m.name})) v.safe_against.insert(m.name);
  }
  return v;
}

const char* to_string(Disposition::Kind k) {
  switch (k) {
    case Disposition::Kind::Kept: return "kept";
    case Disposition::Kind::Weakened: return "weakened";
    case Disposition::Kind::Removed: return "removed";
  }
  return "";
}

std::size_t OptimizationReport::count(Disposition::Kind k) const {
  return static_cast<std::size_t>(
      std::count_if(boundaries.begin(), boundaries.end(), [&](const Disposition& d) { return d.kind == k; }));
}

Optimized optimize_program(const SurfaceProgram& p, const OptimizeOptions& options) {
  Optimized out;
  auto& report = out.report;
  std::vector<Pair> pairs;
  for (const auto& m : p.modules) {
    Verdict v;
    if (options.trust_typed && m.typed()) {
      v.module = m.name;
      v.trusted = true;
      for (const auto& other : p.modules) {
        if (other.name != m.name) v.safe_against.insert(other.name);
      }
    } else {
      v = verify_module(p, m.name, options.budget);
    }
    for (const auto& x2 : v.safe_against) pairs.emplace_back(v.module, x2);
    report.verdicts.push_back(std::move(v));
  }

  const CompiledProgram original = compile_program(p);
  ConPtr root = original.root;
  for (;;) {
    const ConPtr before = root;
    for (const auto& [x, x2] : pairs) root = opt(root, x, x2);
    if (root == before) break;
  }
  root = normalize(root);

  report.monitors_before = original.boundaries.size();
  for (const auto& b : original.boundaries) {
    Disposition d{b, Disposition::Kind::Kept, fold_contract(b.contract, b.pos, b.neg, pairs)};
    if (d.after.is_any()) {
      d.kind = Disposition::Kind::Removed;
    } else if (!(d.after == b.contract)) {
      d.kind = Disposition::Kind::Weakened;
    }
    report.boundaries.push_back(std::move(d));
  }
  out.program = CompiledProgram{root, index_boundaries(root)};
  report.monitors_after = out.program.boundaries.size();
  return out;
}

}  // namespace gtlc
