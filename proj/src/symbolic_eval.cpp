#include "gtlc/symbolic_eval.hpp"

#include <bit>
#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "gtlc/lowered.hpp"
#include "gtlc/printer.hpp"

namespace gtlc {

namespace {

constexpr std::uint8_t bit(Refinement r) { return static_cast<std::uint8_t>(r); }
constexpr std::uint8_t kPositive = 0b000111;
constexpr std::uint8_t kNegative = 0b111000;

std::uint8_t positive_of(Predicate p) {
  switch (p) {
    case Predicate::IsInt: return bit(Refinement::IsInt);
    case Predicate::IsBool: return bit(Refinement::IsBool);
    case Predicate::IsFn: return bit(Refinement::IsFn);
  }
  return 0;
}

}  // namespace

bool Refinements::may_be_int() const noexcept {
  return !has(Refinement::NotInt) && !has(Refinement::IsBool) && !has(Refinement::IsFn);
}
bool Refinements::may_be_bool() const noexcept {
  return !has(Refinement::NotBool) && !has(Refinement::IsInt) && !has(Refinement::IsFn);
}
bool Refinements::may_be_fn() const noexcept {
  return !has(Refinement::NotFn) && !has(Refinement::IsInt) && !has(Refinement::IsBool);
}

std::string to_string(Refinements r) {
  static constexpr std::pair<Refinement, const char*> kNames[] = {
      {Refinement::IsInt, "is-int"},   {Refinement::IsBool, "is-bool"},   {Refinement::IsFn, "is-fn"},
      {Refinement::NotInt, "not-int"}, {Refinement::NotBool, "not-bool"}, {Refinement::NotFn, "not-fn"},
  };
  std::string out = "{";
  for (const auto& [flag, name] : kNames) {
    if (!r.has(flag)) continue;
    if (out.size() > 1) out += ' ';
    out += name;
  }
  return out + "}";
}

std::optional<Refinements> refine(Refinements o, Predicate p, bool outcome) {
  const std::uint8_t pos = positive_of(p);
  std::uint8_t bits = o.bits | (outcome ? pos : static_cast<std::uint8_t>(pos << 3));
  const std::uint8_t is = bits & kPositive;
  const std::uint8_t isnt = (bits & kNegative) >> 3;
  if (std::popcount(is) > 1 || (is & isnt) != 0) return std::nullopt;
  if (is != 0) return Refinements{is};
  switch (std::popcount(isnt)) {
    case 3: return std::nullopt;
    case 2: return Refinements{static_cast<std::uint8_t>(kPositive & ~isnt)};
    default: return Refinements{bits};
  }
}

namespace symbolic {

namespace {

using detail::LNode;
using detail::Lowered;
using detail::Op;

inline std::uint64_t pack(const AbsValue& v) {
  return (static_cast<std::uint64_t>(v.tag) << 61) | (static_cast<std::uint64_t>(v.a) << 29) | v.b;
}

inline void mix(std::size_t& h, std::uint64_t x) {
  h ^= std::hash<std::uint64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

struct StateHash {
  std::size_t operator()(const State& s) const {
    std::size_t h = static_cast<std::size_t>(s.mode);
    mix(h, (static_cast<std::uint64_t>(s.node) << 32) | s.env);
    mix(h, pack(s.value));
    mix(h, pack(s.arg));
    mix(h, s.kont);
    return h;
  }
};

struct Frame {
  enum class Kind : std::uint8_t { EvalArg, Call, Branch, Bind, Check, CallInner, Havoc };
  Kind kind = Kind::Havoc;
  std::uint32_t node = 0;  // EvalArg: argument; Branch, Bind: the If or Let node
  std::uint32_t env = 0;
  AbsValue value;          // Call: operator
  std::uint32_t check = 0; // Check: monitor id; CallInner: guard id

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct Edge {
  Frame frame;
  std::uint32_t parent;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const {
    std::size_t h = static_cast<std::size_t>(e.frame.kind);
    mix(h, (static_cast<std::uint64_t>(e.frame.node) << 32) | e.frame.env);
    mix(h, pack(e.frame.value));
    mix(h, (static_cast<std::uint64_t>(e.frame.check) << 32) | e.parent);
    return h;
  }
};

/// A monitor site: contract, parties, and the source Mon it descends from.
struct Check {
  const Contract* contract;
  std::uint32_t pos;
  std::uint32_t neg;
  std::uint32_t site;

  friend bool operator<(const Check& a, const Check& b) {
    return std::tie(a.contract, a.pos, a.neg, a.site) < std::tie(b.contract, b.pos, b.neg, b.site);
  }
};

enum class AddrKind : std::uint64_t { Binder, Refined, Guard, Havoc };
enum class KKind : std::uint64_t { Halt, Expr, GuardRange, GuardInner, Havoc };

inline std::uint64_t key3(std::uint64_t kind, std::uint32_t a, std::uint32_t b) {
  return (kind << 60) | (static_cast<std::uint64_t>(a) << 30) | b;
}

constexpr std::uint32_t kNoState = ~std::uint32_t{0};
constexpr std::uint32_t kHalt = 0;
constexpr std::uint32_t kHavocK = 1;

struct Cell {
  std::vector<AbsValue> values;
  std::unordered_set<std::uint64_t> members;
  std::vector<std::uint32_t> readers;
  std::unordered_set<std::uint32_t> reader_set;
};

struct KCell {
  std::vector<Edge> edges;
  std::unordered_set<Edge, EdgeHash> members;
  std::vector<std::uint32_t> readers;
  std::unordered_set<std::uint32_t> reader_set;
};

using EnvMap = std::vector<std::pair<std::uint32_t, std::uint32_t>>;  // binder -> address, sorted

}  // namespace

struct Machine::Impl {
  Lowered prog;
  std::size_t cap;

  std::vector<Cell> store;
  std::unordered_map<std::uint64_t, std::uint32_t> addr_ids;
  std::vector<KCell> kstore;
  std::unordered_map<std::uint64_t, std::uint32_t> kaddr_ids;
  std::vector<EnvMap> envs;
  std::map<EnvMap, std::uint32_t> env_ids;
  std::vector<Check> checks;
  std::map<Check, std::uint32_t> check_ids;
  std::vector<const Integer*> literals;
  std::map<std::string, std::uint32_t> literal_ids;

  std::vector<State> states;
  std::unordered_map<State, std::uint32_t, StateHash> state_ids;
  std::deque<std::uint32_t> work;
  std::vector<char> queued;
  std::uint32_t current = kNoState;

  std::vector<AbsValue> halted;
  std::unordered_set<std::uint64_t> halted_set;
  std::uint32_t havoc_addr;

  Step* out = nullptr;

  Impl(const ConPtr& e, std::size_t state_cap) : prog(detail::lower(e)), cap(state_cap) {
    envs.emplace_back();
    env_ids.emplace(EnvMap{}, 0);
    kaddr(KKind::Halt, 0, 0);
    kaddr(KKind::Havoc, 0, 0);
    kstore[kHavocK].edges.push_back(Edge{Frame{}, kHalt});
    kstore[kHavocK].members.insert(kstore[kHavocK].edges.back());
    havoc_addr = addr(AddrKind::Havoc, 0, 0);
  }

  // ---- interning

  std::uint32_t addr(AddrKind k, std::uint32_t a, std::uint32_t b) {
    auto [it, fresh] = addr_ids.emplace(key3(static_cast<std::uint64_t>(k), a, b), store.size());
    if (fresh) store.emplace_back();
    return it->second;
  }

  std::uint32_t kaddr(KKind k, std::uint32_t a, std::uint32_t b) {
    auto [it, fresh] = kaddr_ids.emplace(key3(static_cast<std::uint64_t>(k), a, b), kstore.size());
    if (fresh) kstore.emplace_back();
    return it->second;
  }

  std::uint32_t env_id(EnvMap m) {
    auto [it, fresh] = env_ids.emplace(m, envs.size());
    if (fresh) envs.push_back(std::move(m));
    return it->second;
  }

  std::uint32_t check_id(const Contract* c, std::uint32_t pos, std::uint32_t neg, std::uint32_t site) {
    Check k{c, pos, neg, site};
    auto [it, fresh] = check_ids.emplace(k, checks.size());
    if (fresh) checks.push_back(k);
    return it->second;
  }

  AbsValue literal(const Integer& i) {
    auto [it, fresh] = literal_ids.emplace(i.str(), literals.size());
    if (fresh) literals.push_back(&i);
    return AbsValue{AbsValue::Tag::Const, it->second, 0};
  }

  // ---- environments

  std::uint32_t lookup(std::uint32_t env, std::uint32_t binder) {
    for (const auto& [b, a] : envs[env]) {
      if (b == binder) return a;
    }
    return addr(AddrKind::Binder, binder, 0);
  }

  std::uint32_t with(std::uint32_t env, std::uint32_t binder, std::uint32_t a) {
    EnvMap m = envs[env];
    auto it = std::lower_bound(m.begin(), m.end(), std::make_pair(binder, std::uint32_t{0}));
    if (it != m.end() && it->first == binder) {
      it->second = a;
    } else {
      m.insert(it, {binder, a});
    }
    return env_id(std::move(m));
  }

  std::uint32_t without(std::uint32_t env, std::uint32_t binder) {
    const EnvMap& cur = envs[env];
    auto it = std::find_if(cur.begin(), cur.end(), [&](const auto& p) { return p.first == binder; });
    if (it == cur.end()) return env;
    EnvMap m = cur;
    m.erase(m.begin() + (it - cur.begin()));
    return env_id(std::move(m));
  }

  // ---- store with dependency tracking

  const std::vector<AbsValue>& read(std::uint32_t a) {
    Cell& c = store[a];
    if (current != kNoState && c.reader_set.insert(current).second) c.readers.push_back(current);
    return store[a].values;
  }

  bool write(std::uint32_t a, const AbsValue& v) {
    Cell& c = store[a];
    if (!c.members.insert(pack(v)).second) return false;
    c.values.push_back(v);
    for (auto r : c.readers) requeue(r);
    return true;
  }

  std::vector<Edge> edges(std::uint32_t k) {
    KCell& c = kstore[k];
    if (current != kNoState && c.reader_set.insert(current).second) c.readers.push_back(current);
    return c.edges;
  }

  void push(std::uint32_t k, const Frame& f, std::uint32_t parent) {
    KCell& c = kstore[k];
    Edge e{f, parent};
    if (!c.members.insert(e).second) return;
    c.edges.push_back(e);
    for (auto r : c.readers) requeue(r);
  }

  void requeue(std::uint32_t s) {
    if (!queued[s]) {
      queued[s] = 1;
      work.push_back(s);
    }
  }

  // ---- transitions

  void emit(State s) { out->next.push_back(s); }
  void eval(std::uint32_t node, std::uint32_t env, std::uint32_t k) { emit(State{State::Mode::Eval, node, env, {}, {}, k}); }
  void ret(const AbsValue& v, std::uint32_t k) { emit(State{State::Mode::Return, 0, 0, v, {}, k}); }
  void apply(const AbsValue& f, const AbsValue& a, std::uint32_t k) {
    emit(State{State::Mode::Apply, 0, 0, f, a, k});
  }
  void blame(std::uint32_t blamed, std::uint32_t holder) {
    out->blames.push_back(BlameLabel{Party{prog.parties[blamed]}, Party{prog.parties[holder]}});
  }

  void escape(const AbsValue& v) {
    if (v.tag == AbsValue::Tag::Opaque || v.tag == AbsValue::Tag::Const || v.tag == AbsValue::Tag::Bool) return;
    if (write(havoc_addr, v)) emit(State{State::Mode::Havoc, 0, 0, v, {}, kHalt});
  }

  /// Possible outcomes of `p(v)`, with `v` narrowed on each.
  static std::vector<std::pair<bool, AbsValue>> test(Predicate p, const AbsValue& v) {
    switch (v.tag) {
      case AbsValue::Tag::Opaque: {
        std::vector<std::pair<bool, AbsValue>> outs;
        for (bool outcome : {true, false}) {
          if (auto r = refine(v.refinements(), p, outcome)) outs.emplace_back(outcome, AbsValue::opaque(*r));
        }
        return outs;
      }
      case AbsValue::Tag::Const: return {{p == Predicate::IsInt, v}};
      case AbsValue::Tag::Bool: return {{p == Predicate::IsBool, v}};
      default: return {{p == Predicate::IsFn, v}};
    }
  }

  static Predicate predicate_of(Primitive p) { return p == Primitive::IsInt ? Predicate::IsInt : Predicate::IsBool; }

  void monitor(std::uint32_t cid, const AbsValue& v, std::uint32_t k) {
    const Check c = checks[cid];
    switch (c.contract->kind()) {
      case Contract::Kind::Any:
        ret(v, k);
        return;
      case Contract::Kind::FlatInt:
      case Contract::Kind::FlatBool: {
        const auto p = c.contract->kind() == Contract::Kind::FlatInt ? Predicate::IsInt : Predicate::IsBool;
        for (const auto& [ok, narrowed] : test(p, v)) {
          if (ok) {
            ret(narrowed, k);
          } else {
            blame(c.pos, c.neg);
          }
        }
        return;
      }
      case Contract::Kind::Arrow:
        for (const auto& [ok, narrowed] : test(Predicate::IsFn, v)) {
          if (ok) {
            write(addr(AddrKind::Guard, cid, 0), narrowed);
            ret(AbsValue{AbsValue::Tag::Guarded, cid, 0}, k);
          } else {
            blame(c.pos, c.neg);
          }
        }
        return;
    }
  }

  void step_eval(const State& s) {
    const LNode& n = prog.nodes[s.node];
    switch (n.op) {
      case Op::Var:
        for (const auto& v : read(lookup(s.env, n.var.binder))) ret(v, s.kont);
        return;
      case Op::Int:
        ret(literal(*n.integer), s.kont);
        return;
      case Op::Bool:
        ret(AbsValue{AbsValue::Tag::Bool, n.boolean ? 1u : 0u, 0}, s.kont);
        return;
      case Op::Prim:
        ret(AbsValue{AbsValue::Tag::Prim, static_cast<std::uint32_t>(n.prim), 0}, s.kont);
        return;
      case Op::Lambda:
        ret(AbsValue{AbsValue::Tag::Closure, s.node, s.env}, s.kont);
        return;
      case Op::App: {
        const auto k = kaddr(KKind::Expr, n.kid[0], s.env);
        push(k, Frame{Frame::Kind::EvalArg, n.kid[1], s.env, {}, 0}, s.kont);
        eval(n.kid[0], s.env, k);
        return;
      }
      case Op::If: {
        if (refine_branches(s)) return;
        const auto k = kaddr(KKind::Expr, n.kid[0], s.env);
        push(k, Frame{Frame::Kind::Branch, s.node, s.env, {}, 0}, s.kont);
        eval(n.kid[0], s.env, k);
        return;
      }
      case Op::Let: {
        const auto k = kaddr(KKind::Expr, n.kid[0], s.env);
        push(k, Frame{Frame::Kind::Bind, s.node, s.env, {}, 0}, s.kont);
        eval(n.kid[0], s.env, k);
        return;
      }
      case Op::Mon: {
        const auto k = kaddr(KKind::Expr, n.kid[0], s.env);
        push(k, Frame{Frame::Kind::Check, 0, 0, {}, check_id(n.contract, n.pos, n.neg, s.node)}, s.kont);
        eval(n.kid[0], s.env, k);
        return;
      }
      case Op::Blame:
        blame(n.pos, n.neg);
        return;
      case Op::Opaque:
        for (const auto& r : n.scope) {
          const auto values = read(lookup(s.env, r.binder));
          for (const auto& v : values) escape(v);
        }
        ret(AbsValue::opaque(), s.kont);
        return;
    }
  }

  // `(if (p x) a b)`: each branch sees x narrowed by the test's outcome.
  bool refine_branches(const State& s) {
    const LNode& n = prog.nodes[s.node];
    const LNode& t = prog.nodes[n.kid[0]];
    if (t.op != Op::App) return false;
    const LNode& f = prog.nodes[t.kid[0]];
    const LNode& x = prog.nodes[t.kid[1]];
    if (f.op != Op::Prim || x.op != Op::Var) return false;
    const auto values = read(lookup(s.env, x.var.binder));
    bool reach[2] = {false, false};
    const std::uint32_t branch_addr[2] = {addr(AddrKind::Refined, s.node, 0), addr(AddrKind::Refined, s.node, 1)};
    for (const auto& v : values) {
      for (const auto& [outcome, narrowed] : test(predicate_of(f.prim), v)) {
        reach[outcome] = true;
        write(branch_addr[outcome], narrowed);
      }
    }
    for (int outcome : {1, 0}) {
      if (!reach[outcome]) continue;
      eval(outcome ? n.kid[1] : n.kid[2], with(s.env, x.var.binder, branch_addr[outcome]), s.kont);
    }
    return true;
  }

  void step_apply(const State& s) {
    const AbsValue& f = s.value;
    switch (f.tag) {
      case AbsValue::Tag::Closure: {
        const LNode& lam = prog.nodes[f.a];
        write(addr(AddrKind::Binder, f.a, 0), s.arg);
        eval(lam.kid[0], without(f.b, f.a), s.kont);
        return;
      }
      case AbsValue::Tag::Prim:
        for (const auto& [outcome, narrowed] : test(predicate_of(static_cast<Primitive>(f.a)), s.arg)) {
          (void)narrowed;
          ret(AbsValue{AbsValue::Tag::Bool, outcome ? 1u : 0u, 0}, s.kont);
        }
        return;
      case AbsValue::Tag::Guarded: {
        const Check g = checks[f.a];
        const auto dom = check_id(&g.contract->dom(), g.neg, g.pos, g.site);
        const auto rng = check_id(&g.contract->cod(), g.pos, g.neg, g.site);
        const auto k_rng = kaddr(KKind::GuardRange, f.a, 0);
        const auto k_inner = kaddr(KKind::GuardInner, f.a, 0);
        push(k_rng, Frame{Frame::Kind::Check, 0, 0, {}, rng}, s.kont);
        push(k_inner, Frame{Frame::Kind::CallInner, 0, 0, {}, f.a}, k_rng);
        monitor(dom, s.arg, k_inner);
        return;
      }
      case AbsValue::Tag::Opaque:
        if (!f.refinements().may_be_fn()) return;
        escape(s.arg);
        ret(AbsValue::opaque(), s.kont);
        return;
      default:
        return;  // stuck
    }
  }

  void step_return(const State& s) {
    if (s.kont == kHalt) {
      if (halted_set.insert(pack(s.value)).second) halted.push_back(s.value);
      return;
    }
    for (const auto& [frame, parent] : edges(s.kont)) {
      switch (frame.kind) {
        case Frame::Kind::EvalArg: {
          const auto k = kaddr(KKind::Expr, frame.node, frame.env);
          push(k, Frame{Frame::Kind::Call, 0, 0, s.value, 0}, parent);
          eval(frame.node, frame.env, k);
          break;
        }
        case Frame::Kind::Call:
          apply(frame.value, s.value, parent);
          break;
        case Frame::Kind::Branch: {
          const LNode& n = prog.nodes[frame.node];
          const AbsValue& v = s.value;
          if (v.tag == AbsValue::Tag::Bool) {
            eval(v.a ? n.kid[1] : n.kid[2], frame.env, parent);
          } else if (v.is_opaque() && v.refinements().may_be_bool()) {
            eval(n.kid[1], frame.env, parent);
            eval(n.kid[2], frame.env, parent);
          }
          break;
        }
        case Frame::Kind::Bind:
          write(addr(AddrKind::Binder, frame.node, 0), s.value);
          eval(prog.nodes[frame.node].kid[1], without(frame.env, frame.node), parent);
          break;
        case Frame::Kind::Check:
          monitor(frame.check, s.value, parent);
          break;
        case Frame::Kind::CallInner: {
          const auto inner = read(addr(AddrKind::Guard, frame.check, 0));
          for (const auto& f : inner) apply(f, s.value, parent);
          break;
        }
        case Frame::Kind::Havoc:
          escape(s.value);
          break;
      }
    }
  }

  void step_havoc(const State& s) {
    switch (s.value.tag) {
      case AbsValue::Tag::Closure:
      case AbsValue::Tag::Prim:
      case AbsValue::Tag::Guarded:
        apply(s.value, AbsValue::opaque(), kHavocK);
        return;
      default:
        return;
    }
  }

  Step step(const State& s) {
    Step result;
    out = &result;
    switch (s.mode) {
      case State::Mode::Eval: step_eval(s); break;
      case State::Mode::Return: step_return(s); break;
      case State::Mode::Apply: step_apply(s); break;
      case State::Mode::Havoc: step_havoc(s); break;
    }
    out = nullptr;
    return result;
  }

  std::optional<std::uint32_t> intern(const State& s) {
    auto it = state_ids.find(s);
    if (it != state_ids.end()) return std::nullopt;
    const auto id = static_cast<std::uint32_t>(states.size());
    states.push_back(s);
    state_ids.emplace(s, id);
    queued.push_back(0);
    return id;
  }

  BlameSet run() {
    BlameSet result;
    if (auto id = intern(State{State::Mode::Eval, prog.root, 0, {}, {}, kHalt})) requeue(*id);
    while (!work.empty()) {
      const auto id = work.front();
      work.pop_front();
      queued[id] = 0;
      current = id;
      const State s = states[id];
      Step st = step(s);
      current = kNoState;
      for (auto& b : st.blames) result.labels.insert(std::move(b));
      for (const auto& n : st.next) {
        if (auto fresh = intern(n)) requeue(*fresh);
      }
      if (states.size() > cap) {
        result.exhausted = true;
        break;
      }
    }
    result.states = states.size();
    return result;
  }

  std::string describe(const AbsValue& v) const {
    switch (v.tag) {
      case AbsValue::Tag::Const: return literals[v.a]->str();
      case AbsValue::Tag::Bool: return v.a ? "#t" : "#f";
      case AbsValue::Tag::Prim: return to_string(static_cast<Primitive>(v.a));
      case AbsValue::Tag::Closure: return "closure@" + std::to_string(v.a);
      case AbsValue::Tag::Opaque: return "opaque" + to_string(v.refinements());
      case AbsValue::Tag::Guarded: {
        const Check& c = checks[v.a];
        return "guard " + to_string(*c.contract) + " " + prog.parties[c.pos] + " " + prog.parties[c.neg];
      }
    }
    return {};
  }
};

Machine::Machine(const ConPtr& e, std::size_t state_cap) : impl_(std::make_unique<Impl>(e, state_cap)) {}
Machine::~Machine() = default;

BlameSet Machine::run() { return impl_->run(); }

std::vector<AbsValue> Machine::results() const { return impl_->halted; }

std::vector<State> Machine::havoc(const AbsValue& v) {
  return impl_->step(State{State::Mode::Havoc, 0, 0, v, {}, kHalt}).next;
}

Step Machine::step(const State& s) { return impl_->step(s); }

std::string Machine::describe(const AbsValue& v) const { return impl_->describe(v); }

std::optional<std::pair<Contract, BlameLabel>> Machine::guard_info(const AbsValue& v) const {
  if (v.tag != AbsValue::Tag::Guarded || v.a >= impl_->checks.size()) return std::nullopt;
  const Check& c = impl_->checks[v.a];
  return std::make_pair(*c.contract,
                        BlameLabel{Party{impl_->prog.parties[c.pos]}, Party{impl_->prog.parties[c.neg]}});
}

}  // namespace symbolic

BlameSet analyze(const ConPtr& e, std::size_t state_cap) {
  symbolic::Machine m(e, state_cap);
  return m.run();
}

}  // namespace gtlc
