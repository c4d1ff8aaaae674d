#include "gtlc/concrete_eval.hpp"

#include <variant>
#include <vector>

#include "gtlc/lowered.hpp"
#include "gtlc/printer.hpp"

namespace gtlc {

namespace {

using detail::LNode;
using detail::Lowered;
using detail::Op;

struct FnObj;
using FnPtr = std::shared_ptr<const FnObj>;

struct Value {
  enum class Tag : std::uint8_t { Int, Bool, Prim, Closure, Guarded };
  Tag tag = Tag::Bool;
  bool boolean = false;
  Primitive prim = Primitive::IsInt;
  const Integer* integer = nullptr;
  FnPtr fn;

  bool is_function() const noexcept { return tag == Tag::Prim || tag == Tag::Closure || tag == Tag::Guarded; }
};

struct EnvCell;
using Env = std::shared_ptr<const EnvCell>;
struct EnvCell {
  Value value;
  Env next;
};

struct FnObj {
  // Closure
  std::uint32_t lambda = 0;
  Env env;
  // Guarded
  const Contract* contract = nullptr;
  Value inner;
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
};

struct Frame {
  enum class Kind : std::uint8_t { EvalArg, Call, Branch, Bind, Check, CallInner };
  Kind kind;
  std::uint32_t node = 0;
  Env env;
  Value value;
  const Contract* contract = nullptr;
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
};

bool satisfies(const Contract& flat, const Value& v) {
  return flat.kind() == Contract::Kind::FlatInt ? v.tag == Value::Tag::Int : v.tag == Value::Tag::Bool;
}

class Machine {
 public:
  Machine(const Lowered& prog, std::uint64_t fuel) : prog_(prog), fuel_(fuel) {}

  Answer run() {
    enum class Mode { Eval, Return } mode = Mode::Eval;
    std::uint32_t node = prog_.root;
    Env env;
    Value value;

    // Transitions are expressed as assignments to (mode, node, env, value);
    // terminal outcomes return directly.
    auto ret = [&](Value v) {
      mode = Mode::Return;
      value = std::move(v);
    };
    auto eval_in = [&](std::uint32_t n, Env e) {
      mode = Mode::Eval;
      node = n;
      env = std::move(e);
    };

    std::optional<Answer> done;
    auto monitor = [&](const Contract& c, std::uint32_t pos, std::uint32_t neg, Value v) {
      switch (c.kind()) {
        case Contract::Kind::Any:
          ret(std::move(v));
          return;
        case Contract::Kind::FlatInt:
        case Contract::Kind::FlatBool:
          ++metrics_.flat_checks;
          if (satisfies(c, v)) {
            ret(std::move(v));
          } else {
            done = blamed(pos, neg);
          }
          return;
        case Contract::Kind::Arrow: {
          if (!v.is_function()) {
            done = blamed(pos, neg);
            return;
          }
          ++metrics_.wrappers_allocated;
          auto g = std::make_shared<FnObj>();
          g->contract = &c;
          g->inner = std::move(v);
          g->pos = pos;
          g->neg = neg;
          Value w;
          w.tag = Value::Tag::Guarded;
          w.fn = std::move(g);
          ret(std::move(w));
          return;
        }
      }
    };
    auto apply = [&](const Value& f, Value arg) {
      switch (f.tag) {
        case Value::Tag::Closure: {
          const LNode& lam = prog_.nodes[f.fn->lambda];
          eval_in(lam.kid[0], std::make_shared<const EnvCell>(EnvCell{std::move(arg), f.fn->env}));
          return;
        }
        case Value::Tag::Prim: {
          Value b;
          b.tag = Value::Tag::Bool;
          b.boolean = f.prim == Primitive::IsInt ? arg.tag == Value::Tag::Int : arg.tag == Value::Tag::Bool;
          ret(std::move(b));
          return;
        }
        case Value::Tag::Guarded: {
          ++metrics_.wrapped_calls;
          const FnObj& g = *f.fn;
          stack_.push_back(Frame{Frame::Kind::Check, 0, nullptr, {}, &g.contract->cod(), g.pos, g.neg});
          stack_.push_back(Frame{Frame::Kind::CallInner, 0, nullptr, g.inner, nullptr, 0, 0});
          monitor(g.contract->dom(), g.neg, g.pos, std::move(arg));
          return;
        }
        default:
          done = stuck("application of a non-function");
          return;
      }
    };

    for (;;) {
      if (metrics_.steps >= fuel_) return Answer{Answer::Kind::OutOfFuel, {}, {}, "fuel exhausted"};
      ++metrics_.steps;
      if (mode == Mode::Eval) {
        const LNode& n = prog_.nodes[node];
        switch (n.op) {
          case Op::Var: {
            const EnvCell* cell = env.get();
            for (std::uint32_t d = 0; d < n.var.depth; ++d) cell = cell->next.get();
            ret(cell->value);
            break;
          }
          case Op::Int: {
            Value v;
            v.tag = Value::Tag::Int;
            v.integer = n.integer;
            ret(std::move(v));
            break;
          }
          case Op::Bool: {
            Value v;
            v.tag = Value::Tag::Bool;
            v.boolean = n.boolean;
            ret(std::move(v));
            break;
          }
          case Op::Prim: {
            Value v;
            v.tag = Value::Tag::Prim;
            v.prim = n.prim;
            ret(std::move(v));
            break;
          }
          case Op::Lambda: {
            auto c = std::make_shared<FnObj>();
            c->lambda = node;
            c->env = env;
            Value v;
            v.tag = Value::Tag::Closure;
            v.fn = std::move(c);
            ret(std::move(v));
            break;
          }
          case Op::App:
            stack_.push_back(Frame{Frame::Kind::EvalArg, n.kid[1], env, {}, nullptr, 0, 0});
            node = n.kid[0];
            break;
          case Op::If:
            stack_.push_back(Frame{Frame::Kind::Branch, node, env, {}, nullptr, 0, 0});
            node = n.kid[0];
            break;
          case Op::Let:
            stack_.push_back(Frame{Frame::Kind::Bind, n.kid[1], env, {}, nullptr, 0, 0});
            node = n.kid[0];
            break;
          case Op::Mon:
            stack_.push_back(Frame{Frame::Kind::Check, 0, nullptr, {}, n.contract, n.pos, n.neg});
            node = n.kid[0];
            break;
          case Op::Blame:
            return blamed(n.pos, n.neg);
          case Op::Opaque:
            return stuck("opaque code has no concrete behavior");
        }
      } else {
        if (stack_.empty()) return Answer{Answer::Kind::Value, view(value), {}, {}};
        Frame f = std::move(stack_.back());
        stack_.pop_back();
        switch (f.kind) {
          case Frame::Kind::EvalArg:
            stack_.push_back(Frame{Frame::Kind::Call, 0, nullptr, std::move(value), nullptr, 0, 0});
            eval_in(f.node, std::move(f.env));
            break;
          case Frame::Kind::Call:
          case Frame::Kind::CallInner:
            apply(f.value, std::move(value));
            break;
          case Frame::Kind::Branch: {
            if (value.tag != Value::Tag::Bool) return stuck("if test is not a boolean");
            const LNode& n = prog_.nodes[f.node];
            eval_in(value.boolean ? n.kid[1] : n.kid[2], std::move(f.env));
            break;
          }
          case Frame::Kind::Bind:
            eval_in(f.node, std::make_shared<const EnvCell>(EnvCell{std::move(value), std::move(f.env)}));
            break;
          case Frame::Kind::Check:
            monitor(*f.contract, f.pos, f.neg, std::move(value));
            break;
        }
      }
      if (done) return *done;
    }
  }

  const Metrics& metrics() const { return metrics_; }

 private:
  Answer blamed(std::uint32_t blamed_party, std::uint32_t holder) const {
    Answer a;
    a.kind = Answer::Kind::Blamed;
    a.label = BlameLabel{Party{prog_.parties[blamed_party]}, Party{prog_.parties[holder]}};
    return a;
  }

  static Answer stuck(std::string reason) { return Answer{Answer::Kind::Stuck, {}, {}, std::move(reason)}; }

  ValueView view(const Value& v) const {
    ValueView out;
    switch (v.tag) {
      case Value::Tag::Int:
        out.kind = ValueView::Kind::Int;
        out.integer = *v.integer;
        break;
      case Value::Tag::Bool:
        out.kind = ValueView::Kind::Bool;
        out.boolean = v.boolean;
        break;
      case Value::Tag::Prim:
        out.kind = ValueView::Kind::Prim;
        out.prim = v.prim;
        break;
      case Value::Tag::Closure:
        out.kind = ValueView::Kind::Closure;
        break;
      case Value::Tag::Guarded:
        out.kind = ValueView::Kind::Guarded;
        out.contract = *v.fn->contract;
        out.pos = Party{prog_.parties[v.fn->pos]};
        out.neg = Party{prog_.parties[v.fn->neg]};
        out.inner = std::make_shared<const ValueView>(view(v.fn->inner));
        break;
    }
    return out;
  }

  const Lowered& prog_;
  std::uint64_t fuel_;
  std::vector<Frame> stack_;
  Metrics metrics_;
};

}  // namespace

std::string to_string(const ValueView& v) {
  switch (v.kind) {
    case ValueView::Kind::Int: return v.integer.str();
    case ValueView::Kind::Bool: return v.boolean ? "#t" : "#f";
    case ValueView::Kind::Prim: return "#<procedure:" + to_string(v.prim) + ">";
    case ValueView::Kind::Closure: return "#<procedure>";
    case ValueView::Kind::Guarded: return "#<guarded " + to_string(*v.contract) + ">";
  }
  return {};
}

std::string to_string(const Answer& a) {
  switch (a.kind) {
    case Answer::Kind::Value: return to_string(a.value);
    case Answer::Kind::Blamed: return to_string(a.label);
    case Answer::Kind::Stuck: return "stuck: " + a.reason;
    case Answer::Kind::OutOfFuel: return "out of fuel";
  }
  return {};
}

bool same_observation(const Answer& a, const Answer& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Answer::Kind::Blamed: return a.label == b.label;
    case Answer::Kind::Stuck:
    case Answer::Kind::OutOfFuel: return true;
    case Answer::Kind::Value: {
      const auto& x = a.value;
      const auto& y = b.value;
      if (x.is_function() || y.is_function()) return x.is_function() && y.is_function();
      if (x.kind != y.kind) return false;
      return x.kind == ValueView::Kind::Int ? x.integer == y.integer : x.boolean == y.boolean;
    }
  }
  return false;
}

RunResult eval(const ConPtr& e, std::uint64_t fuel) {
  const Lowered prog = detail::lower(e);
  const auto start = std::chrono::steady_clock::now();
  Machine m(prog, fuel);
  Answer a = m.run();
  RunResult out{std::move(a), m.metrics()};
  out.metrics.wall_time = std::chrono::steady_clock::now() - start;
  return out;
}

}  // namespace gtlc
