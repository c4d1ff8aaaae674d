#include "gtlc/generator.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace gtlc {

namespace {

struct Binding {
  std::string name;
  Ty type;
};

class Generator {
 public:
  explicit Generator(const GenConfig& cfg) : cfg_(cfg), rng_(cfg.seed * 0x9e3779b97f4a7c15ULL + 1) {}

  SurfaceProgram program() {
    const int n = std::clamp(cfg_.modules, 1, 6);
    SurfaceProgram p;
    std::vector<Ty> intended;
    for (int i = 0; i < n; ++i) {
      const bool is_main = i == n - 1;
      SurfaceModule m;
      m.name = Party{is_main ? std::string("main") : "m" + std::to_string(i)};
      const bool typed = !is_main && chance(cfg_.typed_fraction);
      const Ty goal = type(2);
      std::vector<Binding> env;
      for (int j = 0; j < i; ++j) {
        if (!chance(is_main ? std::max(cfg_.boundary_density, 0.8) : cfg_.boundary_density)) continue;
        const SurfaceModule& dep = p.modules[static_cast<std::size_t>(j)];
        if (typed && !dep.typed()) {
          Ty assumed = chance(cfg_.violation_rate) ? type(2) : intended[static_cast<std::size_t>(j)];
          m.imports.push_back(Require::typed(dep.name.name, assumed));
          env.push_back({dep.name.name, assumed});
        } else {
          m.imports.push_back(Require::plain(dep.name.name));
          env.push_back({dep.name.name, intended[static_cast<std::size_t>(j)]});
        }
      }
      typed_ = typed;
      fresh_ = 0;
      env_ = std::move(env);
      m.body = expr(goal, cfg_.size);
      if (typed) m.annotation = goal;
      intended.push_back(goal);
      p.modules.push_back(std::move(m));
    }
    return p;
  }

 private:
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool chance(double p) { return static_cast<double>(rng_() >> 11) * 0x1.0p-53 < p; }

  Ty type(int depth) {
    const std::size_t pick = below(depth > 0 ? 5 : 2);
    if (pick == 0 || pick == 3) return Ty::integer();
    if (pick == 1) return Ty::boolean();
    return Ty::arrow(type(depth - 1), type(depth - 1));
  }

  SurfacePtr literal(const Ty& t) {
    if (t.is_arrow()) return lambda(t, 0);
    if (t == Ty::integer()) return surface::integer(Integer(static_cast<int>(below(100))));
    return surface::boolean(chance(0.5));
  }

  SurfacePtr lambda(const Ty& t, int depth) {
    const std::string x = "x" + std::to_string(fresh_++);
    env_.push_back({x, t.dom()});
    SurfacePtr body = expr(t.cod(), depth);
    env_.pop_back();
    return surface::lambda(x, typed_ ? std::optional<Ty>(t.dom()) : std::nullopt, std::move(body));
  }

  // A value of a type other than the intended one.
  SurfacePtr misbehave(const Ty& t) {
    Ty other = type(1);
    for (int tries = 0; tries < 4 && other == t; ++tries) other = type(1);
    return literal(other);
  }

  /// Indices into env_ of bindings whose type is `t` after applying 0, 1,
  /// or 2 arguments.
  std::vector<std::pair<std::size_t, int>> producers(const Ty& t) const {
    std::vector<std::pair<std::size_t, int>> out;
    for (std::size_t i = 0; i < env_.size(); ++i) {
      Ty cur = env_[i].type;
      for (int args = 0; args <= 2; ++args) {
        if (cur == t) {
          out.emplace_back(i, args);
          break;
        }
        if (!cur.is_arrow()) break;
        cur = cur.cod();
      }
    }
    return out;
  }

  SurfacePtr use(std::size_t index, int args, int depth) {
    const Binding b = env_[index];
    SurfacePtr e = surface::var(b.name);
    Ty cur = b.type;
    for (int k = 0; k < args; ++k) {
      e = surface::app(std::move(e), expr(cur.dom(), depth - 1));
      cur = cur.cod();
    }
    return e;
  }

  SurfacePtr expr(const Ty& t, int depth) {
    if (!typed_ && chance(cfg_.violation_rate / 2)) return misbehave(t);
    const auto from_env = producers(t);
    if (depth <= 0) {
      std::vector<std::size_t> direct;
      for (const auto& [i, args] : from_env) {
        if (args == 0) direct.push_back(i);
      }
      if (!direct.empty() && chance(0.6)) return surface::var(env_[direct[below(direct.size())]].name);
      return literal(t);
    }
    switch (below(8)) {
      case 0:
      case 1:
      case 2:
        if (!from_env.empty()) {
          const auto& [i, args] = from_env[below(from_env.size())];
          return use(i, args, depth);
        }
        return literal(t);
      case 3:
        return surface::if_(test(depth - 1), expr(t, depth - 1), expr(t, depth - 1));
      case 4: {
        const Ty a = type(1);
        return surface::app(lambda(Ty::arrow(a, t), depth - 1), expr(a, depth - 1));
      }
      case 5:
        if (t.is_arrow()) return lambda(t, depth - 1);
        if (t == Ty::boolean()) return test(depth - 1);
        return literal(t);
      default:
        if (t.is_arrow()) return lambda(t, depth - 1);
        return literal(t);
    }
  }

  SurfacePtr test(int depth) {
    const Primitive p = chance(0.5) ? Primitive::IsInt : Primitive::IsBool;
    if (!env_.empty() && chance(0.5)) {
      return surface::app(surface::prim(p), surface::var(env_[below(env_.size())].name));
    }
    if (chance(0.5)) return expr(Ty::boolean(), depth);
    return surface::app(surface::prim(p), expr(type(1), depth));
  }

  const GenConfig& cfg_;
  std::mt19937_64 rng_;
  bool typed_ = false;
  int fresh_ = 0;
  std::vector<Binding> env_;
};

}  // namespace

SurfaceProgram gen_program(const GenConfig& cfg) { return Generator(cfg).program(); }

}  // namespace gtlc
