#include "gtlc/report.hpp"

#include <stdexcept>

#include "gtlc/frontend.hpp"
#include "gtlc/printer.hpp"

namespace gtlc {

namespace {

Contract contract_from(const Json& j) {
  auto c = parse_contract(j.get<std::string>());
  if (!c) throw std::invalid_argument("bad contract in report: " + j.get<std::string>());
  return *c;
}

template <class E, std::size_t N>
E enum_from(const Json& j, const std::pair<E, const char*> (&names)[N]) {
  const auto s = j.get<std::string>();
  for (const auto& [e, name] : names) {
    if (s == name) return e;
  }
  throw std::invalid_argument("unknown tag in report: " + s);
}

template <class E, std::size_t N>
const char* enum_name(E e, const std::pair<E, const char*> (&names)[N]) {
  for (const auto& [x, name] : names) {
    if (x == e) return name;
  }
  return "";
}

constexpr std::pair<Answer::Kind, const char*> kAnswerKinds[] = {
    {Answer::Kind::Value, "value"},
    {Answer::Kind::Blamed, "blame"},
    {Answer::Kind::Stuck, "stuck"},
    {Answer::Kind::OutOfFuel, "out-of-fuel"},
};

constexpr std::pair<ValueView::Kind, const char*> kValueKinds[] = {
    {ValueView::Kind::Int, "int"},         {ValueView::Kind::Bool, "bool"},
    {ValueView::Kind::Closure, "closure"}, {ValueView::Kind::Prim, "prim"},
    {ValueView::Kind::Guarded, "guarded"},
};

constexpr std::pair<Disposition::Kind, const char*> kDispositions[] = {
    {Disposition::Kind::Kept, "kept"},
    {Disposition::Kind::Weakened, "weakened"},
    {Disposition::Kind::Removed, "removed"},
};

}  // namespace

void to_json(Json& j, const BlameLabel& l) { j = Json{{"blamed", l.blamed.name}, {"holder", l.holder.name}}; }

void from_json(const Json& j, BlameLabel& l) {
  l.blamed = Party{j.at("blamed").get<std::string>()};
  l.holder = Party{j.at("holder").get<std::string>()};
}

void to_json(Json& j, const ValueView& v) {
  j = Json{{"kind", enum_name(v.kind, kValueKinds)}};
  switch (v.kind) {
    case ValueView::Kind::Int: j["int"] = v.integer.str(); break;
    case ValueView::Kind::Bool: j["bool"] = v.boolean; break;
    case ValueView::Kind::Prim: j["prim"] = to_string(v.prim); break;
    case ValueView::Kind::Closure: break;
    case ValueView::Kind::Guarded:
      j["contract"] = to_string(*v.contract);
      j["pos"] = v.pos.name;
      j["neg"] = v.neg.name;
      j["inner"] = *v.inner;
      break;
  }
}

void from_json(const Json& j, ValueView& v) {
  v = ValueView{};
  v.kind = enum_from(j.at("kind"), kValueKinds);
  switch (v.kind) {
    case ValueView::Kind::Int: v.integer = Integer(j.at("int").get<std::string>()); break;
    case ValueView::Kind::Bool: v.boolean = j.at("bool").get<bool>(); break;
    case ValueView::Kind::Prim:
      v.prim = j.at("prim").get<std::string>() == "int?" ? Primitive::IsInt : Primitive::IsBool;
      break;
    case ValueView::Kind::Closure: break;
    case ValueView::Kind::Guarded:
      v.contract = contract_from(j.at("contract"));
      v.pos = Party{j.at("pos").get<std::string>()};
      v.neg = Party{j.at("neg").get<std::string>()};
      v.inner = std::make_shared<const ValueView>(j.at("inner").get<ValueView>());
      break;
  }
}

void to_json(Json& j, const Answer& a) {
  j = Json{{"kind", enum_name(a.kind, kAnswerKinds)}, {"text", to_string(a)}};
  switch (a.kind) {
    case Answer::Kind::Value: j["value"] = a.value; break;
    case Answer::Kind::Blamed: j["label"] = a.label; break;
    case Answer::Kind::Stuck: j["reason"] = a.reason; break;
    case Answer::Kind::OutOfFuel: break;
  }
}

void from_json(const Json& j, Answer& a) {
  a = Answer{};
  a.kind = enum_from(j.at("kind"), kAnswerKinds);
  switch (a.kind) {
    case Answer::Kind::Value: a.value = j.at("value").get<ValueView>(); break;
    case Answer::Kind::Blamed: a.label = j.at("label").get<BlameLabel>(); break;
    case Answer::Kind::Stuck: a.reason = j.at("reason").get<std::string>(); break;
    case Answer::Kind::OutOfFuel: a.reason = "fuel exhausted"; break;
  }
}

void to_json(Json& j, const Metrics& m) {
  j = Json{{"flat_checks", m.flat_checks},
           {"wrappers_allocated", m.wrappers_allocated},
           {"wrapped_calls", m.wrapped_calls},
           {"steps", m.steps},
           {"wall_time_ns", m.wall_time.count()}};
}

void from_json(const Json& j, Metrics& m) {
  m.flat_checks = j.at("flat_checks").get<std::uint64_t>();
  m.wrappers_allocated = j.at("wrappers_allocated").get<std::uint64_t>();
  m.wrapped_calls = j.at("wrapped_calls").get<std::uint64_t>();
  m.steps = j.at("steps").get<std::uint64_t>();
  m.wall_time = std::chrono::nanoseconds(j.at("wall_time_ns").get<std::int64_t>());
}

void to_json(Json& j, const BlameSet& b) {
  j = Json{{"labels", Json::array()}, {"exhausted", b.exhausted}, {"states", b.states}};
  for (const auto& l : b.labels) j["labels"].push_back(l);
}

void from_json(const Json& j, BlameSet& b) {
  b = BlameSet{};
  for (const auto& l : j.at("labels")) b.labels.insert(l.get<BlameLabel>());
  b.exhausted = j.at("exhausted").get<bool>();
  b.states = j.at("states").get<std::size_t>();
}

void to_json(Json& j, const Verdict& v) {
  j = Json{{"module", v.module.name},     {"safe_against", Json::array()}, {"exhausted", v.exhausted},
           {"skipped", v.skipped},        {"trusted", v.trusted},          {"blame", v.blame},
           {"analysis_time_ns", v.analysis_time.count()}};
  for (const auto& p : v.safe_against) j["safe_against"].push_back(p.name);
}

void from_json(const Json& j, Verdict& v) {
  v = Verdict{};
  v.module = Party{j.at("module").get<std::string>()};
  for (const auto& p : j.at("safe_against")) v.safe_against.insert(Party{p.get<std::string>()});
  v.exhausted = j.at("exhausted").get<bool>();
  v.skipped = j.at("skipped").get<bool>();
  v.trusted = j.at("trusted").get<bool>();
  v.blame = j.at("blame").get<BlameSet>();
  v.analysis_time = std::chrono::nanoseconds(j.at("analysis_time_ns").get<std::int64_t>());
}

void to_json(Json& j, const Disposition& d) {
  j = Json{{"pos", d.boundary.pos.name},
           {"neg", d.boundary.neg.name},
           {"contract", to_string(d.boundary.contract)},
           {"site", d.boundary.site},
           {"disposition", to_string(d.kind)},
           {"after", to_string(d.after)}};
}

namespace {

Disposition disposition_from(const Json& j) {
  return Disposition{Boundary{Party{j.at("pos").get<std::string>()}, Party{j.at("neg").get<std::string>()},
                              contract_from(j.at("contract")), j.at("site").get<ConPath>()},
                     enum_from(j.at("disposition"), kDispositions), contract_from(j.at("after"))};
}

}  // namespace

void from_json(const Json& j, Disposition& d) { d = disposition_from(j); }

void to_json(Json& j, const OptimizationReport& r) {
  j = Json{{"monitors_before", r.monitors_before},
           {"monitors_after", r.monitors_after},
           {"removed", r.count(Disposition::Kind::Removed)},
           {"weakened", r.count(Disposition::Kind::Weakened)},
           {"kept", r.count(Disposition::Kind::Kept)},
           {"boundaries", r.boundaries},
           {"verdicts", r.verdicts}};
}

void from_json(const Json& j, OptimizationReport& r) {
  r.monitors_before = j.at("monitors_before").get<std::size_t>();
  r.monitors_after = j.at("monitors_after").get<std::size_t>();
  r.boundaries.clear();
  for (const auto& d : j.at("boundaries")) r.boundaries.push_back(disposition_from(d));
  r.verdicts = j.at("verdicts").get<std::vector<Verdict>>();
}

void to_json(Json& j, const RunSummary& r) { j = Json{{"answer", r.answer}, {"metrics", r.metrics}}; }

void from_json(const Json& j, RunSummary& r) {
  r.answer = j.at("answer").get<Answer>();
  r.metrics = j.at("metrics").get<Metrics>();
}

void to_json(Json& j, const RunReport& r) {
  j = Json{{"program", r.program}, {"configuration", r.configuration}, {"original", r.original}};
  if (r.optimized) j["optimized"] = *r.optimized;
  if (r.optimization) j["optimization"] = *r.optimization;
}

void from_json(const Json& j, RunReport& r) {
  r = RunReport{};
  r.program = j.at("program").get<std::string>();
  r.configuration = j.at("configuration").get<std::string>();
  r.original = j.at("original").get<RunSummary>();
  if (j.contains("optimized")) r.optimized = j.at("optimized").get<RunSummary>();
  if (j.contains("optimization")) r.optimization = j.at("optimization").get<OptimizationReport>();
}

Json document(Json j) {
  j["schema"] = kSchemaVersion;
  return j;
}

}  // namespace gtlc
