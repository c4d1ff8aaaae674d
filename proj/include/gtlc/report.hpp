#pragma once

// JSON forms of analysis and run results. Every top-level document carries
// `"schema": 1`; each `to_json` has a `from_json` inverse.

#include <optional>
#include <string>

#include <json.hpp>

#include "gtlc/concrete_eval.hpp"
#include "gtlc/optimizer.hpp"
#include "gtlc/symbolic_eval.hpp"

namespace gtlc {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::json;

struct RunSummary {
  Answer answer;
  Metrics metrics;
};

struct RunReport {
  std::string program;
  std::string configuration;
  RunSummary original;
  std::optional<RunSummary> optimized;
  std::optional<OptimizationReport> optimization;
};

void to_json(Json& j, const BlameLabel& l);
void from_json(const Json& j, BlameLabel& l);
void to_json(Json& j, const ValueView& v);
void from_json(const Json& j, ValueView& v);
void to_json(Json& j, const Answer& a);
void from_json(const Json& j, Answer& a);
void to_json(Json& j, const Metrics& m);
void from_json(const Json& j, Metrics& m);
void to_json(Json& j, const BlameSet& b);
void from_json(const Json& j, BlameSet& b);
void to_json(Json& j, const Verdict& v);
void from_json(const Json& j, Verdict& v);
void to_json(Json& j, const Disposition& d);
void from_json(const Json& j, Disposition& d);
void to_json(Json& j, const OptimizationReport& r);
void from_json(const Json& j, OptimizationReport& r);
void to_json(Json& j, const RunSummary& r);
void from_json(const Json& j, RunSummary& r);
void to_json(Json& j, const RunReport& r);
void from_json(const Json& j, RunReport& r);

/// `j` with the schema key added at the top level.
Json document(Json j);

}  // namespace gtlc
