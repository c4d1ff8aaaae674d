#pragma once

// Corpus layout and benchmarking.
//
// A corpus directory holds single programs (`name.gtl`) and lattices: a
// subdirectory `name/` whose files `name-<bits>.gtl` are the typed/untyped
// configurations of one program, bit i set when the i-th toggled module is
// typed. The all-zero configuration is the untyped baseline.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gtlc/concrete_eval.hpp"
#include "gtlc/optimizer.hpp"
#include "gtlc/report.hpp"

namespace gtlc {

struct Configuration {
  std::string id;  // the bit string; empty for a single program
  std::filesystem::path path;

  bool untyped() const { return id.find('1') == std::string::npos; }
};

struct CorpusEntry {
  std::string name;
  /// Lattice order: fewer typed modules first, then by bit string.
  std::vector<Configuration> configurations;
};

/// Entries sorted by name. Throws std::filesystem::filesystem_error.
std::vector<CorpusEntry> discover_corpus(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);

struct RunOptions {
  std::uint64_t fuel = kDefaultFuel;
  OptimizeOptions optimize;
};

/// Runs a well-formed program before and after optimization. Throws
/// std::invalid_argument with formatted diagnostics when it is not.
RunReport run_program(const std::string& text, const std::string& name, const std::string& configuration,
                      const RunOptions& options = {});

struct BenchRow {
  RunReport report;
  /// Mean wall time over the iterations, in nanoseconds.
  double original_ns = 0;
  double optimized_ns = 0;
  /// Relative to the untyped baseline of the same entry.
  double original_overhead = 1;
  double optimized_overhead = 1;
  bool agree = true;
  std::string error;
};

struct BenchEntry {
  std::string name;
  std::vector<BenchRow> rows;
};

BenchEntry bench_entry(const CorpusEntry& entry, int iterations, const RunOptions& options = {});

void to_json(Json& j, const BenchRow& r);
void to_json(Json& j, const BenchEntry& e);

}  // namespace gtlc
