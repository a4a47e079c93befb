#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "entrench/dynamics.hpp"
#include "entrench/metrics.hpp"

namespace entrench::sweep {

enum class InitKind { Uniform, Droplet };

struct InitSpec {
  InitKind kind = InitKind::Uniform;
  double radius = 25.0;  // droplet only
};

// A replicated sweep over (geometry x influence x amplification x mixing
// level) cells. Exactly one mixing-mode family per spec; axes must be
// nonempty and replicates >= 1.
struct ExperimentSpec {
  std::vector<TorusGeometry> geometries{{101, 101}};
  int spectrum_bound = 2;
  std::vector<double> amplification{0.0};
  MixingKind mixing = MixingKind::None;
  std::vector<double> mixing_levels{0.0};
  std::vector<InfluenceKind> influences{InfluenceKind::Uniform};
  InitSpec init;
  std::uint32_t replicates = 1;
  std::uint64_t max_steps = 0;  // 0 = per-cell default budget
  std::uint64_t master_seed = 1;
  int workers = 0;  // 0 = hardware concurrency
  double outer_threshold = 0.8;
  double center_threshold = 0.8;
  // Also write a per-replicate event log (step, frequencies, interface
  // density, consensus flag) under output_dir/logs/.
  bool write_run_logs = false;

  // Field-level validation; throws SpecError before any run starts.
  void validate() const;

  std::size_t cell_count() const {
    return geometries.size() * influences.size() * amplification.size() * mixing_levels.size();
  }
};

struct SpecError : std::runtime_error {
  std::string field;
  SpecError(std::string field_, const std::string& message);
};

// Flat key = value document, '#' comments, lists comma-separated. CLI flags
// override file values.
ExperimentSpec parse_spec_file(const std::filesystem::path& path);
ExperimentSpec parse_spec_text(const std::string& text);

// Deadlock-prone cells (no mixing, or very low amplification) get the longer
// default budget; censoring is an outcome, not an error.
std::uint64_t default_max_steps(MixingKind kind, double mix, double pa);

struct CellKey {
  TorusGeometry geometry;
  InfluenceKind influence = InfluenceKind::Uniform;
  double pa = 0.0;
  double mix = 0.0;
};

struct CellResult {
  std::size_t cell_index = 0;
  CellKey key;
  std::vector<ConsensusSample> samples;  // replicate order
  SampleSummary summary;
};

struct SweepResult {
  std::vector<CellResult> cells;
  std::filesystem::path samples_csv;
  std::filesystem::path summary_csv;
};

// Runs every (cell, replicate) job on a worker pool with hash-derived seeds
// (collisions checked), then writes samples.csv and summary.csv into
// output_dir. Output bytes are a function of (spec, master seed) only —
// worker count and execution order never change them.
SweepResult run_spec(const ExperimentSpec& spec, const std::filesystem::path& output_dir);

// Named experiment families at paper scale; desk = true shrinks replicates
// (and the grid where noted) for quick runs. A preset may expand to several
// specs (one per mixing mode) since a single spec carries one mode family.
struct NamedSpec {
  std::string name;
  ExperimentSpec spec;
};
std::vector<NamedSpec> preset_specs(std::string_view name, bool desk);
std::vector<std::string> preset_names();

// Aggregate an existing samples.csv into a summary.csv (the `analyze` verb).
void analyze_samples(const std::filesystem::path& samples_csv,
                     const std::filesystem::path& summary_csv);

}  // namespace entrench::sweep
