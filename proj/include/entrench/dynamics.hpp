#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "entrench/lattice.hpp"
#include "entrench/metrics.hpp"
#include "entrench/rng.hpp"
#include "entrench/spectrum.hpp"

namespace entrench {

// The two mixing mechanisms are exclusive: relocation swaps grid positions
// before the interactions, telephoning lets a fraction of sites pick a
// uniform global partner for one step while keeping their position.
enum class MixingKind { None, Relocation, Telephoning };

std::string_view to_string(MixingKind kind);
MixingKind mixing_kind_from_string(std::string_view name);

struct MixingMode {
  MixingKind kind = MixingKind::None;
  double level = 0.0;  // rel or tel fraction in [0,1]; ignored for None
};

struct ModelParams {
  int spectrum_bound = 2;
  double amplification = 0.0;  // probability an agreeing interaction entrenches
  InfluenceKind influence = InfluenceKind::Uniform;
  MixingMode mixing;
  TorusGeometry geometry;
  std::uint64_t seed = 0;
  // Split the population into exact-count local/global subsets each step
  // instead of per-site Bernoulli(tel) draws (sensitivity checks only).
  bool exact_tel_partition = false;

  void validate() const;
};

// Weighted neighbor choice: z in N(site) with probability
// I(A(z)) / sum_{y in N(site)} I(A(y)). Weights are positive for every valid
// attitude, so the distribution is always well-defined.
std::uint32_t select_local_partner(const Configuration& config, const NeighborTable& neighbors,
                                   std::uint32_t site, InfluenceKind influence,
                                   rng::Stream& stream);

// Uniform over the population excluding the focal site itself; neighbors are
// included and influence plays no role.
std::uint64_t select_global_partner(std::uint64_t population, std::uint64_t site,
                                    rng::Stream& stream);

// round(rel * N) selected movers, half-up, yield floor(n/2) swaps.
std::uint64_t relocation_swap_count(double rel, std::uint64_t population);

// In-place position swaps: round(rel * N) selected movers give floor(n/2)
// sequential swaps; initiators are drawn with replacement, the partner is
// always a different site. The attitude multiset is preserved exactly.
void relocate(Configuration& config, double rel, rng::Stream& stream);

// One synchronous step. Relocation (if any) happens first; every site then
// reads only the post-relocation buffer, picks a partner, draws its
// amplification coin, and the results land in a fresh configuration. With
// threads > 1 the interaction phase is split over row bands; the output is
// bit-identical for any thread count.
Configuration step(const Configuration& config, const ModelParams& params,
                   std::uint64_t step_index, const NeighborTable& neighbors, int threads = 1);

struct StepMetrics {
  std::uint64_t step = 0;
  AttitudeHistogram hist;
  double interface = -1.0;  // -1 when interface recording is off
  bool consensus = false;
};

struct RunOptions {
  std::uint64_t max_steps = 100000;
  int threads = 1;
  bool record = false;            // per-step histogram rows
  bool record_interface = false;  // add interface density to the rows
  // Step index the initial configuration sits at. Replaying from a saved
  // snapshot with the original seed and its header step index reproduces the
  // original trajectory exactly.
  std::uint64_t first_step_index = 0;
  // Invoked after the configuration for `step` is in place (including step 0).
  std::function<void(std::uint64_t step, const Configuration&)> on_step;
};

struct RunResult {
  std::optional<std::uint64_t> consensus_step;  // first step index at consensus
  std::uint64_t steps_run = 0;
  Configuration final_config;
  std::vector<StepMetrics> metrics;

  bool censored() const { return !consensus_step.has_value(); }
};

// Iterate `step` until consensus or the budget runs out. Consensus time is
// the first step index at which every sign agrees; an initial consensus
// configuration reports 0 without stepping. Deterministic given
// (params.seed, init).
RunResult run(const ModelParams& params, Configuration init, const RunOptions& options = {});

// Event-log CSV: step, attitude frequencies (-L..-1, +1..+L), interface
// density, consensus flag.
void write_run_log(std::ostream& out, const RunResult& result, int spectrum_bound);

}  // namespace entrench
