#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "entrench/lattice.hpp"

namespace entrench {

// Counts per attitude; slot order -L..-1, +1..+L (2L slots, no zero).
struct AttitudeHistogram {
  int spectrum_bound = 2;
  std::vector<std::uint64_t> counts;

  static std::size_t slot(int attitude, int spectrum_bound) {
    return attitude < 0 ? static_cast<std::size_t>(attitude + spectrum_bound)
                        : static_cast<std::size_t>(attitude + spectrum_bound - 1);
  }
  static int attitude_at(std::size_t slot, int spectrum_bound) {
    const int a = static_cast<int>(slot) - spectrum_bound;
    return a < 0 ? a : a + 1;
  }

  std::uint64_t total() const;
  std::uint64_t count(int attitude) const { return counts[slot(attitude, spectrum_bound)]; }
  double frequency(int attitude) const;
};

AttitudeHistogram histogram(const Configuration& config);

// True iff every cell carries the same opinion sign (magnitudes may differ).
bool is_consensus(const Configuration& config);

enum class Label { Consensus, Polarized, Centered, Mixed };
std::string_view to_string(Label label);

// Distribution shape of the population. Consensus: one sign holds all mass.
// Polarized: mass at the extremes >= outer_threshold with each extreme
// holding at least a quarter of that mass. Centered: mass at the inner
// states >= center_threshold. Otherwise mixed. Thresholds are explicit
// configuration, not model claims.
Label classify(const AttitudeHistogram& hist, double outer_threshold = 0.8,
               double center_threshold = 0.8);

enum class BondNeighborhood { FourNeighbor, EightNeighbor };

// Fraction of unordered nearest-neighbor bonds whose endpoints carry opposite
// opinion signs. Four-neighbor bonds (2N on the torus) by default; zero
// exactly at consensus.
double interface_density(const Configuration& config,
                         BondNeighborhood bonds = BondNeighborhood::FourNeighbor);

// One replicate outcome. A missing time means the run hit its step budget;
// `budget` is then a lower bound on the consensus time.
struct ConsensusSample {
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> time;
  std::uint64_t budget = 0;
  Label final_label = Label::Mixed;

  bool censored() const { return !time.has_value(); }
};

// Mean/median/stderr over uncensored samples only; censored counts are
// reported separately and never averaged in.
struct SampleSummary {
  std::size_t n_total = 0;
  std::size_t n_finite = 0;
  std::size_t n_censored = 0;
  double mean = 0.0;
  double median = 0.0;
  double stderr_mean = 0.0;
  bool lower_bound_only = false;  // every sample was censored
};

SampleSummary summarize(const std::vector<ConsensusSample>& samples);

}  // namespace entrench
