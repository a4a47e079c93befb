#include "entrench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace entrench {

std::uint64_t AttitudeHistogram::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double AttitudeHistogram::frequency(int attitude) const {
  const auto n = total();
  return n == 0 ? 0.0 : static_cast<double>(count(attitude)) / static_cast<double>(n);
}

AttitudeHistogram histogram(const Configuration& config) {
  AttitudeHistogram hist;
  hist.spectrum_bound = config.spectrum_bound;
  hist.counts.assign(static_cast<std::size_t>(2 * config.spectrum_bound), 0);
  for (const Attitude a : config.cells)
    ++hist.counts[AttitudeHistogram::slot(a, config.spectrum_bound)];
  return hist;
}

bool is_consensus(const Configuration& config) {
  if (config.cells.empty()) return true;
  const bool positive = config.cells.front() > 0;
  for (const Attitude a : config.cells)
    if ((a > 0) != positive) return false;
  return true;
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Consensus: return "consensus";
    case Label::Polarized: return "polarized";
    case Label::Centered:  return "centered";
    case Label::Mixed:     return "mixed";
  }
  return "?";
}

Label classify(const AttitudeHistogram& hist, double outer_threshold, double center_threshold) {
  if (outer_threshold <= 0.5 || outer_threshold > 1.0 || center_threshold <= 0.5 ||
      center_threshold > 1.0)
    throw std::invalid_argument("classification thresholds must lie in (0.5, 1]");
  const auto n = hist.total();
  if (n == 0) return Label::Mixed;
  const int L = hist.spectrum_bound;

  std::uint64_t negative = 0;
  for (int a = -L; a <= -1; ++a) negative += hist.count(a);
  if (negative == 0 || negative == n) return Label::Consensus;

  const double nd = static_cast<double>(n);
  const double lo = static_cast<double>(hist.count(-L)) / nd;
  const double hi = static_cast<double>(hist.count(L)) / nd;
  const double extremes = lo + hi;
  if (extremes >= outer_threshold && lo >= 0.25 * extremes && hi >= 0.25 * extremes)
    return Label::Polarized;
  if (hist.frequency(-1) + hist.frequency(1) >= center_threshold) return Label::Centered;
  return Label::Mixed;
}

double interface_density(const Configuration& config, BondNeighborhood bonds) {
  const auto& g = config.geometry;
  g.validate();
  const auto sign_of = [](Attitude a) { return a > 0; };
  std::uint64_t opposite = 0;
  std::uint64_t total = 0;
  for (std::uint32_t row = 0; row < g.height; ++row) {
    const std::uint32_t down = (row + 1) % g.height;
    for (std::uint32_t col = 0; col < g.width; ++col) {
      const std::uint32_t right = (col + 1) % g.width;
      const bool s = sign_of(config.cells[g.site(row, col)]);
      opposite += s != sign_of(config.cells[g.site(row, right)]);
      opposite += s != sign_of(config.cells[g.site(down, col)]);
      total += 2;
      if (bonds == BondNeighborhood::EightNeighbor) {
        const std::uint32_t left = (col + g.width - 1) % g.width;
        opposite += s != sign_of(config.cells[g.site(down, right)]);
        opposite += s != sign_of(config.cells[g.site(down, left)]);
        total += 2;
      }
    }
  }
  return static_cast<double>(opposite) / static_cast<double>(total);
}

SampleSummary summarize(const std::vector<ConsensusSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("cannot summarize an empty sample list");
  SampleSummary out;
  out.n_total = samples.size();
  std::vector<double> finite;
  finite.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.censored())
      ++out.n_censored;
    else
      finite.push_back(static_cast<double>(*s.time));
  }
  out.n_finite = finite.size();
  if (finite.empty()) {
    out.lower_bound_only = true;
    return out;
  }
  out.mean = std::accumulate(finite.begin(), finite.end(), 0.0) / static_cast<double>(finite.size());
  std::sort(finite.begin(), finite.end());
  const std::size_t m = finite.size() / 2;
  out.median = finite.size() % 2 ? finite[m] : 0.5 * (finite[m - 1] + finite[m]);
  if (finite.size() > 1) {
    double ss = 0.0;
    for (const double v : finite) ss += (v - out.mean) * (v - out.mean);
    out.stderr_mean = std::sqrt(ss / static_cast<double>(finite.size() - 1) /
                                static_cast<double>(finite.size()));
  }
  return out;
}

}  // namespace entrench
