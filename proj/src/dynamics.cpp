#include "entrench/dynamics.hpp"

#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "format_util.hpp"

namespace entrench {

namespace {

constexpr int kMaxSpectrumBound = 100;  // cells are int8_t

// Weight lookup indexed by attitude + L; the zero slot stays 0.
struct WeightTable {
  std::uint32_t w[2 * kMaxSpectrumBound + 1] = {};
  int bound = 0;

  WeightTable(InfluenceKind kind, int L) : bound(L) {
    for (int a = -L; a <= L; ++a)
      if (a != 0) w[a + L] = influence(kind, a, L);
  }
  std::uint32_t weight(Attitude a) const { return w[a + bound]; }
};

std::uint32_t select_weighted(const Configuration& config, const std::uint32_t* nb,
                              const WeightTable& weights, rng::Stream& stream) {
  std::uint32_t cum[8];
  std::uint32_t total = 0;
  for (int i = 0; i < 8; ++i) {
    total += weights.weight(config.cells[nb[i]]);
    cum[i] = total;
  }
  const auto r = static_cast<std::uint32_t>(stream.below(total));
  int i = 0;
  while (cum[i] <= r) ++i;
  return nb[i];
}

void for_rows(std::uint32_t height, int threads, const std::function<void(std::uint32_t, std::uint32_t)>& body) {
  if (threads <= 1 || height < 2) {
    body(0, height);
    return;
  }
  const auto n = std::min<std::uint32_t>(static_cast<std::uint32_t>(threads), height);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t begin = height * i / n;
    const std::uint32_t end = height * (i + 1) / n;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& t : pool) t.join();
}

// Exact-count local/global split: a uniformly random subset of round(tel*N)
// sites interacts globally this step.
std::vector<std::uint8_t> exact_partition(std::uint64_t population, double tel,
                                          std::uint64_t seed, std::uint64_t step_index) {
  std::vector<std::uint8_t> global(population, 0);
  const auto n_global =
      static_cast<std::uint64_t>(std::llround(tel * static_cast<double>(population)));
  std::vector<std::uint32_t> order(population);
  std::iota(order.begin(), order.end(), 0u);
  rng::Stream stream(seed, rng::Domain::Partition, step_index, 0);
  for (std::uint64_t i = 0; i < n_global && i < population; ++i) {
    const auto j = i + stream.below(population - i);
    std::swap(order[i], order[j]);
    global[order[i]] = 1;
  }
  return global;
}

void step_into(const Configuration& config, const ModelParams& params, std::uint64_t step_index,
               const NeighborTable& neighbors, Configuration& next, Configuration& scratch,
               int threads) {
  const std::uint64_t population = config.geometry.size();
  const Configuration* src = &config;

  if (params.mixing.kind == MixingKind::Relocation && params.mixing.level > 0) {
    scratch = config;
    rng::Stream stream(params.seed, rng::Domain::Relocate, step_index, 0);
    relocate(scratch, params.mixing.level, stream);
    src = &scratch;
  }

  const bool telephoning = params.mixing.kind == MixingKind::Telephoning;
  const double tel = telephoning ? params.mixing.level : 0.0;
  std::vector<std::uint8_t> global_site;
  if (telephoning && params.exact_tel_partition)
    global_site = exact_partition(population, tel, params.seed, step_index);

  next.geometry = config.geometry;
  next.spectrum_bound = config.spectrum_bound;
  next.cells.resize(config.cells.size());

  const WeightTable weights(params.influence, params.spectrum_bound);
  const Configuration& from = *src;
  const auto width = config.geometry.width;

  for_rows(config.geometry.height, threads, [&](std::uint32_t row_begin, std::uint32_t row_end) {
    for (std::uint32_t row = row_begin; row < row_end; ++row) {
      const std::uint32_t base = row * width;
      for (std::uint32_t col = 0; col < width; ++col) {
        const std::uint32_t site = base + col;
        rng::Stream stream(params.seed, rng::Domain::Interact, step_index, site);
        std::uint64_t partner;
        bool global = false;
        if (telephoning)
          global = params.exact_tel_partition ? global_site[site] != 0
                                              : stream.uniform01() < tel;
        if (global)
          partner = select_global_partner(population, site, stream);
        else
          partner = select_weighted(from, neighbors.row(site), weights, stream);
        const bool amplify = stream.bernoulli(params.amplification);
        next.cells[site] = update_attitude(from.cells[site], from.cells[partner], amplify,
                                           params.spectrum_bound);
      }
    }
  });
}

}  // namespace

std::string_view to_string(MixingKind kind) {
  switch (kind) {
    case MixingKind::None:        return "none";
    case MixingKind::Relocation:  return "relocation";
    case MixingKind::Telephoning: return "telephoning";
  }
  return "?";
}

MixingKind mixing_kind_from_string(std::string_view name) {
  if (name == "none") return MixingKind::None;
  if (name == "relocation") return MixingKind::Relocation;
  if (name == "telephoning") return MixingKind::Telephoning;
  throw std::invalid_argument("unknown mixing mode: " + std::string(name));
}

void ModelParams::validate() const {
  geometry.validate();
  if (spectrum_bound < 1 || spectrum_bound > kMaxSpectrumBound)
    throw std::invalid_argument("spectrum bound must be in [1, 100]");
  if (!(amplification >= 0.0 && amplification <= 1.0))
    throw std::invalid_argument("amplification probability must lie in [0, 1]");
  if (!(mixing.level >= 0.0 && mixing.level <= 1.0))
    throw std::invalid_argument("mixing level must lie in [0, 1]");
  if (mixing.kind == MixingKind::None && mixing.level != 0.0)
    throw std::invalid_argument("mixing level must be 0 when mixing is off");
}

std::uint32_t select_local_partner(const Configuration& config, const NeighborTable& neighbors,
                                   std::uint32_t site, InfluenceKind influence_kind,
                                   rng::Stream& stream) {
  if (site >= config.geometry.size()) throw std::out_of_range("site index out of range");
  const WeightTable weights(influence_kind, config.spectrum_bound);
  return select_weighted(config, neighbors.row(site), weights, stream);
}

std::uint64_t select_global_partner(std::uint64_t population, std::uint64_t site,
                                    rng::Stream& stream) {
  if (population < 2) throw std::invalid_argument("global selection needs at least 2 sites");
  const std::uint64_t r = stream.below(population - 1);
  return r + (r >= site ? 1 : 0);
}

std::uint64_t relocation_swap_count(double rel, std::uint64_t population) {
  const auto n = static_cast<std::uint64_t>(std::llround(rel * static_cast<double>(population)));
  return n / 2;
}

void relocate(Configuration& config, double rel, rng::Stream& stream) {
  if (!(rel >= 0.0 && rel <= 1.0)) throw std::invalid_argument("rel must lie in [0, 1]");
  const std::uint64_t population = config.geometry.size();
  const std::uint64_t swaps = relocation_swap_count(rel, population);
  for (std::uint64_t i = 0; i < swaps; ++i) {
    const std::uint64_t a = stream.below(population);
    std::uint64_t b = stream.below(population - 1);
    b += (b >= a ? 1 : 0);  // a site never swaps with itself
    std::swap(config.cells[a], config.cells[b]);
  }
}

Configuration step(const Configuration& config, const ModelParams& params,
                   std::uint64_t step_index, const NeighborTable& neighbors, int threads) {
  params.validate();
  if (config.geometry != params.geometry || config.spectrum_bound != params.spectrum_bound)
    throw std::invalid_argument("configuration does not match model parameters");
  Configuration next, scratch;
  step_into(config, params, step_index, neighbors, next, scratch, threads);
  return next;
}

RunResult run(const ModelParams& params, Configuration init, const RunOptions& options) {
  params.validate();
  init.validate();
  if (init.geometry != params.geometry || init.spectrum_bound != params.spectrum_bound)
    throw std::invalid_argument("initial configuration does not match model parameters");
  if (options.max_steps == 0) throw std::invalid_argument("max_steps must be positive");

  const NeighborTable neighbors(params.geometry);
  RunResult result;
  Configuration current = std::move(init), next, scratch;
  const std::uint64_t last_index = options.first_step_index + options.max_steps;

  std::uint64_t step_index = options.first_step_index;
  for (;; ++step_index) {
    const bool consensus = is_consensus(current);
    if (options.record) {
      StepMetrics m;
      m.step = step_index;
      m.hist = histogram(current);
      if (options.record_interface) m.interface = interface_density(current);
      m.consensus = consensus;
      result.metrics.push_back(std::move(m));
    }
    if (options.on_step) options.on_step(step_index, current);
    if (consensus) {
      result.consensus_step = step_index;
      break;
    }
    if (step_index == last_index) break;  // budget exhausted: censored
    step_into(current, params, step_index, neighbors, next, scratch, options.threads);
    std::swap(current, next);
  }

  result.steps_run = step_index - options.first_step_index;
  result.final_config = std::move(current);
  return result;
}

void write_run_log(std::ostream& out, const RunResult& result, int spectrum_bound) {
  std::string line = "step";
  for (int a = -spectrum_bound; a <= spectrum_bound; ++a) {
    if (a == 0) continue;
    line += a < 0 ? ",f_m" + std::to_string(-a) : ",f_p" + std::to_string(a);
  }
  line += ",interface_density,consensus\n";
  out << line;
  for (const auto& m : result.metrics) {
    line.clear();
    detail::append_number(line, m.step);
    const auto total = m.hist.total();
    for (int a = -spectrum_bound; a <= spectrum_bound; ++a) {
      if (a == 0) continue;
      line += ',';
      detail::append_number(line, total ? static_cast<double>(m.hist.count(a)) /
                                              static_cast<double>(total)
                                        : 0.0);
    }
    line += ',';
    if (m.interface >= 0.0) detail::append_number(line, m.interface);
    line += m.consensus ? ",1\n" : ",0\n";
    out << line;
  }
}

}  // namespace entrench
