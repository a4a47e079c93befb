#include "entrench/lattice.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "entrench/rng.hpp"

namespace entrench {

void TorusGeometry::validate() const {
  if (width < 3 || height < 3)
    throw std::invalid_argument("grid must be at least 3x3 so the 8 Moore neighbors are distinct");
}

std::array<std::uint32_t, 8> moore_neighbors(const TorusGeometry& geom, std::uint32_t site) {
  if (site >= geom.size()) throw std::out_of_range("site index out of range");
  const std::uint32_t w = geom.width, h = geom.height;
  const std::uint32_t r = site / w, c = site % w;
  const std::uint32_t up = (r + h - 1) % h, down = (r + 1) % h;
  const std::uint32_t left = (c + w - 1) % w, right = (c + 1) % w;
  return {up * w + left,   up * w + c,   up * w + right,
          r * w + left,                  r * w + right,
          down * w + left, down * w + c, down * w + right};
}

NeighborTable::NeighborTable(const TorusGeometry& geom) : geom_(geom) {
  geom.validate();
  data_.resize(geom.size() * 8);
  for (std::uint32_t site = 0; site < geom.size(); ++site) {
    const auto nb = moore_neighbors(geom, site);
    std::copy(nb.begin(), nb.end(), data_.begin() + 8ull * site);
  }
}

void Configuration::validate() const {
  geometry.validate();
  if (cells.size() != geometry.size())
    throw std::invalid_argument("configuration has wrong cell count for its geometry");
  for (const Attitude a : cells)
    if (!attitude_valid(a, spectrum_bound))
      throw std::invalid_argument("configuration contains an attitude outside the spectrum");
}

Configuration uniform_init(const TorusGeometry& geom, int spectrum_bound, std::uint64_t seed) {
  geom.validate();
  Configuration config(geom, spectrum_bound);
  const auto n_states = static_cast<std::uint64_t>(2 * spectrum_bound);
  for (std::uint64_t site = 0; site < geom.size(); ++site) {
    rng::Stream stream(seed, rng::Domain::Init, 0, site);
    const auto idx = static_cast<int>(stream.below(n_states));
    const int a = idx < spectrum_bound ? idx - spectrum_bound : idx - spectrum_bound + 1;
    config.cells[site] = static_cast<Attitude>(a);
  }
  return config;
}

Configuration droplet_init(const TorusGeometry& geom, int spectrum_bound, double radius,
                           int inside, int outside) {
  geom.validate();
  if (inside == 0) inside = spectrum_bound;
  if (outside == 0) outside = -spectrum_bound;
  if (!attitude_valid(inside, spectrum_bound) || !attitude_valid(outside, spectrum_bound))
    throw std::invalid_argument("droplet phase attitudes invalid for spectrum bound");
  if (radius < 0 || 2 * radius >= std::min(geom.width, geom.height))
    throw std::invalid_argument("droplet radius too large for geometry");
  Configuration config(geom, spectrum_bound);
  const auto cr = static_cast<std::int64_t>((geom.height - 1) / 2);
  const auto cc = static_cast<std::int64_t>((geom.width - 1) / 2);
  const double r2 = radius * radius;
  for (std::uint32_t row = 0; row < geom.height; ++row) {
    for (std::uint32_t col = 0; col < geom.width; ++col) {
      const double dr = static_cast<double>(static_cast<std::int64_t>(row) - cr);
      const double dc = static_cast<double>(static_cast<std::int64_t>(col) - cc);
      config.cells[geom.site(row, col)] =
          static_cast<Attitude>(dr * dr + dc * dc <= r2 ? inside : outside);
    }
  }
  return config;
}

void save_snapshot(std::ostream& out, const Configuration& config, std::uint64_t step) {
  const auto& g = config.geometry;
  out << g.width << ' ' << g.height << ' ' << config.spectrum_bound << ' ' << step << '\n';
  for (std::uint32_t row = 0; row < g.height; ++row) {
    for (std::uint32_t col = 0; col < g.width; ++col) {
      if (col) out << ' ';
      out << static_cast<int>(config.cells[g.site(row, col)]);
    }
    out << '\n';
  }
}

void save_snapshot(const std::filesystem::path& path, const Configuration& config,
                   std::uint64_t step) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open snapshot file for writing: " + path.string());
  save_snapshot(out, config, step);
}

Snapshot load_snapshot(std::istream& in) {
  Snapshot snap;
  std::uint32_t w = 0, h = 0;
  int bound = 0;
  if (!(in >> w >> h >> bound >> snap.step))
    throw std::runtime_error("malformed snapshot header");
  snap.config = Configuration({w, h}, bound);
  for (auto& cell : snap.config.cells) {
    int a = 0;
    if (!(in >> a)) throw std::runtime_error("snapshot truncated");
    cell = static_cast<Attitude>(a);
  }
  snap.config.validate();
  return snap;
}

Snapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open snapshot file: " + path.string());
  return load_snapshot(in);
}

}  // namespace entrench
