#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "entrench/spectrum.hpp"

namespace entrench {

// Torus grid, row-major site indexing: site = row * width + col.
struct TorusGeometry {
  std::uint32_t width = 101;
  std::uint32_t height = 101;

  std::uint64_t size() const {
    return static_cast<std::uint64_t>(width) * height;
  }
  std::uint32_t site(std::uint32_t row, std::uint32_t col) const {
    return row * width + col;
  }
  std::uint32_t row(std::uint32_t site) const { return site / width; }
  std::uint32_t col(std::uint32_t site) const { return site % width; }

  void validate() const;  // Moore neighborhoods need width, height >= 3

  bool operator==(const TorusGeometry&) const = default;
};

// The 8 toroidally wrapped Moore neighbors in canonical row-major offset
// order: (-1,-1) (-1,0) (-1,+1) (0,-1) (0,+1) (+1,-1) (+1,0) (+1,+1).
std::array<std::uint32_t, 8> moore_neighbors(const TorusGeometry& geom, std::uint32_t site);

// Flat per-site neighbor lookup, built once per geometry; the step engine
// reads it instead of recomputing wraparound every visit.
class NeighborTable {
 public:
  explicit NeighborTable(const TorusGeometry& geom);
  const std::uint32_t* row(std::uint32_t site) const { return data_.data() + 8ull * site; }
  const TorusGeometry& geometry() const { return geom_; }

 private:
  TorusGeometry geom_;
  std::vector<std::uint32_t> data_;
};

// One attitude per site; snapshots are immutable between steps and the step
// engine writes only into a fresh buffer.
struct Configuration {
  TorusGeometry geometry;
  int spectrum_bound = 2;
  std::vector<Attitude> cells;

  Configuration() = default;
  Configuration(const TorusGeometry& g, int bound)
      : geometry(g), spectrum_bound(bound), cells(g.size(), Attitude{1}) {}

  Attitude operator[](std::uint64_t site) const { return cells[site]; }
  void validate() const;

  bool operator==(const Configuration&) const = default;
};

// Every cell drawn independently and uniformly from the 2L attitudes.
Configuration uniform_init(const TorusGeometry& geom, int spectrum_bound, std::uint64_t seed);

// Circular droplet of `inside` attitudes (default +L) within Euclidean
// distance `radius` of the center cell, surrounded by `outside` (default -L).
Configuration droplet_init(const TorusGeometry& geom, int spectrum_bound, double radius,
                           int inside = 0, int outside = 0);

// Grid snapshot file: header "W H L step", then height rows of width signed
// integers. Round-trips bit-exactly.
struct Snapshot {
  Configuration config;
  std::uint64_t step = 0;
};

void save_snapshot(std::ostream& out, const Configuration& config, std::uint64_t step);
void save_snapshot(const std::filesystem::path& path, const Configuration& config,
                   std::uint64_t step);
Snapshot load_snapshot(std::istream& in);
Snapshot load_snapshot(const std::filesystem::path& path);

}  // namespace entrench
