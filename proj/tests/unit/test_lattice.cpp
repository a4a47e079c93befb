#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "entrench/lattice.hpp"

using namespace entrench;

TEST_CASE("moore neighbors on a 3x3 grid cover every other site") {
  const TorusGeometry g{3, 3};
  const auto nb = moore_neighbors(g, 4);  // center
  CHECK(nb == std::array<std::uint32_t, 8>{0, 1, 2, 3, 5, 6, 7, 8});
}

TEST_CASE("moore neighbors wrap in both directions") {
  const TorusGeometry g{101, 101};
  const auto nb = moore_neighbors(g, 0);
  CHECK(std::find(nb.begin(), nb.end(), 100u * 101u + 100u) != nb.end());
  CHECK(nb[0] == 100u * 101u + 100u);  // canonical order starts up-left
}

TEST_CASE("moore neighborhood is symmetric, distinct, and never self") {
  const TorusGeometry g{5, 7};
  for (std::uint32_t site = 0; site < g.size(); ++site) {
    const auto nb = moore_neighbors(g, site);
    const std::set<std::uint32_t> uniq(nb.begin(), nb.end());
    CHECK(uniq.size() == 8);
    CHECK(uniq.count(site) == 0);
    for (const auto other : nb) {
      const auto back = moore_neighbors(g, other);
      CHECK(std::find(back.begin(), back.end(), site) != back.end());
    }
  }
}

TEST_CASE("moore neighbors rejects bad input") {
  CHECK_THROWS(moore_neighbors({3, 3}, 9));
  CHECK_THROWS(TorusGeometry{2, 5}.validate());
  CHECK_THROWS(NeighborTable(TorusGeometry{5, 2}));
}

TEST_CASE("uniform init draws every attitude near its expected frequency") {
  const TorusGeometry g{101, 101};
  const auto config = uniform_init(g, 2, 7);
  config.validate();
  std::uint64_t counts[4] = {};
  for (const auto a : config.cells) ++counts[a < 0 ? a + 2 : a + 1];
  for (const auto c : counts)
    CHECK(std::abs(static_cast<double>(c) / g.size() - 0.25) < 0.02);
}

TEST_CASE("uniform init at L = 1 uses only the two opinions") {
  const auto config = uniform_init({11, 11}, 1, 3);
  for (const auto a : config.cells) CHECK((a == 1 || a == -1));
}

TEST_CASE("uniform init is seed-deterministic") {
  const TorusGeometry g{21, 21};
  CHECK(uniform_init(g, 2, 5) == uniform_init(g, 2, 5));
  CHECK(uniform_init(g, 2, 5) != uniform_init(g, 2, 6));
}

TEST_CASE("droplet interior count matches a brute-force point count") {
  const TorusGeometry g{101, 101};
  const double radius = 25.0;
  const auto config = droplet_init(g, 2, radius);

  std::uint64_t expected = 0;  // lattice points within the radius of the center
  for (int r = 0; r < 101; ++r)
    for (int c = 0; c < 101; ++c)
      if ((r - 50) * (r - 50) + (c - 50) * (c - 50) <= radius * radius) ++expected;

  std::uint64_t inside = 0, outside = 0;
  for (const auto a : config.cells) {
    if (a == 2) ++inside;
    if (a == -2) ++outside;
  }
  CHECK(inside == expected);
  CHECK(inside + outside == g.size());
}

TEST_CASE("tiny droplet is a single center cell") {
  const auto config = droplet_init({101, 101}, 2, 0.5);
  std::uint64_t inside = 0;
  for (const auto a : config.cells) inside += a == 2;
  CHECK(inside == 1);
  CHECK(config.cells[50 * 101 + 50] == 2);
}

TEST_CASE("droplet is symmetric under quarter turns on odd square grids") {
  const TorusGeometry g{31, 31};
  const auto config = droplet_init(g, 2, 9.0);
  for (std::uint32_t r = 0; r < 31; ++r)
    for (std::uint32_t c = 0; c < 31; ++c)
      CHECK(config.cells[g.site(r, c)] == config.cells[g.site(c, 30 - r)]);
}

TEST_CASE("droplet rejects an oversized radius") {
  CHECK_THROWS(droplet_init({41, 41}, 2, 21.0));
}

TEST_CASE("snapshots round-trip bit-exactly") {
  const auto config = uniform_init({9, 5}, 3, 11);
  std::stringstream first, second;
  save_snapshot(first, config, 17);
  const auto loaded = load_snapshot(first);
  CHECK(loaded.step == 17);
  CHECK(loaded.config == config);
  save_snapshot(second, loaded.config, loaded.step);
  first.seekg(0);
  CHECK(first.str() == second.str());
}

TEST_CASE("snapshot header carries geometry and spectrum bound") {
  std::stringstream out;
  save_snapshot(out, droplet_init({5, 3}, 2, 0.5), 0);
  std::string header;
  std::getline(out, header);
  CHECK(header == "5 3 2 0");
}
