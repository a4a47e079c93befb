#include "doctest.h"
#include "entrench/spectrum.hpp"

using namespace entrench;

namespace {

// The full L=2 update tables, rows = focal in {-2,-1,1,2}, cols = partner in
// the same order.
constexpr int kAttitudes[4] = {-2, -1, 1, 2};
constexpr int kNoAmp[4][4] = {{-2, -1, -1, -1},
                              {-2, -1, 1, 1},
                              {-1, -1, 1, 2},
                              {1, 1, 1, 2}};
constexpr int kAmp[4][4] = {{-2, -2, -1, -1},
                            {-2, -2, 1, 1},
                            {-1, -1, 2, 2},
                            {1, 1, 2, 2}};

int sign(int v) { return v > 0 ? 1 : -1; }

}  // namespace

TEST_CASE("influence values") {
  CHECK(influence(InfluenceKind::Quadratic, -2, 2) == 4);
  CHECK(influence(InfluenceKind::Uniform, -2, 2) == 1);
  CHECK(influence(InfluenceKind::CoQuadratic, 1, 2) == 4);
  CHECK(influence(InfluenceKind::Linear, -2, 2) == 2);
  CHECK(influence(InfluenceKind::CoLinear, 1, 2) == 2);
  CHECK(influence(InfluenceKind::CoLinear, 2, 2) == 1);

  for (int L = 1; L <= 6; ++L)
    for (int a = -L; a <= L; ++a) {
      if (a == 0) continue;
      for (const auto kind : {InfluenceKind::Uniform, InfluenceKind::Linear,
                              InfluenceKind::Quadratic, InfluenceKind::CoLinear,
                              InfluenceKind::CoQuadratic})
        CHECK(influence(kind, a, L) > 0);
    }
}

TEST_CASE("influence rejects invalid attitudes") {
  CHECK_THROWS_AS(influence(InfluenceKind::Uniform, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(influence(InfluenceKind::Uniform, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(influence(InfluenceKind::Uniform, -3, 2), std::invalid_argument);
  CHECK_THROWS_AS(influence(InfluenceKind::Uniform, 1, 0), std::invalid_argument);
}

TEST_CASE("update examples") {
  CHECK(update_attitude(-1, -1, true, 2) == -2);
  CHECK(update_attitude(2, 1, false, 2) == 1);
  CHECK(update_attitude(1, -2, false, 2) == -1);
  CHECK(update_attitude(-2, -1, true, 2) == -2);
}

TEST_CASE("full update table at L = 2") {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(update_attitude(kAttitudes[i], kAttitudes[j], false, 2) == kNoAmp[i][j]);
      CHECK(update_attitude(kAttitudes[i], kAttitudes[j], true, 2) == kAmp[i][j]);
    }
}

TEST_CASE("update properties across spectra") {
  for (int L = 1; L <= 5; ++L) {
    for (int f = -L; f <= L; ++f) {
      if (f == 0) continue;
      for (int p = -L; p <= L; ++p) {
        if (p == 0) continue;
        for (const bool amp : {false, true}) {
          const int r = update_attitude(f, p, amp, L);
          CHECK(attitude_valid(r, L));                       // closure
          CHECK(update_attitude(-f, -p, amp, L) == -r);      // mirror symmetry
          if (L == 1) CHECK(sign(r) == sign(p));             // voter-model reduction
          if (sign(f) != sign(p))                            // amplification only matters
            CHECK(update_attitude(f, p, !amp, L) == r);      // when opinions agree
        }
        if (f == p) CHECK(update_attitude(f, p, false, L) == f);  // fixed point
      }
    }
  }
}

TEST_CASE("update rejects invalid attitudes") {
  CHECK_THROWS_AS(update_attitude(0, 1, false, 2), std::invalid_argument);
  CHECK_THROWS_AS(update_attitude(1, 0, false, 2), std::invalid_argument);
  CHECK_THROWS_AS(update_attitude(3, 1, false, 2), std::invalid_argument);
  CHECK_THROWS_AS(update_attitude(1, -3, true, 2), std::invalid_argument);
}

TEST_CASE("influence kind names round-trip") {
  for (const auto kind : {InfluenceKind::Uniform, InfluenceKind::Linear, InfluenceKind::Quadratic,
                          InfluenceKind::CoLinear, InfluenceKind::CoQuadratic})
    CHECK(influence_kind_from_string(to_string(kind)) == kind);
  CHECK_THROWS(influence_kind_from_string("parabolic"));
}
