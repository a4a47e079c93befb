#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace entrench {

// An attitude is a nonzero integer in [-L, L]: the sign carries the opinion,
// the magnitude how entrenched it is. There is no zero state; moves across
// the middle jump from +1 to -1 and vice versa.
using Attitude = std::int8_t;

inline bool attitude_valid(int a, int spectrum_bound) {
  return a != 0 && a >= -spectrum_bound && a <= spectrum_bound;
}

enum class InfluenceKind { Uniform, Linear, Quadratic, CoLinear, CoQuadratic };

std::string_view to_string(InfluenceKind kind);
InfluenceKind influence_kind_from_string(std::string_view name);

// Interaction weight exerted by an individual with attitude `a`. All five
// kinds produce small positive integers, so neighbor sampling can use exact
// cumulative integer weights (no floating-point ties).
inline std::uint32_t influence(InfluenceKind kind, int a, int spectrum_bound) {
  if (spectrum_bound < 1)
    throw std::invalid_argument("spectrum bound must be >= 1");
  if (!attitude_valid(a, spectrum_bound))
    throw std::invalid_argument("attitude " + std::to_string(a) +
                                " invalid for spectrum bound " + std::to_string(spectrum_bound));
  const auto m = static_cast<std::uint32_t>(a < 0 ? -a : a);
  const auto co = static_cast<std::uint32_t>(spectrum_bound) + 1u - m;
  switch (kind) {
    case InfluenceKind::Quadratic:   return m * m;
    case InfluenceKind::Linear:      return m;
    case InfluenceKind::Uniform:     return 1u;
    case InfluenceKind::CoLinear:    return co;
    case InfluenceKind::CoQuadratic: return co * co;
  }
  std::abort();  // unreachable
}

// One pairwise update of the focal attitude given its interaction partner.
//
// Without amplification the focal attitude moves one step toward the
// partner's value (no move if they already agree). With amplification it
// moves one step in the direction of the partner's opinion sign, regardless
// of where the partner sits relative to the focal value; at the spectrum
// ends the step is clamped, so a maximally entrenched individual under
// same-sign pressure stays put. The Bernoulli(p_a) amplification draw is the
// caller's job; keeping the flag an input makes this function a pure table.
inline Attitude update_attitude(int focal, int partner, bool amplify, int spectrum_bound) {
  if (!attitude_valid(focal, spectrum_bound) || !attitude_valid(partner, spectrum_bound))
    throw std::invalid_argument("invalid attitude for spectrum bound " +
                                std::to_string(spectrum_bound));
  int dir;
  if (amplify) {
    dir = partner > 0 ? 1 : -1;
  } else {
    if (partner == focal) return static_cast<Attitude>(focal);
    dir = partner > focal ? 1 : -1;
  }
  int next = focal + dir;
  if (next == 0) next = dir;  // skip the missing zero state
  if (next > spectrum_bound || next < -spectrum_bound) next = focal;
  return static_cast<Attitude>(next);
}

}  // namespace entrench
