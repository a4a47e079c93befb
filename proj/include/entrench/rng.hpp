#pragma once

#include <array>
#include <cstdint>
#include <limits>

// Counter-based randomness. Every random decision is produced by a Philox
// block addressed by (seed, domain, step, site, draw index), so a site's
// draws come out identical no matter which thread evaluates it or in what
// order sites are visited. Sequential phases (relocation, partitioning) own
// their own domain and consume draws from a single stream.

namespace entrench::rng {

// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kMulA = 0xD2511F53u, kMulB = 0xCD9E8D57u;
  constexpr std::uint32_t kWeylA = 0x9E3779B9u, kWeylB = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t a = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t b = static_cast<std::uint64_t>(kMulB) * ctr[2];
    ctr = {static_cast<std::uint32_t>(b >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(b),
           static_cast<std::uint32_t>(a >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(a)};
    key[0] += kWeylA;
    key[1] += kWeylB;
  }
  return ctr;
}

enum class Domain : std::uint32_t {
  Generic = 0,
  Init = 1,
  Relocate = 2,
  Interact = 3,
  Partition = 4,
};

class Stream {
 public:
  Stream(std::uint64_t seed, Domain domain, std::uint64_t step, std::uint64_t site)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        base_{0, static_cast<std::uint32_t>(site), static_cast<std::uint32_t>(step),
              static_cast<std::uint32_t>(domain) ^
                  (static_cast<std::uint32_t>(site >> 32) * 0x85EBCA6Bu) ^
                  (static_cast<std::uint32_t>(step >> 32) * 0xC2B2AE35u)} {}

  std::uint32_t u32() {
    if (have_ == 0) {
      auto ctr = base_;
      ctr[0] = next_block_++;
      buf_ = philox4x32(ctr, key_);
      have_ = 4;
    }
    return buf_[4u - have_--];
  }

  std::uint64_t u64() {
    const std::uint64_t lo = u32();
    return (static_cast<std::uint64_t>(u32()) << 32) | lo;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  // Exactly uniform integer in [0, n); unbiased via rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() -
        std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
      x = u64();
    } while (x >= limit);
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> base_;
  std::array<std::uint32_t, 4> buf_{};
  std::uint32_t next_block_ = 0;
  std::uint32_t have_ = 0;
};

// Splitmix64 finalizer; bijective, used for seed derivation and hashing.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Replicate seed for (cell, replicate) under a master seed. Collisions are
// checked by the sweep harness rather than assumed impossible.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t cell, std::uint64_t replicate) {
  return mix64(mix64(mix64(master) ^ (cell * 0xA24BAED4963EE407ull)) ^
               (replicate * 0x9FB21C651E98DF25ull));
}

}  // namespace entrench::rng
