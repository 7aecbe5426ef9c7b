#pragma once

#include <cstdint>
#include <random>

namespace qlb {

// splitmix64 step; used to derive independent per-consumer streams from a
// 64-bit root seed and a counter.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic stream for stream index `counter` under `root_seed`.  Streams
// for distinct counters are statistically independent; each consumer owns its
// stream (never shared across threads).
inline std::mt19937_64 derive_stream(std::uint64_t root_seed, std::uint64_t counter) {
  std::uint64_t s = root_seed;
  (void)splitmix64(s);
  s ^= 0x6a09e667f3bcc909ULL + counter * 0x9e3779b97f4a7c15ULL;
  std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s)),
                    static_cast<std::uint32_t>(splitmix64(s))};
  return std::mt19937_64(seq);
}

}  // namespace qlb
