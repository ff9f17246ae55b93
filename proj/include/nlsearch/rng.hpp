#pragma once

#include <cstdint>

namespace nlsearch {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Tiny deterministic generator; used instead of <random> engines where
/// cross-platform byte-stability matters (std::shuffle and the standard
/// distributions are implementation-defined).
class SplitMix {
  public:
    explicit SplitMix(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() { return splitmix64_next(state_); }
    std::uint64_t bounded(std::uint64_t n) { return n == 0 ? 0 : next() % n; }
    double uniform01() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }

  private:
    std::uint64_t state_;
};

}  // namespace nlsearch
