#pragma once

#include <cstdint>
#include <random>

namespace gw::rng {

// Deterministic per-replica stream: mt19937_64 seeded through seed_seq from
// (master seed, stream index).  Both algorithms are pinned by the standard,
// so a (seed, stream) pair yields the same draws on every platform and the
// assignment of replicas to threads cannot change results.
class StreamRng {
  public:
    explicit StreamRng(std::uint64_t master, std::uint64_t stream = 0) {
        std::seed_seq seq{static_cast<std::uint32_t>(master & 0xffffffffu),
                          static_cast<std::uint32_t>(master >> 32),
                          static_cast<std::uint32_t>(stream & 0xffffffffu),
                          static_cast<std::uint32_t>(stream >> 32)};
        eng_.seed(seq);
    }

    std::uint64_t next() { return eng_(); }

    // uniform on [0,1), 53-bit resolution
    double u01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform on (0,1); safe under log()
    double u01_open() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

  private:
    std::mt19937_64 eng_;
};

} // namespace gw::rng
