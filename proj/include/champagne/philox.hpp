#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every trial of
// a Monte Carlo run owns the stream keyed by the run seed and indexed by the
// trial number, so results never depend on how trials are scheduled.

#include <array>
#include <cstdint>

#include "champagne/vec.hpp"

namespace champagne {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

// Stream of uniform variates for one (seed, stream id) pair.
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t next_u64();
    // Uniform on the open interval (0, 1).
    double uniform();
    std::uint64_t draws() const noexcept { return block_; }

private:
    void refill();

    PhiloxKey key_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    PhiloxCounter buffer_{};
    int used_ = 4;
};

// Uniform direction on the unit circle (d == 2) or unit sphere (d == 3).
Vec3 uniform_direction(PhiloxStream& rng, int d);

// Mixes two 64-bit words into one; used to derive child seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace champagne
