#pragma once

#include <array>
#include <cstdint>

namespace bkgtfk {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Stateless: the output block is a pure function of (counter, key), which is what
/// lets every Monte Carlo path own an independent, reproducible stream.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept;
};

/// Standard-normal stream keyed by (seed, stream id).
///
/// Block k of stream s is Philox(counter = (k_lo, k_hi, s_lo, s_hi), key = seed). Each
/// block yields two uniforms of 53 bits and, through Box-Muller, two normals.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    double next() noexcept;
    /// Uniform on the open interval (0, 1).
    double next_uniform() noexcept;

private:
    void refill() noexcept;

    Philox4x32::Key key_;
    std::uint64_t stream_id_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> bits_{};
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
    int uniforms_left_ = 0;
};

}  // namespace bkgtfk
