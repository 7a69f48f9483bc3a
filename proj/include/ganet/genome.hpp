#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace ganet {

// Binary edge-selection individual: bit (i, z) switches the candidate edge
// from vertex i to its z-th mapped neighbor. Flat row-major layout.
struct Genome {
    std::size_t n = 0;
    std::size_t q = 0;
    std::vector<std::uint8_t> bits;
    std::optional<double> fitness;

    Genome() = default;
    Genome(std::size_t n_, std::size_t q_) : n(n_), q(q_), bits(n_ * q_, 0) {}

    std::size_t flat_size() const { return n * q; }

    std::uint8_t at(std::size_t i, std::size_t z) const { return bits[i * q + z]; }
    std::uint8_t& at(std::size_t i, std::size_t z) { return bits[i * q + z]; }

    bool same_shape(std::size_t n_, std::size_t q_) const { return n == n_ && q == q_; }
};

} // namespace ganet
