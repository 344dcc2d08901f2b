#include "porosol/sobol_sequence.hpp"

#include <stdexcept>

namespace porosol {

namespace {

constexpr int kBits = 31;

// Primitive polynomial degree, encoded interior coefficients, and initial
// direction numbers per dimension (Joe & Kuo table, dimensions 2..20; the
// first dimension is the base-2 van der Corput sequence).
struct DimensionSpec {
    int degree;
    std::uint32_t poly;
    std::uint32_t m[7];
};

constexpr DimensionSpec kDims[] = {
    {1, 0, {1, 0, 0, 0, 0, 0, 0}},
    {2, 1, {1, 3, 0, 0, 0, 0, 0}},
    {3, 1, {1, 3, 1, 0, 0, 0, 0}},
    {3, 2, {1, 1, 1, 0, 0, 0, 0}},
    {4, 1, {1, 1, 3, 3, 0, 0, 0}},
    {4, 4, {1, 3, 5, 13, 0, 0, 0}},
    {5, 2, {1, 1, 5, 5, 17, 0, 0}},
    {5, 4, {1, 1, 5, 5, 5, 0, 0}},
    {5, 7, {1, 1, 7, 11, 19, 0, 0}},
    {5, 11, {1, 1, 5, 1, 1, 0, 0}},
    {5, 13, {1, 1, 1, 3, 11, 0, 0}},
    {5, 14, {1, 3, 5, 5, 31, 0, 0}},
    {6, 1, {1, 3, 3, 9, 7, 49, 0}},
    {6, 13, {1, 1, 1, 15, 21, 21, 0}},
    {6, 16, {1, 3, 1, 13, 27, 49, 0}},
    {6, 19, {1, 1, 1, 15, 7, 5, 0}},
    {6, 22, {1, 3, 1, 15, 13, 25, 0}},
    {6, 25, {1, 1, 5, 5, 19, 61, 0}},
    {7, 1, {1, 3, 7, 11, 23, 15, 57}},
};

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

SobolSequence::SobolSequence(int dimensions, std::uint64_t scramble_seed) : dims_(dimensions) {
    if (dimensions < 1 || dimensions > kMaxDimensions) {
        throw std::invalid_argument("SobolSequence: dimensions must be in [1, 20]");
    }
    direction_.assign(static_cast<std::size_t>(dims_) * kBits, 0);
    state_.assign(dims_, 0);
    scramble_.assign(dims_, 0);

    // Dimension 0: van der Corput, v_k = 2^(kBits-1-k).
    for (int k = 0; k < kBits; ++k) {
        direction_[k] = 1u << (kBits - 1 - k);
    }
    for (int d = 1; d < dims_; ++d) {
        const DimensionSpec& spec = kDims[d - 1];
        const int s = spec.degree;
        std::uint32_t* v = &direction_[static_cast<std::size_t>(d) * kBits];
        for (int k = 0; k < s; ++k) {
            // initial numbers must be odd and below 2^(k+1)
            if ((spec.m[k] & 1u) == 0 || spec.m[k] >= (2u << k)) {
                throw std::logic_error("SobolSequence: invalid direction number table");
            }
            v[k] = spec.m[k] << (kBits - 1 - k);
        }
        for (int k = s; k < kBits; ++k) {
            std::uint32_t value = v[k - s] ^ (v[k - s] >> s);
            for (int j = 1; j < s; ++j) {
                if ((spec.poly >> (s - 1 - j)) & 1u) value ^= v[k - j];
            }
            v[k] = value;
        }
    }

    if (scramble_seed != 0) {
        std::uint64_t st = scramble_seed;
        for (int d = 0; d < dims_; ++d) {
            scramble_[d] = static_cast<std::uint32_t>(splitmix64(st) >> (64 - kBits));
        }
    }
}

void SobolSequence::next(std::vector<double>& point) {
    point.resize(dims_);
    // Emit the current Gray-code state, then advance. Emitting before the
    // update keeps every aligned block of 2^k consecutive points a dyadic
    // net, which the estimators rely on.
    for (int d = 0; d < dims_; ++d) {
        const std::uint32_t bits = state_[d] ^ scramble_[d];
        point[d] = (static_cast<double>(bits) + 0.5) / 2147483648.0;  // 2^31
    }
    std::uint64_t c = index_;
    int bit = 0;
    while (c & 1ull) {
        c >>= 1;
        ++bit;
    }
    if (bit >= kBits) throw std::runtime_error("SobolSequence: sequence exhausted");
    for (int d = 0; d < dims_; ++d) {
        state_[d] ^= direction_[static_cast<std::size_t>(d) * kBits + bit];
    }
    ++index_;
}

}  // namespace porosol
