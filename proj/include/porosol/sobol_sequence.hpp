#ifndef POROSOL_SOBOL_SEQUENCE_HPP
#define POROSOL_SOBOL_SEQUENCE_HPP

#include <cstdint>
#include <vector>

namespace porosol {

/// Gray-code Sobol' low-discrepancy sequence (Joe-Kuo direction numbers,
/// up to 20 dimensions). A non-zero seed applies a per-dimension digital XOR
/// scramble, which preserves the dyadic equidistribution of the sequence;
/// identical seeds give bit-identical streams. Components carry a half-ulp
/// offset so no coordinate is ever exactly 0 or 1.
class SobolSequence {
public:
    static constexpr int kMaxDimensions = 20;

    explicit SobolSequence(int dimensions, std::uint64_t scramble_seed = 0);

    int dimensions() const { return dims_; }

    /// Next point, components in (0, 1).
    void next(std::vector<double>& point);

private:
    int dims_;
    std::uint64_t index_ = 0;
    std::vector<std::uint32_t> state_;
    std::vector<std::uint32_t> scramble_;
    std::vector<std::uint32_t> direction_;  // [dim * kBits + bit]
};

}  // namespace porosol

#endif
