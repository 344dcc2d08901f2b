#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "porosol/sobol_sequence.hpp"

using namespace porosol;

TEST_CASE("aligned blocks are dyadic permutations in every dimension") {
    // The first 2^k points of a valid Sobol' sequence hit every cell of the
    // dyadic grid exactly once per dimension; broken direction numbers break
    // this immediately.
    const int k = 7;
    const int n_points = 1 << k;
    for (std::uint64_t seed : {0ull, 12345ull}) {
        SobolSequence seq(16, seed);
        std::vector<std::set<int>> seen(16);
        std::vector<double> pt;
        for (int i = 0; i < n_points; ++i) {
            seq.next(pt);
            for (int d = 0; d < 16; ++d) {
                CHECK(pt[d] > 0.0);
                CHECK(pt[d] < 1.0);
                seen[d].insert(static_cast<int>(pt[d] * n_points));
            }
        }
        for (int d = 0; d < 16; ++d) {
            CHECK(seen[d].size() == static_cast<std::size_t>(n_points));
        }
    }
}

TEST_CASE("block means are balanced") {
    SobolSequence seq(20, 7u);
    const int n = 4096;
    std::vector<double> mean(20, 0.0);
    std::vector<double> pt;
    for (int i = 0; i < n; ++i) {
        seq.next(pt);
        for (int d = 0; d < 20; ++d) mean[d] += pt[d];
    }
    for (int d = 0; d < 20; ++d) {
        CHECK(mean[d] / n == doctest::Approx(0.5).epsilon(1e-3));
    }
}

TEST_CASE("seed controls the scramble deterministically") {
    std::vector<double> a, b, c;
    SobolSequence s1(8, 42), s2(8, 42), s3(8, 43);
    for (int i = 0; i < 100; ++i) {
        s1.next(a);
        s2.next(b);
        s3.next(c);
        CHECK(a == b);
    }
    // different seed, different stream
    s1 = SobolSequence(8, 42);
    s3 = SobolSequence(8, 43);
    s1.next(a);
    s3.next(c);
    CHECK(a != c);
}

TEST_CASE("dimension limits enforced") {
    CHECK_THROWS_AS(SobolSequence(0), std::invalid_argument);
    CHECK_THROWS_AS(SobolSequence(21), std::invalid_argument);
    CHECK_NOTHROW(SobolSequence(20));
}
