#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "saffron/prf.hpp"

using namespace saffron;

TEST_CASE("prf is pure and tag-separated", "[prf]") {
    REQUIRE(prf(1, 2, 3) == prf(1, 2, 3));
    REQUIRE(prf(1, 2, 3) != prf(1, 2, 4));
    REQUIRE(prf(1, 2, 3) != prf(1, 3, 3));
    REQUIRE(prf(1, 2, 3) != prf(2, 2, 3));
    REQUIRE(prf(1, 2, 3, 4) != prf(1, 2, 3, 5));
}

TEST_CASE("next_below honors the bound", "[prf]") {
    SplitMix rng{99};
    for (int i = 0; i < 10000; ++i) {
        REQUIRE(rng.next_below(7) < 7);
    }
    SplitMix one{5};
    REQUIRE(one.next_below(1) == 0);
}

TEST_CASE("next_below is close to uniform", "[prf]") {
    SplitMix rng{2024};
    const std::uint64_t bins = 16;
    const int draws = 160000;
    std::vector<int> hist(bins, 0);
    for (int i = 0; i < draws; ++i) ++hist[rng.next_below(bins)];
    const double expected = static_cast<double>(draws) / bins;
    double chi2 = 0;
    for (int h : hist) {
        const double d = h - expected;
        chi2 += d * d / expected;
    }
    // dof 15, mean 15, sd sqrt(30): anything under 50 is unremarkable
    REQUIRE(chi2 < 50.0);
}

TEST_CASE("to_unit stays in [0,1)", "[prf]") {
    SplitMix rng{31};
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.next_unit();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}
