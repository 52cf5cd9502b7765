#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "fixtures.hpp"
#include "saffron/pool_design.hpp"

using namespace saffron;

namespace {

SignatureSpec sig(std::uint64_t n, std::uint64_t seed = 11) {
    return SignatureSpec(n, Sections::Six, seed);
}

// Test-only reverse enumeration: defective items on each right node.
std::vector<std::set<std::uint64_t>> node_items(const PoolDesign& design,
                                                const std::vector<std::uint64_t>& defective) {
    std::vector<std::set<std::uint64_t>> per_node(design.M());
    for (std::uint64_t i : defective)
        for (std::uint64_t j : design.neighbors_of_item(i)) per_node[j - 1].insert(i);
    return per_node;
}

}  // namespace

TEST_CASE("worked-example graph columns", "[pool_design]") {
    const PoolDesign design = fixtures::worked_example_design();
    REQUIRE(design.neighbors_of_item(1) == std::vector<std::uint64_t>{2, 3});
    REQUIRE(design.neighbors_of_item(3) == std::vector<std::uint64_t>{1, 2, 4});
}

TEST_CASE("left-regular neighbors: exactly d, distinct, sorted, stable", "[pool_design]") {
    const PoolDesign design(977, LeftRegular{12}, 0xD00Du, sig(1 << 20));
    for (std::uint64_t i : {std::uint64_t{1}, std::uint64_t{513}, std::uint64_t{1 << 20}}) {
        const auto nbrs = design.neighbors_of_item(i);
        REQUIRE(nbrs.size() == 12);
        REQUIRE(std::is_sorted(nbrs.begin(), nbrs.end()));
        REQUIRE(std::adjacent_find(nbrs.begin(), nbrs.end()) == nbrs.end());
        REQUIRE(nbrs.front() >= 1);
        REQUIRE(nbrs.back() <= 977);
        REQUIRE(design.neighbors_of_item(i) == nbrs);
    }
}

TEST_CASE("degree histogram: empty support", "[pool_design]") {
    const PoolDesign design = fixtures::worked_example_design();
    const auto hist = right_node_degree_stats(design, {});
    REQUIRE(hist == std::vector<std::size_t>{4});
}

TEST_CASE("degree histogram of the worked example", "[pool_design]") {
    const PoolDesign design = fixtures::worked_example_design();
    // per-node pruned degrees are (1, 3, 2, 2)
    const auto hist = right_node_degree_stats(design, {1, 3, 8});
    REQUIRE(hist == std::vector<std::size_t>{0, 1, 2, 1});
}

TEST_CASE("pruned right degrees approach Poisson(Kd/M)", "[pool_design]") {
    // K=100, d=7, M=700: lambda = 1; total-variation distance of the pooled
    // histogram over 200 seeds stays under 0.05
    const std::uint64_t K = 100, M = 700;
    std::vector<double> pooled(K + 1, 0.0);
    std::uint64_t samples = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const PoolDesign design(M, LeftRegular{7}, seed, sig(1 << 16));
        std::vector<std::uint64_t> defective(K);
        for (std::uint64_t i = 0; i < K; ++i) defective[i] = i + 1;
        const auto hist = right_node_degree_stats(design, defective);
        for (std::size_t d = 0; d < hist.size(); ++d) pooled[d] += hist[d];
        samples += M;
    }
    double tv = 0.0;
    double poisson = std::exp(-1.0);  // lambda = 1
    for (std::size_t d = 0; d <= K; ++d) {
        tv += std::abs(pooled[d] / samples - poisson);
        poisson /= static_cast<double>(d + 1);
    }
    REQUIRE(tv / 2.0 <= 0.05);
}

TEST_CASE("left-regular choices are uniform over right nodes", "[pool_design]") {
    // item 1 under 20000 seeds, M=100, d=12: per-node counts ~ Binomial(20000, 0.12)
    const std::uint64_t M = 100;
    std::vector<double> counts(M, 0.0);
    const int seeds = 20000;
    for (int seed = 0; seed < seeds; ++seed) {
        const PoolDesign design(M, LeftRegular{12}, static_cast<std::uint64_t>(seed),
                                sig(1 << 10));
        for (std::uint64_t j : design.neighbors_of_item(1)) counts[j - 1] += 1.0;
    }
    const double expected = seeds * 12.0 / static_cast<double>(M);
    double chi2 = 0.0;
    for (double c : counts) {
        const double d = c - expected;
        chi2 += d * d / expected;
    }
    // dof 99, mean 99, sd ~14; generous cutoff
    REQUIRE(chi2 < 170.0);
}

TEST_CASE("adjacency symmetry against reverse enumeration", "[pool_design]") {
    const PoolDesign design(50, LeftRegular{5}, 0xBEEFu, sig(256));
    const std::vector<std::uint64_t> defective{3, 77, 100, 256};
    const auto per_node = node_items(design, defective);
    for (std::uint64_t i : defective) {
        for (std::uint64_t j = 1; j <= design.M(); ++j) {
            const auto nbrs = design.neighbors_of_item(i);
            const bool fwd = std::binary_search(nbrs.begin(), nbrs.end(), j);
            const bool rev = per_node[j - 1].count(i) > 0;
            REQUIRE(fwd == rev);
        }
    }
}

TEST_CASE("Bernoulli adjacency is deterministic with mean degree pM", "[pool_design]") {
    const double p = 0.02;
    const PoolDesign design(1000, BernoulliGraph{p}, 0xABCu, sig(1 << 12));
    double total = 0;
    for (std::uint64_t i = 1; i <= 300; ++i) {
        const auto nbrs = design.neighbors_of_item(i);
        REQUIRE(design.neighbors_of_item(i) == nbrs);
        total += static_cast<double>(nbrs.size());
    }
    const double mean = total / 300.0;  // expect 20, sd of the mean ~0.26
    REQUIRE(mean > 18.5);
    REQUIRE(mean < 21.5);
}

TEST_CASE("dense export is guarded above 2^16 items", "[pool_design]") {
    const PoolDesign small(8, LeftRegular{3}, 5, sig(1 << 10));
    REQUIRE(small.dense_matrix().size() == 8);
    const PoolDesign big(8, LeftRegular{3}, 5, sig(std::uint64_t{1} << 17));
    REQUIRE_THROWS_AS(big.dense_matrix(), std::invalid_argument);
}

TEST_CASE("parameter validation", "[pool_design]") {
    REQUIRE_THROWS_AS(PoolDesign(0, LeftRegular{2}, 1, sig(16)), std::invalid_argument);
    REQUIRE_THROWS_AS(PoolDesign(4, LeftRegular{5}, 1, sig(16)), std::invalid_argument);
    REQUIRE_THROWS_AS(PoolDesign(4, BernoulliGraph{0.0}, 1, sig(16)), std::invalid_argument);
    REQUIRE_THROWS_AS(PoolDesign(4, BernoulliGraph{1.5}, 1, sig(16)), std::invalid_argument);
    REQUIRE_THROWS_AS(PoolDesign(4, ExplicitGraph{{{1}, {5}}}, 1, sig(2)), std::invalid_argument);
}
