#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "fixtures.hpp"
#include "saffron/serialization.hpp"

using namespace saffron;

namespace {

DesignFile round_trip(const DesignFile& file) {
    std::stringstream buf;
    write_design(buf, file);
    return read_design(buf);
}

}  // namespace

TEST_CASE("left-regular design round trip", "[serialization]") {
    DesignParams params;
    params.K = 128;
    params.eps = 1e-6;
    params.q = 0.02;
    const DesignFile file{
        PoolDesign(1455, LeftRegular{12}, 0x1234567890ABCDEFull,
                   SignatureSpec(std::uint64_t{1} << 32, Sections::Six, 42), params),
        EccSpec{256, 4, 12}, RobustLayout::SixComplemented};
    const DesignFile back = round_trip(file);
    REQUIRE(back.design == file.design);
    REQUIRE(back.ecc == file.ecc);
    REQUIRE(back.layout == file.layout);
}

TEST_CASE("bernoulli design with irrational p round trips bit-exactly", "[serialization]") {
    DesignParams params;
    params.K = 50;
    params.alpha = 1.0;
    const DesignFile file{PoolDesign(1064, BernoulliGraph{1.0 / 50.0}, 7,
                                     SignatureSpec(1 << 16, Sections::Two, 9), params),
                          std::nullopt, std::nullopt};
    const DesignFile back = round_trip(file);
    REQUIRE(back.design == file.design);
    REQUIRE_FALSE(back.ecc.has_value());
    const auto* graph = std::get_if<BernoulliGraph>(&back.design.kind());
    REQUIRE(graph != nullptr);
    REQUIRE(graph->p == 1.0 / 50.0);
}

TEST_CASE("explicit fixture design round trips, arrays included", "[serialization]") {
    const DesignFile file{fixtures::worked_example_design(), std::nullopt, std::nullopt};
    const DesignFile back = round_trip(file);
    REQUIRE(back.design == file.design);
    REQUIRE(back.design.signature().has_fixture());
    REQUIRE(back.design.signature().fixture_s1() == fixtures::kS1);
    REQUIRE(back.design.neighbors_of_item(3) == std::vector<std::uint64_t>{1, 2, 4});
}

TEST_CASE("random designs round trip", "[serialization]") {
    SplitMix rng{0x5E11u};
    for (int trial = 0; trial < 50; ++trial) {
        const unsigned log_n = 4 + static_cast<unsigned>(rng.next_below(12));
        const std::uint64_t n = std::uint64_t{1} << log_n;
        const std::uint64_t M = 10 + rng.next_below(500);
        const Sections sections =
            trial % 3 == 0 ? Sections::Two : (trial % 3 == 1 ? Sections::Four : Sections::Six);
        SignatureSpec sig(n, sections, rng.next());
        GraphKind kind;
        if (trial % 2 == 0) {
            kind = LeftRegular{1 + static_cast<unsigned>(rng.next_below(std::min<std::uint64_t>(M, 20)))};
        } else {
            kind = BernoulliGraph{to_unit(rng.next()) * 0.9 + 0.01};
        }
        const DesignFile file{PoolDesign(M, kind, rng.next(), sig), std::nullopt, std::nullopt};
        REQUIRE(round_trip(file).design == file.design);
    }
}

TEST_CASE("three-plain layout is preserved", "[serialization]") {
    const DesignFile file{PoolDesign(326, BernoulliGraph{0.02}, 3,
                                     SignatureSpec(1 << 16, Sections::Two, 4)),
                          EccSpec{256, 4, 12}, RobustLayout::ThreePlain};
    const DesignFile back = round_trip(file);
    REQUIRE(back.layout == RobustLayout::ThreePlain);
    REQUIRE(back.robust_signature()->layout() == RobustLayout::ThreePlain);
}

TEST_CASE("schema keys are stable", "[serialization]") {
    const DesignFile file{fixtures::worked_example_design(), EccSpec{256, 4, 12},
                          RobustLayout::SixComplemented};
    const nlohmann::json j = design_to_json(file);
    for (const char* key : {"n", "M", "kind", "graph_seed", "signature", "ecc", "layout"})
        REQUIRE(j.contains(key));
    REQUIRE(j["kind"] == "explicit");
    REQUIRE(j["signature"].contains("sections"));
    REQUIRE(j["ecc"]["cn"] == 12);
}

TEST_CASE("malformed design documents are rejected with context", "[serialization]") {
    std::istringstream not_json("{broken");
    REQUIRE_THROWS_AS(read_design(not_json), std::runtime_error);

    const auto reject = [](const char* text) {
        std::istringstream is(text);
        REQUIRE_THROWS_AS(read_design(is), std::runtime_error);
    };
    // missing signature
    reject(R"({"n": 8, "M": 4, "kind": "left_regular", "d": 2, "graph_seed": 1})");
    // unknown kind
    reject(R"({"n": 8, "M": 4, "kind": "mesh", "graph_seed": 1,
              "signature": {"n": 8, "L": 3, "sections": 6, "seed": 1, "complemented": true}})");
    // L inconsistent with n
    reject(R"({"n": 8, "M": 4, "kind": "left_regular", "d": 2, "graph_seed": 1,
              "signature": {"n": 8, "L": 4, "sections": 6, "seed": 1, "complemented": true}})");
    // n mismatch between design and signature
    reject(R"({"n": 16, "M": 4, "kind": "left_regular", "d": 2, "graph_seed": 1,
              "signature": {"n": 8, "L": 3, "sections": 6, "seed": 1, "complemented": true}})");
    // bad sections value
    reject(R"({"n": 8, "M": 4, "kind": "left_regular", "d": 2, "graph_seed": 1,
              "signature": {"n": 8, "L": 3, "sections": 5, "seed": 1, "complemented": true}})");
}
