#pragma once

// Shared n = 8 worked-example fixture: explicit check sequences, the explicit
// (not left-regular) 4-node pooling graph, and the four expected right-node
// measurement vectors.

#include <cstdint>
#include <vector>

#include "saffron/channel.hpp"
#include "saffron/pool_design.hpp"
#include "saffron/signature.hpp"

namespace fixtures {

inline const std::vector<std::uint64_t> kS1{5, 2, 4, 8, 7, 1, 3, 6};
inline const std::vector<std::uint64_t> kS2{3, 1, 5, 6, 3, 8, 2, 7};

inline saffron::SignatureSpec worked_example_signature() {
    return saffron::SignatureSpec::with_fixture(8, saffron::Sections::Six, kS1, kS2);
}

// Columns of the 4 x 8 incidence matrix: item i -> right nodes.
inline const std::vector<std::vector<std::uint64_t>> kGraphColumns{
    {2, 3}, {1, 2, 4}, {1, 2, 4}, {1, 2}, {3, 4}, {1, 4}, {2, 3}, {2, 3, 4}};

inline saffron::PoolDesign worked_example_design() {
    return saffron::PoolDesign(4, saffron::ExplicitGraph{kGraphColumns}, 0,
                               worked_example_signature());
}

inline saffron::SupportVector worked_example_support() {
    return saffron::SupportVector(8, {1, 3, 8});
}

// The four displayed measurement vectors, as bit strings.
inline const std::vector<std::string> kZBits{
    "010101011100100011",
    "111111111111110111",
    "111111101011110101",
    "111101111110110011",
};

}  // namespace fixtures
