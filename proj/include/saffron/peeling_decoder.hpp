#pragma once

// Iterative peeling decoder. Pass 1 tests every right node for a singleton;
// afterwards a FIFO worklist revisits the neighbor nodes of each newly
// identified item and attempts doubleton resolution on nodes with exactly one
// identified neighbor. Nodes that accumulate two or more identified neighbors
// are saturated and never attempted again. The single-pass singleton-only
// decoder reuses the first pass.
//
// The worklist core is shared with the noisy decoder through a node-decoder
// policy; only singleton detection and doubleton resolution differ.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "saffron/bitvec.hpp"
#include "saffron/channel.hpp"
#include "saffron/pool_design.hpp"
#include "saffron/signature.hpp"

namespace saffron {

enum class ResolutionKind { Singleton, Doubleton };

struct DecodeEvent {
    std::uint64_t node;  // 1-based right node
    std::uint64_t item;  // declared defective item
    ResolutionKind kind;
    unsigned iteration;  // 1 = singleton pass
};

struct DecodeResult {
    std::vector<std::uint64_t> identified;  // sorted
    unsigned iterations = 0;
    std::uint64_t resolved_singletons = 0;
    std::uint64_t resolved_doubletons = 0;
    std::uint64_t unresolved_right_nodes = 0;
    std::uint64_t decode_attempts = 0;  // node-decode invocations
    std::vector<DecodeEvent> events;    // declaration order

    bool contains(std::uint64_t item) const {
        return std::binary_search(identified.begin(), identified.end(), item);
    }
};

// Items declared by the decoder that are absent from the ground truth.
inline std::vector<std::uint64_t> false_positive_audit(const DecodeResult& result,
                                                       const SupportVector& truth) {
    std::vector<std::uint64_t> wrong;
    for (std::uint64_t item : result.identified)
        if (!truth.contains(item)) wrong.push_back(item);
    return wrong;
}

// Noiseless singleton test: the measurement weight must be exactly
// sections/2 * L, every complement pair must be coherent, and (with four or
// six sections) the decoded index must satisfy the check equations. The weight
// test alone is exact for true OR-measurements; the remaining checks guard
// arbitrary input vectors.
inline std::optional<std::uint64_t> detect_singleton(const BitVec& z, const SignatureSpec& spec) {
    const unsigned L = spec.L();
    const unsigned sections = section_count(spec.sections());
    if (z.size() != spec.column_bits())
        throw std::invalid_argument("detect_singleton: measurement length mismatch");
    if (z.weight() != std::size_t{sections / 2} * L) return std::nullopt;
    const std::uint64_t block_mask = (L == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << L) - 1;
    for (unsigned pair = 0; pair < sections / 2; ++pair) {
        const std::uint64_t plain = z.extract64(std::size_t{2} * pair * L, L);
        const std::uint64_t comp = z.extract64((std::size_t{2} * pair + 1) * L, L);
        if ((plain ^ comp) != block_mask) return std::nullopt;
    }
    const std::uint64_t item = decode_binary(z, 0, L) + 1;
    if (sections >= 4) {
        const auto [s1, s2] = spec.check_sequences(item);
        if (decode_binary(z, std::size_t{2} * L, L) + 1 != s1) return std::nullopt;
        if (sections >= 6 && decode_binary(z, std::size_t{4} * L, L) + 1 != s2) return std::nullopt;
    }
    return item;
}

namespace detail {

// Read the unknown item's L-bit block out of a (plain, complement) section
// pair, using the known item's block as the mask: where the known bit is 0 the
// plain section carries the unknown bit, where it is 1 the complement section
// carries its inverse. All register arithmetic; returns the block's value.
inline std::uint64_t extract_partner_block(const BitVec& z, std::uint64_t known_item,
                                           std::size_t plain_base, std::size_t comp_base,
                                           unsigned L) {
    const std::uint64_t mask = index_block_bits(known_item, L);
    const std::uint64_t plain = z.extract64(plain_base, L);
    const std::uint64_t comp = z.extract64(comp_base, L);
    const std::uint64_t low = (L == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << L) - 1;
    const std::uint64_t bits = ((plain & ~mask) | (~comp & mask)) & low;
    return reverse_low_bits(bits, L);
}

}  // namespace detail

// Doubleton resolution under the hypothesis that `known` and exactly one other
// item feed this node. Extracts l1 from sections 1/2, l2 from 3/4 and (six
// sections) l3 from 5/6, then requires l2 = s1(l1), l3 = s2(l1) and l1 !=
// known.
inline std::optional<std::uint64_t> resolve_doubleton(const BitVec& z, std::uint64_t known,
                                                      const SignatureSpec& spec) {
    const unsigned L = spec.L();
    const unsigned sections = section_count(spec.sections());
    if (sections < 4)
        throw std::invalid_argument("resolve_doubleton: needs at least four sections");
    if (z.size() != spec.column_bits())
        throw std::invalid_argument("resolve_doubleton: measurement length mismatch");
    spec.check_index(known);

    const auto [known_s1, known_s2] = spec.check_sequences(known);
    const std::uint64_t l1 = detail::extract_partner_block(z, known, 0, L, L) + 1;
    if (l1 == known) return std::nullopt;

    const std::uint64_t l2 =
        detail::extract_partner_block(z, known_s1, std::size_t{2} * L, std::size_t{3} * L, L) + 1;
    const auto [cand_s1, cand_s2] = spec.check_sequences(l1);
    if (l2 != cand_s1) return std::nullopt;

    if (sections >= 6) {
        const std::uint64_t l3 = detail::extract_partner_block(
            z, known_s2, std::size_t{4} * L, std::size_t{5} * L, L) + 1;
        if (l3 != cand_s2) return std::nullopt;
    }
    return l1;
}

struct NoiselessNodeDecoder {
    const SignatureSpec& spec;
    bool doubletons_enabled() const { return section_count(spec.sections()) >= 4; }
    std::optional<std::uint64_t> singleton(const BitVec& z) const {
        return detect_singleton(z, spec);
    }
    std::optional<std::uint64_t> doubleton(const BitVec& z, std::uint64_t known) const {
        return resolve_doubleton(z, known, spec);
    }
};

namespace detail {

template <class NodeDecoder>
DecodeResult peel_with(const MeasurementSet& ms, const PoolDesign& design,
                       const NodeDecoder& decoder, std::span<const std::uint64_t> node_order,
                       bool worklist_enabled) {
    const std::uint64_t M = design.M();
    if (ms.vectors.size() != M) throw std::invalid_argument("peel: measurement count mismatch");

    struct NodeState {
        std::uint64_t first_identified = 0;
        std::uint32_t identified_count = 0;
        bool resolved = false;
    };
    std::vector<NodeState> state(M);
    std::unordered_set<std::uint64_t> identified;
    identified.reserve(64);
    std::vector<std::pair<std::uint64_t, unsigned>> worklist;  // (node, trigger iteration)
    std::size_t worklist_head = 0;
    DecodeResult result;
    unsigned max_level = 0;

    auto declare = [&](std::uint64_t item, std::uint64_t node, ResolutionKind kind,
                       unsigned level) {
        if (!identified.insert(item).second) return;  // redeclaration is a no-op
        result.events.push_back({node, item, kind, level});
        if (kind == ResolutionKind::Singleton) {
            ++result.resolved_singletons;
        } else {
            ++result.resolved_doubletons;
        }
        if (level > max_level) max_level = level;
        for (std::uint64_t nb : design.neighbors_of_item(item)) {
            NodeState& ns = state[nb - 1];
            if (ns.identified_count++ == 0) ns.first_identified = item;
            if (worklist_enabled && !ns.resolved) worklist.emplace_back(nb, level);
        }
    };

    // pass 1: singleton detection on every node
    auto run_pass1 = [&](std::uint64_t node) {
        ++result.decode_attempts;
        if (auto item = decoder.singleton(ms.vectors[node - 1])) {
            state[node - 1].resolved = true;
            declare(*item, node, ResolutionKind::Singleton, 1);
        }
    };
    if (node_order.empty()) {
        for (std::uint64_t k = 1; k <= M; ++k) run_pass1(k);
    } else {
        if (node_order.size() != M) throw std::invalid_argument("peel: node order must cover all nodes");
        for (std::uint64_t k : node_order) run_pass1(k);
    }

    // worklist-driven doubleton resolution
    while (worklist_head < worklist.size()) {
        const auto [node, trigger_level] = worklist[worklist_head++];
        NodeState& ns = state[node - 1];
        if (ns.resolved) continue;
        if (ns.identified_count != 1) continue;  // pending or saturated
        ++result.decode_attempts;
        if (auto item = decoder.doubleton(ms.vectors[node - 1], ns.first_identified)) {
            ns.resolved = true;
            declare(*item, node, ResolutionKind::Doubleton, trigger_level + 1);
        }
    }

    result.identified.assign(identified.begin(), identified.end());
    std::sort(result.identified.begin(), result.identified.end());
    result.iterations = (M > 0) ? std::max(1u, max_level) : 0;
    for (const NodeState& ns : state)
        if (!ns.resolved) ++result.unresolved_right_nodes;
    return result;
}

}  // namespace detail

inline DecodeResult peel(const MeasurementSet& ms, const PoolDesign& design,
                         std::span<const std::uint64_t> node_order = {}) {
    const SignatureSpec& spec = design.signature();
    if (section_count(spec.sections()) < 4)
        throw std::invalid_argument("peel: two-section designs decode with decode_singleton_only");
    NoiselessNodeDecoder decoder{spec};
    return detail::peel_with(ms, design, decoder, node_order, true);
}

// Single-stage variant: take the union of all singleton detections, no
// iteration.
inline DecodeResult decode_singleton_only(const MeasurementSet& ms, const PoolDesign& design) {
    NoiselessNodeDecoder decoder{design.signature()};
    return detail::peel_with(ms, design, decoder, {}, false);
}

}  // namespace saffron
