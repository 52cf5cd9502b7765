#pragma once

// Bipartite pooling graph between n items (left) and M right nodes. Adjacency
// is derived from a PRF in both the left-regular and Bernoulli ensembles, so
// the M x n incidence matrix is never materialized; an explicit-matrix fixture
// exists for golden tests.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "saffron/prf.hpp"
#include "saffron/signature.hpp"

namespace saffron {

struct LeftRegular {
    unsigned d;
    bool operator==(const LeftRegular&) const = default;
};

struct BernoulliGraph {
    double p;
    bool operator==(const BernoulliGraph&) const = default;
};

struct ExplicitGraph {
    // item_neighbors[i-1] lists the right nodes of item i, 1-based.
    std::vector<std::vector<std::uint64_t>> item_neighbors;
    bool operator==(const ExplicitGraph&) const = default;
};

using GraphKind = std::variant<LeftRegular, BernoulliGraph, ExplicitGraph>;

// Scheme-level parameters a design was derived from; carried for serialization
// and reporting only.
struct DesignParams {
    std::optional<std::uint64_t> K;
    std::optional<double> eps;
    std::optional<double> alpha;
    std::optional<double> q;
    bool operator==(const DesignParams&) const = default;
};

class PoolDesign {
public:
    PoolDesign(std::uint64_t M, GraphKind kind, std::uint64_t graph_seed, SignatureSpec signature,
               DesignParams params = {})
        : M_(M),
          kind_(std::move(kind)),
          graph_seed_(graph_seed),
          signature_(std::move(signature)),
          params_(params) {
        if (M_ == 0) throw std::invalid_argument("PoolDesign: M must be positive");
        if (const auto* lr = std::get_if<LeftRegular>(&kind_)) {
            if (lr->d == 0 || lr->d > M_)
                throw std::invalid_argument("PoolDesign: left degree must be in [1, M]");
        } else if (const auto* be = std::get_if<BernoulliGraph>(&kind_)) {
            if (!(be->p > 0.0) || be->p > 1.0)
                throw std::invalid_argument("PoolDesign: connection probability must be in (0, 1]");
        } else {
            const auto& ex = std::get<ExplicitGraph>(kind_);
            if (ex.item_neighbors.size() != signature_.n())
                throw std::invalid_argument("PoolDesign: explicit graph must list all n items");
            for (const auto& nbrs : ex.item_neighbors)
                for (std::uint64_t j : nbrs)
                    if (j < 1 || j > M_)
                        throw std::invalid_argument("PoolDesign: explicit neighbor out of range");
        }
    }

    std::uint64_t n() const { return signature_.n(); }
    std::uint64_t M() const { return M_; }
    const GraphKind& kind() const { return kind_; }
    std::uint64_t graph_seed() const { return graph_seed_; }
    const SignatureSpec& signature() const { return signature_; }
    const DesignParams& params() const { return params_; }

    // Right-node neighbors of item i: sorted, distinct, 1-based. Pure in
    // (graph_seed, i); encode and decode sides see the same sets.
    std::vector<std::uint64_t> neighbors_of_item(std::uint64_t i) const {
        signature_.check_index(i);
        if (const auto* lr = std::get_if<LeftRegular>(&kind_)) {
            std::vector<std::uint64_t> nbrs;
            nbrs.reserve(lr->d);
            SplitMix rng{prf(graph_seed_, seed_domain::kGraph, i)};
            while (nbrs.size() < lr->d) {
                const std::uint64_t cand = 1 + rng.next_below(M_);
                if (std::find(nbrs.begin(), nbrs.end(), cand) == nbrs.end()) nbrs.push_back(cand);
            }
            std::sort(nbrs.begin(), nbrs.end());
            return nbrs;
        }
        if (const auto* be = std::get_if<BernoulliGraph>(&kind_)) {
            std::vector<std::uint64_t> nbrs;
            for (std::uint64_t j = 1; j <= M_; ++j) {
                if (to_unit(prf(graph_seed_, seed_domain::kBernoulli, i, j)) < be->p)
                    nbrs.push_back(j);
            }
            return nbrs;
        }
        return std::get<ExplicitGraph>(kind_).item_neighbors[i - 1];
    }

    // Dense M x n incidence matrix, guarded: refuse anything big.
    std::vector<std::vector<std::uint8_t>> dense_matrix() const {
        if (n() > 65536)
            throw std::invalid_argument("PoolDesign: dense export refused above n = 2^16");
        std::vector<std::vector<std::uint8_t>> T(M_, std::vector<std::uint8_t>(n(), 0));
        for (std::uint64_t i = 1; i <= n(); ++i)
            for (std::uint64_t j : neighbors_of_item(i)) T[j - 1][i - 1] = 1;
        return T;
    }

    bool operator==(const PoolDesign&) const = default;

private:
    std::uint64_t M_;
    GraphKind kind_;
    std::uint64_t graph_seed_;
    SignatureSpec signature_;
    DesignParams params_;
};

// Histogram of pruned right-node degrees over a defective set: index k counts
// right nodes adjacent to exactly k defective items.
inline std::vector<std::size_t> right_node_degree_stats(const PoolDesign& design,
                                                        const std::vector<std::uint64_t>& defective) {
    std::vector<std::size_t> degree(design.M(), 0);
    for (std::uint64_t item : defective)
        for (std::uint64_t j : design.neighbors_of_item(item)) ++degree[j - 1];
    std::vector<std::size_t> hist(defective.size() + 1, 0);
    for (std::size_t d : degree) ++hist[d];
    return hist;
}

}  // namespace saffron
