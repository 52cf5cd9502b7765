#pragma once

// Design-file JSON: {n, M, kind, d|p|columns, graph_seed, signature:{...},
// ecc?:{cq,ck,cn}, layout?, params?:{K,eps,alpha,q}}. Round-trips bit-exactly:
// integers verbatim, floats with 17 significant digits.

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "saffron/ecc_robust.hpp"
#include "saffron/pool_design.hpp"
#include "saffron/signature.hpp"

namespace saffron {

struct DesignFile {
    PoolDesign design;
    std::optional<EccSpec> ecc;
    std::optional<RobustLayout> layout;

    std::optional<RobustSignatureSpec> robust_signature() const {
        if (!ecc) return std::nullopt;
        return RobustSignatureSpec(design.signature(), *ecc,
                                   layout.value_or(RobustLayout::SixComplemented));
    }
};

namespace detail {

inline nlohmann::json signature_to_json(const SignatureSpec& spec) {
    nlohmann::json j{{"n", spec.n()},
                     {"L", spec.L()},
                     {"sections", section_count(spec.sections())},
                     {"seed", spec.seed()},
                     {"complemented", spec.complemented()}};
    if (spec.has_fixture()) {
        j["s1"] = spec.fixture_s1();
        j["s2"] = spec.fixture_s2();
    }
    return j;
}

inline Sections sections_from_count(unsigned count) {
    switch (count) {
        case 2: return Sections::Two;
        case 4: return Sections::Four;
        case 6: return Sections::Six;
        default: throw std::runtime_error("design file: sections must be 2, 4 or 6");
    }
}

inline SignatureSpec signature_from_json(const nlohmann::json& j) {
    const auto n = j.at("n").get<std::uint64_t>();
    const Sections sections = sections_from_count(j.at("sections").get<unsigned>());
    if (j.contains("s1") || j.contains("s2")) {
        auto spec = SignatureSpec::with_fixture(n, sections,
                                                j.at("s1").get<std::vector<std::uint64_t>>(),
                                                j.at("s2").get<std::vector<std::uint64_t>>());
        if (j.at("L").get<unsigned>() != spec.L())
            throw std::runtime_error("design file: L does not match n");
        return spec;
    }
    SignatureSpec spec(n, sections, j.at("seed").get<std::uint64_t>(),
                       j.at("complemented").get<bool>());
    if (j.at("L").get<unsigned>() != spec.L())
        throw std::runtime_error("design file: L does not match n");
    return spec;
}

}  // namespace detail

inline nlohmann::json design_to_json(const DesignFile& file) {
    const PoolDesign& design = file.design;
    nlohmann::json j;
    j["n"] = design.n();
    j["M"] = design.M();
    j["graph_seed"] = design.graph_seed();
    j["signature"] = detail::signature_to_json(design.signature());
    if (const auto* lr = std::get_if<LeftRegular>(&design.kind())) {
        j["kind"] = "left_regular";
        j["d"] = lr->d;
    } else if (const auto* be = std::get_if<BernoulliGraph>(&design.kind())) {
        j["kind"] = "bernoulli";
        j["p"] = be->p;
    } else {
        j["kind"] = "explicit";
        j["columns"] = std::get<ExplicitGraph>(design.kind()).item_neighbors;
    }
    if (file.ecc) {
        j["ecc"] = {{"cq", file.ecc->cq}, {"ck", file.ecc->ck}, {"cn", file.ecc->cn}};
        j["layout"] = (file.layout.value_or(RobustLayout::SixComplemented) ==
                       RobustLayout::SixComplemented)
                          ? "six_complemented"
                          : "three_plain";
    }
    const DesignParams& params = design.params();
    if (params.K || params.eps || params.alpha || params.q) {
        nlohmann::json pj;
        if (params.K) pj["K"] = *params.K;
        if (params.eps) pj["eps"] = *params.eps;
        if (params.alpha) pj["alpha"] = *params.alpha;
        if (params.q) pj["q"] = *params.q;
        j["params"] = pj;
    }
    return j;
}

inline DesignFile design_from_json(const nlohmann::json& j) {
    try {
        SignatureSpec spec = detail::signature_from_json(j.at("signature"));
        const auto M = j.at("M").get<std::uint64_t>();
        if (j.at("n").get<std::uint64_t>() != spec.n())
            throw std::runtime_error("design file: n does not match signature");
        const std::string kind = j.at("kind").get<std::string>();
        GraphKind graph;
        if (kind == "left_regular") {
            graph = LeftRegular{j.at("d").get<unsigned>()};
        } else if (kind == "bernoulli") {
            graph = BernoulliGraph{j.at("p").get<double>()};
        } else if (kind == "explicit") {
            graph = ExplicitGraph{j.at("columns").get<std::vector<std::vector<std::uint64_t>>>()};
        } else {
            throw std::runtime_error("design file: unknown kind " + kind);
        }
        DesignParams params;
        if (j.contains("params")) {
            const auto& pj = j.at("params");
            if (pj.contains("K")) params.K = pj.at("K").get<std::uint64_t>();
            if (pj.contains("eps")) params.eps = pj.at("eps").get<double>();
            if (pj.contains("alpha")) params.alpha = pj.at("alpha").get<double>();
            if (pj.contains("q")) params.q = pj.at("q").get<double>();
        }
        DesignFile file{PoolDesign(M, std::move(graph), j.at("graph_seed").get<std::uint64_t>(),
                                   std::move(spec), params),
                        std::nullopt, std::nullopt};
        if (j.contains("ecc")) {
            const auto& ej = j.at("ecc");
            file.ecc = EccSpec{ej.at("cq").get<unsigned>(), ej.at("ck").get<unsigned>(),
                               ej.at("cn").get<unsigned>()};
            const std::string layout = j.value("layout", "six_complemented");
            if (layout == "six_complemented") {
                file.layout = RobustLayout::SixComplemented;
            } else if (layout == "three_plain") {
                file.layout = RobustLayout::ThreePlain;
            } else {
                throw std::runtime_error("design file: unknown layout " + layout);
            }
        }
        return file;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("design file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("design file: ") + e.what());
    }
}

inline void write_design(std::ostream& os, const DesignFile& file) {
    os << design_to_json(file).dump(2) << '\n';
}

inline DesignFile read_design(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("design file: ") + e.what());
    }
    return design_from_json(j);
}

}  // namespace saffron
