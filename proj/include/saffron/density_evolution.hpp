#pragma once

// Density-evolution recursion over the Poisson right-degree ensemble, its
// fixed point, the constrained (d, lambda) design optimization, and the
// closed-form test counts for all four scheme variants.
//
// The recursion is p' = [1 - (rho1 + rho2 (1 - p))]^(d-1) with rho1 = e^-l,
// rho2 = l e^-l. The iterated limit from p = 1 and the closed form
// [1 - e^-l - l e^-l]^(d-1) can differ slightly away from the optimized
// designs; both are exposed.

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace saffron {

inline double de_step(double p, double lambda, unsigned d) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("de_step: p must lie in [0, 1]");
    if (!(lambda > 0.0)) throw std::invalid_argument("de_step: lambda must be positive");
    if (d < 2) throw std::invalid_argument("de_step: d must be at least 2");
    const double rho1 = std::exp(-lambda);
    const double rho2 = lambda * rho1;
    const double inner = 1.0 - (rho1 + rho2 * (1.0 - p));
    if (inner <= 0.0) return 0.0;
    return std::pow(inner, static_cast<double>(d - 1));
}

// [1 - e^-l - l e^-l]^(d-1); the -expm1 form keeps precision near lambda = 0.
inline double de_closed_form(double lambda, unsigned d) {
    if (!(lambda > 0.0)) throw std::invalid_argument("de_closed_form: lambda must be positive");
    if (d < 2) throw std::invalid_argument("de_closed_form: d must be at least 2");
    const double arg = -std::expm1(-lambda) - lambda * std::exp(-lambda);
    if (arg <= 0.0) return 0.0;
    return std::pow(arg, static_cast<double>(d - 1));
}

struct FixedPointResult {
    double value = 0.0;
    bool converged = false;
    unsigned iterations = 0;
};

// Iterate from p = 1 until the relative step drops below tol. The limit sits a
// hair above the closed form (the rho2 p term), so comparisons against a
// target eps need a small relative allowance.
inline FixedPointResult de_fixed_point(double lambda, unsigned d, double tol = 1e-12,
                                       unsigned max_iters = 10000) {
    if (!(tol > 0.0)) throw std::invalid_argument("de_fixed_point: tol must be positive");
    double p = 1.0;
    for (unsigned j = 1; j <= max_iters; ++j) {
        const double next = de_step(p, lambda, d);
        if (std::abs(next - p) < tol * std::max(next, 1e-300)) {
            return {next, true, j};
        }
        p = next;
    }
    return {p, false, max_iters};
}

enum class SchemeVariant { Saffron, SingletonOnly, RobustSaffron, RobustSingletonOnly };

struct DeDesign {
    double eps = 0.0;
    unsigned d_star = 0;
    double lambda_star = 0.0;
    double C = 0.0;  // right nodes per defective item, d*/lambda*
    SchemeVariant variant = SchemeVariant::Saffron;
};

namespace detail {

// Solve (d-1) ln(1 - e^-l - l e^-l) = ln(eps) for lambda. The left side is
// continuous and strictly increasing in lambda, so plain bisection on
// [1e-6, 20] works; tolerance 1e-10 in lambda.
inline double solve_lambda(double eps, unsigned d) {
    const double target = std::log(eps) / static_cast<double>(d - 1);
    auto f = [](double lambda) {
        return std::log(-std::expm1(-lambda) - lambda * std::exp(-lambda));
    };
    double lo = 1e-6, hi = 20.0;
    if (f(lo) > target) return lo;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// Minimize C = d / lambda over integer d subject to the fixed-point constraint
// holding with equality; ties break toward smaller d.
inline DeDesign optimize_design(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("optimize_design: eps must lie in (0, 1)");
    DeDesign best;
    for (unsigned d = 2; d <= 64; ++d) {
        const double lambda = detail::solve_lambda(eps, d);
        const double C = static_cast<double>(d) / lambda;
        if (best.d_star == 0 || C < best.C) {
            best = {eps, d, lambda, C, SchemeVariant::Saffron};
        }
    }
    return best;
}

struct TestCountParams {
    SchemeVariant variant = SchemeVariant::Saffron;
    std::uint64_t K = 0;
    std::uint64_t n = 0;
    std::optional<double> eps;    // Saffron family
    std::optional<double> alpha;  // Singleton-Only family
    std::optional<unsigned> ecc_ck;
    std::optional<unsigned> ecc_cn;
    std::optional<unsigned> sections_override;  // four-section shortening
    double node_inflation = 1.0;                // robust right-node compensation, default off
};

struct TestCount {
    std::uint64_t right_nodes = 0;  // M
    std::uint64_t tests = 0;        // m
    unsigned sections = 0;
    unsigned bits_per_section = 0;
};

inline TestCount test_count(const TestCountParams& p) {
    if (p.K == 0) throw std::invalid_argument("test_count: K must be positive");
    if (p.n < 2 || (p.n & (p.n - 1)) != 0)
        throw std::invalid_argument("test_count: n must be a power of two >= 2");
    const unsigned L = static_cast<unsigned>(std::countr_zero(p.n));
    const bool saffron_family =
        p.variant == SchemeVariant::Saffron || p.variant == SchemeVariant::RobustSaffron;
    const bool robust = p.variant == SchemeVariant::RobustSaffron ||
                        p.variant == SchemeVariant::RobustSingletonOnly;

    double nodes;
    if (saffron_family) {
        if (!p.eps) throw std::invalid_argument("test_count: eps required for SAFFRON designs");
        nodes = optimize_design(*p.eps).C * static_cast<double>(p.K);
    } else {
        if (!p.alpha) throw std::invalid_argument("test_count: alpha required for Singleton-Only designs");
        if (p.K < 2)
            throw std::invalid_argument("test_count: Singleton-Only needs K >= 2 (log K vanishes)");
        nodes = std::exp(1.0) * (1.0 + *p.alpha) * static_cast<double>(p.K) *
                std::log(static_cast<double>(p.K));
    }
    if (robust) nodes *= p.node_inflation;

    TestCount out;
    out.right_nodes = static_cast<std::uint64_t>(std::ceil(nodes));
    out.sections = saffron_family ? 6u : (robust ? 3u : 2u);
    if (p.sections_override) {
        if (!saffron_family || robust)
            throw std::invalid_argument("test_count: section override applies to plain SAFFRON only");
        if (*p.sections_override != 4 && *p.sections_override != 6)
            throw std::invalid_argument("test_count: sections must be 4 or 6");
        out.sections = *p.sections_override;
    }
    if (robust) {
        if (!p.ecc_ck || !p.ecc_cn)
            throw std::invalid_argument("test_count: robust designs need ECC (ck, cn)");
        if (*p.ecc_ck * 8u < L)
            throw std::invalid_argument("test_count: ECC message too short for L index bits");
        out.bits_per_section = *p.ecc_cn * 8u;
    } else {
        out.bits_per_section = L;
    }
    out.tests = out.right_nodes * out.sections * out.bits_per_section;
    return out;
}

// Largest usable ECC rate over BSC(q): 1 - H2(q) - delta.
inline double capacity_rate_bound(double q, double delta) {
    if (!(q > 0.0) || q >= 0.5) throw std::invalid_argument("capacity_rate_bound: q must lie in (0, 1/2)");
    if (delta < 0.0) throw std::invalid_argument("capacity_rate_bound: delta must be nonnegative");
    const double h2 = -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
    return 1.0 - h2 - delta;
}

}  // namespace saffron
