#pragma once

// Monte-Carlo experiment engine. Every trial derives its own seeds from
// (master_seed, trial index) through the keyed PRF with per-purpose domain
// tags, so trials are independent, reorderable and reproducible; runs are
// deterministic up to the wall-clock timing fields.

#include <algorithm>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "saffron/channel.hpp"
#include "saffron/density_evolution.hpp"
#include "saffron/ecc_robust.hpp"
#include "saffron/peeling_decoder.hpp"
#include "saffron/pool_design.hpp"
#include "saffron/prf.hpp"
#include "saffron/signature.hpp"

namespace saffron {

struct ExperimentConfig {
    SchemeVariant variant = SchemeVariant::Saffron;
    std::uint64_t n = 0;
    std::uint64_t K = 0;
    std::optional<unsigned> d;       // left degree (left-regular ensembles)
    std::optional<double> p;         // connection probability (Bernoulli)
    std::optional<std::uint64_t> M;  // right nodes; derived from eps/alpha when absent
    std::optional<double> eps;
    std::optional<double> alpha;
    double q = 0.0;  // test error probability
    std::optional<EccSpec> ecc;
    unsigned sections = 6;  // plain SAFFRON only: 6 or 4
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 1;
    double node_inflation = 1.0;
};

struct TrialRecord {
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    std::uint64_t identified = 0;  // true positives
    std::uint64_t missed = 0;
    std::uint64_t false_positives = 0;
    double decode_seconds = 0.0;
    std::uint64_t tests = 0;  // m
    std::uint64_t right_nodes = 0;
    std::uint64_t decode_attempts = 0;
};

namespace detail {

struct ResolvedConfig {
    SchemeVariant variant;
    std::uint64_t n, K, M;
    GraphKind graph;
    unsigned sections;
    double q;
    std::optional<EccSpec> ecc;
    RobustLayout layout = RobustLayout::SixComplemented;
    std::uint64_t tests = 0;
};

inline bool is_saffron_family(SchemeVariant v) {
    return v == SchemeVariant::Saffron || v == SchemeVariant::RobustSaffron;
}

inline bool is_robust(SchemeVariant v) {
    return v == SchemeVariant::RobustSaffron || v == SchemeVariant::RobustSingletonOnly;
}

inline ResolvedConfig resolve_config(const ExperimentConfig& cfg) {
    if (cfg.n < 2 || (cfg.n & (cfg.n - 1)) != 0)
        throw std::invalid_argument("config: n must be a power of two >= 2");
    if (cfg.K > cfg.n) throw std::invalid_argument("config: K exceeds n");
    if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (cfg.q < 0.0 || cfg.q >= 0.5) throw std::invalid_argument("config: q must lie in [0, 1/2)");

    ResolvedConfig rc;
    rc.variant = cfg.variant;
    rc.n = cfg.n;
    rc.K = cfg.K;
    rc.q = cfg.q;

    const bool saffron_family = is_saffron_family(cfg.variant);
    const bool robust = is_robust(cfg.variant);

    if (cfg.M) {
        rc.M = *cfg.M;
    } else {
        TestCountParams tp;
        tp.variant = cfg.variant;
        tp.K = cfg.K;
        tp.n = cfg.n;
        tp.eps = cfg.eps;
        tp.alpha = cfg.alpha;
        tp.node_inflation = cfg.node_inflation;
        if (robust) {
            if (!cfg.ecc) throw std::invalid_argument("config: robust variants need ecc {ck, cn}");
            tp.ecc_ck = cfg.ecc->ck;
            tp.ecc_cn = cfg.ecc->cn;
        }
        rc.M = test_count(tp).right_nodes;
    }
    if (rc.M == 0) throw std::invalid_argument("config: M must be positive");

    if (saffron_family) {
        if (!cfg.d) throw std::invalid_argument("config: SAFFRON designs need a left degree d");
        rc.graph = LeftRegular{*cfg.d};
        rc.sections = cfg.sections;
        if (rc.sections != 6 && rc.sections != 4)
            throw std::invalid_argument("config: sections must be 6 or 4");
        rc.layout = RobustLayout::SixComplemented;
    } else {
        double p = cfg.p ? *cfg.p : (cfg.K > 0 ? 1.0 / static_cast<double>(cfg.K) : 1.0);
        if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("config: p must lie in (0, 1]");
        rc.graph = BernoulliGraph{p};
        rc.sections = 2;
        rc.layout = RobustLayout::ThreePlain;
    }

    if (robust) {
        if (!cfg.ecc) throw std::invalid_argument("config: robust variants need ecc {ck, cn}");
        rc.ecc = cfg.ecc;
        const unsigned robust_sections = saffron_family ? 6u : 3u;
        rc.tests = rc.M * robust_sections * (cfg.ecc->cn * 8ull);
    } else {
        const unsigned L = static_cast<unsigned>(std::countr_zero(cfg.n));
        rc.tests = rc.M * rc.sections * static_cast<std::uint64_t>(L);
    }
    return rc;
}

inline Sections sections_enum(unsigned count) {
    return count == 4 ? Sections::Four : (count == 2 ? Sections::Two : Sections::Six);
}

}  // namespace detail

inline TrialRecord run_trial(const ExperimentConfig& cfg, std::uint64_t trial_index) {
    const detail::ResolvedConfig rc = detail::resolve_config(cfg);
    const std::uint64_t trial_seed = prf(cfg.master_seed, seed_domain::kTrial, trial_index);
    const std::uint64_t sig_seed = prf(trial_seed, seed_domain::kSignature, 0);
    const std::uint64_t graph_seed = prf(trial_seed, seed_domain::kGraph, 0);
    const std::uint64_t support_seed = prf(trial_seed, seed_domain::kSupport, 0);
    const std::uint64_t noise_seed = prf(trial_seed, seed_domain::kNoise, 0);

    SignatureSpec sig(rc.n, detail::sections_enum(rc.sections), sig_seed);
    DesignParams params;
    params.K = rc.K;
    params.eps = cfg.eps;
    params.alpha = cfg.alpha;
    if (rc.q > 0.0) params.q = rc.q;
    PoolDesign design(rc.M, rc.graph, graph_seed, sig, params);
    const SupportVector truth = SupportVector::random(rc.n, rc.K, support_seed);

    std::optional<RobustSignatureSpec> robust;
    MeasurementSet ms;
    if (rc.ecc) {
        robust.emplace(sig, *rc.ecc, rc.layout);
        ms = measure_robust(design, truth, *robust);
    } else {
        ms = measure(design, truth);
    }
    if (rc.q > 0.0) ms = apply_noise(ms, rc.q, noise_seed);

    const auto t0 = std::chrono::steady_clock::now();
    DecodeResult result;
    switch (rc.variant) {
        case SchemeVariant::Saffron: result = peel(ms, design); break;
        case SchemeVariant::SingletonOnly: result = decode_singleton_only(ms, design); break;
        case SchemeVariant::RobustSaffron: result = robust_peel(ms, design, *robust); break;
        case SchemeVariant::RobustSingletonOnly:
            result = robust_decode_singleton_only(ms, design, *robust);
            break;
    }
    const auto t1 = std::chrono::steady_clock::now();

    TrialRecord rec;
    rec.trial = trial_index;
    rec.seed = trial_seed;
    rec.tests = rc.tests;
    rec.right_nodes = rc.M;
    rec.decode_seconds = std::chrono::duration<double>(t1 - t0).count();
    rec.decode_attempts = result.decode_attempts;
    for (std::uint64_t item : result.identified) {
        if (truth.contains(item)) {
            ++rec.identified;
        } else {
            ++rec.false_positives;
        }
    }
    rec.missed = rc.K - rec.identified;
    return rec;
}

struct SweepAxis {
    std::string name;  // one of: M, d, q, cn, K, n, trials-invariant axes
    std::vector<double> values;
};

struct SweepRow {
    double axis = 0.0;
    double mean_unidentified = 0.0;
    double std_unidentified = 0.0;
    double false_positive_rate = 0.0;  // fraction of trials with any false positive
    double mean_decode_seconds = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t tests = 0;
    bool degenerate = false;  // K = 0: unidentified fraction is 0/0, reported as 0
};

inline ExperimentConfig apply_axis(ExperimentConfig cfg, const std::string& name, double value) {
    if (name == "M") {
        cfg.M = static_cast<std::uint64_t>(value);
    } else if (name == "d") {
        cfg.d = static_cast<unsigned>(value);
    } else if (name == "q") {
        cfg.q = value;
    } else if (name == "cn") {
        if (!cfg.ecc) throw std::invalid_argument("sweep: cn axis needs an ecc config");
        cfg.ecc->cn = static_cast<unsigned>(value);
    } else if (name == "K") {
        cfg.K = static_cast<std::uint64_t>(value);
    } else if (name == "n") {
        cfg.n = static_cast<std::uint64_t>(value);
    } else if (name == "logn") {
        cfg.n = std::uint64_t{1} << static_cast<unsigned>(value);
    } else {
        throw std::invalid_argument("sweep: unknown axis " + name);
    }
    return cfg;
}

inline std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg) {
    std::vector<TrialRecord> records;
    records.reserve(cfg.trials);
    for (std::uint64_t t = 0; t < cfg.trials; ++t) records.push_back(run_trial(cfg, t));
    return records;
}

inline SweepRow summarize(const ExperimentConfig& cfg, double axis_value,
                          std::span<const TrialRecord> records) {
    SweepRow row;
    row.axis = axis_value;
    row.trials = records.size();
    row.degenerate = cfg.K == 0;
    if (records.empty()) return row;
    row.tests = records.front().tests;
    double sum = 0.0, sumsq = 0.0, time_sum = 0.0;
    std::uint64_t fp_trials = 0;
    for (const TrialRecord& r : records) {
        const double frac =
            cfg.K == 0 ? 0.0
                       : static_cast<double>(r.missed) / static_cast<double>(cfg.K);
        sum += frac;
        sumsq += frac * frac;
        time_sum += r.decode_seconds;
        if (r.false_positives > 0) ++fp_trials;
    }
    const double inv = 1.0 / static_cast<double>(records.size());
    row.mean_unidentified = sum * inv;
    const double var = sumsq * inv - row.mean_unidentified * row.mean_unidentified;
    row.std_unidentified = var > 0.0 ? std::sqrt(var) : 0.0;
    row.false_positive_rate = static_cast<double>(fp_trials) * inv;
    row.mean_decode_seconds = time_sum * inv;
    return row;
}

inline std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const SweepAxis& axis) {
    if (axis.values.empty()) throw std::invalid_argument("sweep: axis needs at least one value");
    std::vector<SweepRow> rows;
    rows.reserve(axis.values.size());
    for (double value : axis.values) {
        const ExperimentConfig cfg = apply_axis(base, axis.name, value);
        const auto records = run_trials(cfg);
        rows.push_back(summarize(cfg, value, records));
    }
    return rows;
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace detail

// Timing fields vary run to run; suppress them when byte-identical output is
// required (the statistical columns are always deterministic).
inline void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows,
                            bool include_timing = true) {
    os << "axis,mean_unidentified_fraction,std_unidentified_fraction,false_positive_rate,"
          "mean_decode_seconds,trials,tests,degenerate\n";
    for (const SweepRow& r : rows) {
        os << detail::format_double(r.axis) << ',' << detail::format_double(r.mean_unidentified)
           << ',' << detail::format_double(r.std_unidentified) << ','
           << detail::format_double(r.false_positive_rate) << ','
           << (include_timing ? detail::format_double(r.mean_decode_seconds) : std::string{})
           << ',' << r.trials << ',' << r.tests << ',' << (r.degenerate ? 1 : 0) << '\n';
    }
}

struct BenchRow {
    double axis = 0.0;
    double median_decode_seconds = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t tests = 0;
};

// Decode-time measurement along one axis. Samples are taken in interleaved
// rounds across all axis points, so slow system epochs hit every point alike
// instead of biasing whichever point was running; the reported figure is the
// per-point median, which is immune to the scheduler's long right tail.
inline std::vector<BenchRow> run_benchmark(const ExperimentConfig& base, const SweepAxis& axis,
                                           double min_seconds_per_point = 0.2,
                                           std::uint64_t max_trials_per_point = 8192) {
    struct Point {
        ExperimentConfig cfg;
        std::vector<double> samples;
        double acc = 0.0;
        std::uint64_t tests = 0;
        std::uint64_t next_trial = 0;
    };
    constexpr std::uint64_t kWarmup = 8;
    constexpr std::uint64_t kBatch = 16;

    std::vector<Point> points;
    points.reserve(axis.values.size());
    for (double value : axis.values) {
        Point p{apply_axis(base, axis.name, value), {}, 0.0, 0, 0};
        for (std::uint64_t w = 0; w < kWarmup; ++w) (void)run_trial(p.cfg, w);
        points.push_back(std::move(p));
    }
    bool progress = true;
    while (progress) {
        progress = false;
        for (Point& p : points) {
            if (p.samples.size() >= max_trials_per_point ||
                (p.acc >= min_seconds_per_point && p.samples.size() >= p.cfg.trials)) {
                continue;
            }
            for (std::uint64_t b = 0; b < kBatch && p.samples.size() < max_trials_per_point;
                 ++b) {
                const TrialRecord rec = run_trial(p.cfg, kWarmup + p.next_trial++);
                p.samples.push_back(rec.decode_seconds);
                p.acc += rec.decode_seconds;
                p.tests = rec.tests;
            }
            progress = true;
        }
    }

    std::vector<BenchRow> rows;
    rows.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        Point& p = points[i];
        std::sort(p.samples.begin(), p.samples.end());
        rows.push_back({axis.values[i], p.samples[p.samples.size() / 2],
                        p.samples.size(), p.tests});
    }
    return rows;
}

inline void write_bench_csv(std::ostream& os, std::span<const BenchRow> rows) {
    os << "axis,median_decode_seconds,trials,tests\n";
    for (const BenchRow& r : rows) {
        os << detail::format_double(r.axis) << ',' << detail::format_double(r.median_decode_seconds)
           << ',' << r.trials << ',' << r.tests << '\n';
    }
}

// Coefficient of determination of the least-squares line through (x, y).
inline double linear_fit_r2(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit_r2: need matching samples, at least two");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (syy == 0.0) return 1.0;  // constant data is perfectly fit by a flat line
    if (sxx == 0.0) return 0.0;
    const double slope = sxy / sxx;
    double ss_res = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double pred = my + slope * (x[i] - mx);
        const double r = y[i] - pred;
        ss_res += r * r;
    }
    return 1.0 - ss_res / syy;
}

}  // namespace saffron
