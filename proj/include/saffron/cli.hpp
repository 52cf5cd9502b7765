#pragma once

// Command-line front end: design / encode / decode / simulate / sweep / bench.
// Exit codes: 0 success, 2 configuration or parse error, 3 failure-threshold
// breach under `simulate --strict`.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "saffron/saffron.hpp"

namespace saffron::cli {

namespace detail {

inline SchemeVariant variant_from_string(const std::string& name) {
    if (name == "saffron") return SchemeVariant::Saffron;
    if (name == "singleton_only") return SchemeVariant::SingletonOnly;
    if (name == "robust_saffron") return SchemeVariant::RobustSaffron;
    if (name == "robust_singleton_only") return SchemeVariant::RobustSingletonOnly;
    throw std::invalid_argument("unknown variant: " + name);
}

inline std::string variant_to_string(SchemeVariant v) {
    switch (v) {
        case SchemeVariant::Saffron: return "saffron";
        case SchemeVariant::SingletonOnly: return "singleton_only";
        case SchemeVariant::RobustSaffron: return "robust_saffron";
        case SchemeVariant::RobustSingletonOnly: return "robust_singleton_only";
    }
    return "saffron";
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    if (j.contains("variant")) cfg.variant = variant_from_string(j.at("variant").get<std::string>());
    if (j.contains("n")) cfg.n = j.at("n").get<std::uint64_t>();
    if (j.contains("K")) cfg.K = j.at("K").get<std::uint64_t>();
    if (j.contains("d")) cfg.d = j.at("d").get<unsigned>();
    if (j.contains("p")) cfg.p = j.at("p").get<double>();
    if (j.contains("M")) cfg.M = j.at("M").get<std::uint64_t>();
    if (j.contains("eps")) cfg.eps = j.at("eps").get<double>();
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("q")) cfg.q = j.at("q").get<double>();
    if (j.contains("ecc"))
        cfg.ecc = EccSpec{j.at("ecc").value("cq", 256u), j.at("ecc").at("ck").get<unsigned>(),
                          j.at("ecc").at("cn").get<unsigned>()};
    if (j.contains("sections")) cfg.sections = j.at("sections").get<unsigned>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<std::uint64_t>();
    if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("node_inflation")) cfg.node_inflation = j.at("node_inflation").get<double>();
    return cfg;
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return j;
}

inline void write_output(const std::string& out_path, const std::string& content,
                         std::ostream& fallback) {
    if (out_path.empty()) {
        fallback << content;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << content;
}

struct CommonOptions {
    std::string config_path;
    std::string out_path;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> n, K, M, trials;
    std::optional<unsigned> d, ck, cn;
    std::optional<double> q, eps, alpha, p;
    std::optional<std::string> variant;

    ExperimentConfig build() const {
        ExperimentConfig cfg;
        if (!config_path.empty()) cfg = config_from_json(load_json_file(config_path));
        if (variant) cfg.variant = variant_from_string(*variant);
        if (n) cfg.n = *n;
        if (K) cfg.K = *K;
        if (M) cfg.M = *M;
        if (d) cfg.d = *d;
        if (p) cfg.p = *p;
        if (q) cfg.q = *q;
        if (eps) cfg.eps = *eps;
        if (alpha) cfg.alpha = *alpha;
        if (trials) cfg.trials = *trials;
        if (seed) cfg.master_seed = *seed;
        if (ck || cn) {
            EccSpec ecc = cfg.ecc.value_or(EccSpec{256, 4, 12});
            if (ck) ecc.ck = *ck;
            if (cn) ecc.cn = *cn;
            cfg.ecc = ecc;
        }
        return cfg;
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment config JSON");
        cmd->add_option("--out", out_path, "output path (default stdout)");
        cmd->add_option("--format", format, "output format: json|csv")
            ->check(CLI::IsMember({"json", "csv"}));
        auto opt = [&](auto& slot, const char* name, const char* desc) {
            cmd->add_option_function<std::remove_reference_t<decltype(*slot)>>(
                name, [&slot](const auto& v) { slot = v; }, desc);
        };
        opt(seed, "--seed", "master seed");
        opt(n, "--n", "item count (power of two)");
        opt(K, "--K", "defective count");
        opt(M, "--M", "right-node count");
        opt(trials, "--trials", "trial count");
        opt(d, "--d", "left degree");
        opt(ck, "--ck", "ECC message symbols");
        opt(cn, "--cn", "ECC codeword symbols");
        opt(q, "--q", "test error probability");
        opt(eps, "--eps", "target unidentified fraction");
        opt(alpha, "--alpha", "Singleton-Only exponent");
        opt(p, "--p", "Bernoulli connection probability");
        opt(variant, "--variant",
            "saffron|singleton_only|robust_saffron|robust_singleton_only");
    }
};

inline nlohmann::json decode_result_to_json(const DecodeResult& result) {
    return nlohmann::json{{"identified", result.identified},
                          {"iterations", result.iterations},
                          {"resolved_singletons", result.resolved_singletons},
                          {"resolved_doubletons", result.resolved_doubletons},
                          {"unresolved_right_nodes", result.unresolved_right_nodes},
                          {"decode_attempts", result.decode_attempts}};
}

inline DecodeResult decode_with_design(const DesignFile& file, const MeasurementSet& ms) {
    if (file.ecc) {
        const auto robust = file.robust_signature();
        if (robust->layout() == RobustLayout::ThreePlain)
            return robust_decode_singleton_only(ms, file.design, *robust);
        return robust_peel(ms, file.design, *robust);
    }
    if (section_count(file.design.signature().sections()) == 2)
        return decode_singleton_only(ms, file.design);
    return peel(ms, file.design);
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"SAFFRON group-testing toolkit"};
    app.require_subcommand(1);

    // --- design ---
    auto* design_cmd = app.add_subcommand("design", "optimize (d, lambda) for a target eps");
    double design_eps = 0.0;
    std::string design_variant = "saffron";
    std::string design_format = "json";
    std::string design_out;
    std::optional<std::uint64_t> design_K, design_n;
    std::optional<double> design_alpha;
    std::optional<unsigned> design_ck, design_cn;
    double design_inflation = 1.0;
    design_cmd->add_option("--eps", design_eps, "target unidentified fraction");
    design_cmd->add_option("--variant", design_variant,
                           "saffron|singleton_only|robust_saffron|robust_singleton_only");
    design_cmd->add_option("--format", design_format, "json|table")
        ->check(CLI::IsMember({"json", "table"}));
    design_cmd->add_option("--out", design_out, "output path");
    design_cmd->add_option_function<std::uint64_t>(
        "--K", [&](std::uint64_t v) { design_K = v; }, "defective count for test counts");
    design_cmd->add_option_function<std::uint64_t>(
        "--n", [&](std::uint64_t v) { design_n = v; }, "item count for test counts");
    design_cmd->add_option_function<double>(
        "--alpha", [&](double v) { design_alpha = v; }, "Singleton-Only exponent");
    design_cmd->add_option_function<unsigned>(
        "--ck", [&](unsigned v) { design_ck = v; }, "ECC message symbols");
    design_cmd->add_option_function<unsigned>(
        "--cn", [&](unsigned v) { design_cn = v; }, "ECC codeword symbols");
    design_cmd->add_option("--inflate", design_inflation,
                           "robust right-node inflation factor (default 1)");

    // --- encode ---
    auto* encode_cmd = app.add_subcommand("encode", "measure a support under a design");
    std::string encode_design_path, encode_out;
    std::vector<std::uint64_t> encode_items;
    std::optional<std::uint64_t> encode_random_K;
    std::uint64_t encode_seed = 1;
    double encode_q = 0.0;
    encode_cmd->add_option("--design", encode_design_path, "design JSON")->required();
    encode_cmd->add_option("--items", encode_items, "defective items, comma separated")
        ->delimiter(',');
    encode_cmd->add_option_function<std::uint64_t>(
        "--random-support", [&](std::uint64_t v) { encode_random_K = v; },
        "draw K random defective items");
    encode_cmd->add_option("--seed", encode_seed, "seed for support and noise");
    encode_cmd->add_option("--q", encode_q, "apply BSC noise with this flip probability");
    encode_cmd->add_option("--out", encode_out, "dump path (default stdout)");

    // --- decode ---
    auto* decode_cmd = app.add_subcommand("decode", "recover defective items from a dump");
    std::string decode_design_path, decode_dump_path, decode_out;
    decode_cmd->add_option("--design", decode_design_path, "design JSON")->required();
    decode_cmd->add_option("--dump", decode_dump_path, "measurement dump")->required();
    decode_cmd->add_option("--out", decode_out, "output path (default stdout)");

    // --- simulate ---
    auto* sim_cmd = app.add_subcommand("simulate", "run end-to-end Monte-Carlo trials");
    detail::CommonOptions sim_opts;
    sim_opts.attach(sim_cmd);
    bool sim_strict = false;
    std::uint64_t sim_max_failed = 0;
    sim_cmd->add_flag("--strict", sim_strict, "exit 3 when failed trials exceed the threshold");
    sim_cmd->add_option("--max-failed-trials", sim_max_failed,
                        "allowed trials with misses or false positives under --strict");

    // --- sweep ---
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter, one CSV row per value");
    detail::CommonOptions sweep_opts;
    sweep_opts.attach(sweep_cmd);
    std::string sweep_axis;
    std::vector<double> sweep_values;
    bool sweep_no_timing = false;
    sweep_cmd->add_option("--axis", sweep_axis, "axis parameter: M|d|q|cn|K|n|logn")->required();
    sweep_cmd->add_option("--values", sweep_values, "axis values, comma separated")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_flag("--no-timing", sweep_no_timing,
                        "omit the timing column for byte-identical output");

    // --- bench ---
    auto* bench_cmd = app.add_subcommand("bench", "decode-time scaling along one axis");
    detail::CommonOptions bench_opts;
    bench_opts.attach(bench_cmd);
    std::string bench_axis;
    std::vector<double> bench_values;
    double bench_min_seconds = 0.2;
    bench_cmd->add_option("--axis", bench_axis, "axis parameter: K|n|logn|M|d")->required();
    bench_cmd->add_option("--values", bench_values, "axis values, comma separated")
        ->required()
        ->delimiter(',');
    bench_cmd->add_option("--min-seconds", bench_min_seconds,
                          "minimum accumulated decode time per point");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << '\n';
        return 2;
    }

    try {
        if (design_cmd->parsed()) {
            const SchemeVariant variant = detail::variant_from_string(design_variant);
            const bool saffron_family = variant == SchemeVariant::Saffron ||
                                        variant == SchemeVariant::RobustSaffron;
            nlohmann::json j;
            std::ostringstream table;
            if (saffron_family) {
                if (!(design_eps > 0.0))
                    throw std::invalid_argument("design: --eps required for SAFFRON variants");
                const DeDesign de = optimize_design(design_eps);
                j = {{"variant", design_variant},
                     {"eps", de.eps},
                     {"C", de.C},
                     {"d", de.d_star},
                     {"lambda", de.lambda_star}};
                table << "variant        " << design_variant << '\n'
                      << "eps            " << design_eps << '\n'
                      << "C = d*/lambda* " << de.C << '\n'
                      << "d*             " << de.d_star << '\n'
                      << "lambda*        " << de.lambda_star << '\n';
            } else {
                if (!design_alpha)
                    throw std::invalid_argument("design: --alpha required for Singleton-Only variants");
                j = {{"variant", design_variant}, {"alpha", *design_alpha}};
                table << "variant " << design_variant << "\nalpha   " << *design_alpha << '\n';
            }
            if (design_K && design_n) {
                TestCountParams tp;
                tp.variant = variant;
                tp.K = *design_K;
                tp.n = *design_n;
                if (saffron_family) tp.eps = design_eps;
                tp.alpha = design_alpha;
                tp.ecc_ck = design_ck;
                tp.ecc_cn = design_cn;
                tp.node_inflation = design_inflation;
                const TestCount tc = test_count(tp);
                j["K"] = *design_K;
                j["n"] = *design_n;
                j["M"] = tc.right_nodes;
                j["m"] = tc.tests;
                j["sections"] = tc.sections;
                j["bits_per_section"] = tc.bits_per_section;
                table << "K              " << *design_K << '\n'
                      << "n              " << *design_n << '\n'
                      << "right nodes M  " << tc.right_nodes << '\n'
                      << "tests m        " << tc.tests << '\n';
            }
            detail::write_output(design_out,
                                 design_format == "json" ? j.dump(2) + "\n" : table.str(), out);
            return 0;
        }

        if (encode_cmd->parsed()) {
            std::ifstream in(encode_design_path);
            if (!in) throw std::runtime_error("cannot open " + encode_design_path);
            const DesignFile file = read_design(in);
            if (encode_items.empty() == !encode_random_K.has_value())
                throw std::invalid_argument("encode: give exactly one of --items / --random-support");
            const SupportVector support =
                encode_random_K
                    ? SupportVector::random(file.design.n(), *encode_random_K, encode_seed)
                    : SupportVector(file.design.n(), encode_items);
            MeasurementSet ms;
            if (file.ecc) {
                ms = measure_robust(file.design, support, *file.robust_signature());
            } else {
                ms = measure(file.design, support);
            }
            if (encode_q > 0.0)
                ms = apply_noise(ms, encode_q, prf(encode_seed, seed_domain::kNoise, 1));
            std::ostringstream dump;
            write_dump(dump, ms);
            detail::write_output(encode_out, dump.str(), out);
            return 0;
        }

        if (decode_cmd->parsed()) {
            std::ifstream design_in(decode_design_path);
            if (!design_in) throw std::runtime_error("cannot open " + decode_design_path);
            const DesignFile file = read_design(design_in);
            std::ifstream dump_in(decode_dump_path);
            if (!dump_in) throw std::runtime_error("cannot open " + decode_dump_path);
            const MeasurementSet ms = read_dump(dump_in);
            const DecodeResult result = detail::decode_with_design(file, ms);
            detail::write_output(decode_out, detail::decode_result_to_json(result).dump(2) + "\n",
                                 out);
            return 0;
        }

        if (sim_cmd->parsed()) {
            const ExperimentConfig cfg = sim_opts.build();
            const auto records = run_trials(cfg);
            const SweepRow row = summarize(cfg, 0.0, records);
            std::uint64_t failed = 0, recovered = 0;
            for (const TrialRecord& r : records) {
                if (r.missed > 0 || r.false_positives > 0) {
                    ++failed;
                } else {
                    ++recovered;
                }
            }
            if (sim_opts.format == "csv") {
                std::ostringstream csv;
                write_sweep_csv(csv, std::span<const SweepRow>(&row, 1));
                detail::write_output(sim_opts.out_path, csv.str(), out);
            } else {
                nlohmann::json j{{"variant", detail::variant_to_string(cfg.variant)},
                                 {"trials", row.trials},
                                 {"tests", row.tests},
                                 {"mean_unidentified_fraction", row.mean_unidentified},
                                 {"std_unidentified_fraction", row.std_unidentified},
                                 {"false_positive_rate", row.false_positive_rate},
                                 {"mean_decode_seconds", row.mean_decode_seconds},
                                 {"failed_trials", failed},
                                 {"fully_recovered_trials", recovered},
                                 {"degenerate", row.degenerate}};
                detail::write_output(sim_opts.out_path, j.dump(2) + "\n", out);
            }
            if (sim_strict && failed > sim_max_failed) {
                err << "strict mode: " << failed << " failed trials exceed threshold "
                    << sim_max_failed << '\n';
                return 3;
            }
            return 0;
        }

        if (sweep_cmd->parsed()) {
            const ExperimentConfig cfg = sweep_opts.build();
            const auto rows = run_sweep(cfg, SweepAxis{sweep_axis, sweep_values});
            std::ostringstream csv;
            write_sweep_csv(csv, rows, !sweep_no_timing);
            detail::write_output(sweep_opts.out_path, csv.str(), out);
            return 0;
        }

        if (bench_cmd->parsed()) {
            const ExperimentConfig cfg = bench_opts.build();
            const auto rows = run_benchmark(cfg, SweepAxis{bench_axis, bench_values},
                                            bench_min_seconds);
            std::ostringstream csv;
            write_bench_csv(csv, rows);
            detail::write_output(bench_opts.out_path, csv.str(), out);
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

inline int run_main(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace saffron::cli
