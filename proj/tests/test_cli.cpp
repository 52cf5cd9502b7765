#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fixtures.hpp"
#include "saffron/cli.hpp"
#include "saffron/serialization.hpp"

namespace fs = std::filesystem;
using namespace saffron;

namespace {

struct CliRun {
    int exit_code;
    std::string out;
    std::string err;
};

CliRun run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("saffron_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("design subcommand reproduces the eps = 1e-6 row", "[cli]") {
    const CliRun r = run_cli({"design", "--eps", "1e-6"});
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["d"] == 12);
    REQUIRE(std::abs(j["C"].get<double>() - 11.36) <= 0.02);

    const CliRun table = run_cli({"design", "--eps", "1e-6", "--format", "table"});
    REQUIRE(table.exit_code == 0);
    REQUIRE(table.out.find("d*") != std::string::npos);

    const CliRun counts = run_cli({"design", "--eps", "1e-6", "--K", "128", "--n", "4294967296",
                                   "--variant", "robust_saffron", "--ck", "4", "--cn", "12"});
    REQUIRE(counts.exit_code == 0);
    const auto cj = nlohmann::json::parse(counts.out);
    REQUIRE(cj["M"] == 1455);
    REQUIRE(cj["m"] == 838080);
}

TEST_CASE("design subcommand rejects a missing eps", "[cli]") {
    const CliRun r = run_cli({"design"});
    REQUIRE(r.exit_code == 2);
    REQUIRE(r.err.find("eps") != std::string::npos);
}

TEST_CASE("encode then decode on the worked example identifies {1, 3, 8}", "[cli]") {
    TempDir tmp;
    {
        std::ofstream design_out(tmp.file("design.json"));
        write_design(design_out,
                     DesignFile{fixtures::worked_example_design(), std::nullopt, std::nullopt});
    }
    const CliRun enc = run_cli({"encode", "--design", tmp.file("design.json"), "--items", "1,3,8",
                                "--out", tmp.file("dump.txt")});
    REQUIRE(enc.exit_code == 0);
    {
        std::ifstream dump_in(tmp.file("dump.txt"));
        const MeasurementSet ms = read_dump(dump_in);
        REQUIRE(ms.vectors.size() == 4);
        REQUIRE(ms.vectors[0].to_bit_string() == fixtures::kZBits[0]);
    }
    const CliRun dec = run_cli(
        {"decode", "--design", tmp.file("design.json"), "--dump", tmp.file("dump.txt")});
    REQUIRE(dec.exit_code == 0);
    const auto j = nlohmann::json::parse(dec.out);
    REQUIRE(j["identified"] == nlohmann::json::array({1, 3, 8}));
    REQUIRE(j["iterations"] == 3);
}

TEST_CASE("decode on a truncated dump exits 2 with a diagnostic", "[cli]") {
    TempDir tmp;
    {
        std::ofstream design_out(tmp.file("design.json"));
        write_design(design_out,
                     DesignFile{fixtures::worked_example_design(), std::nullopt, std::nullopt});
        std::ofstream dump_out(tmp.file("dump.txt"));
        dump_out << "SAFFRON-MS v1 n=8 M=4 bits=18 q=0\n55c8c\n";
    }
    const CliRun dec = run_cli(
        {"decode", "--design", tmp.file("design.json"), "--dump", tmp.file("dump.txt")});
    REQUIRE(dec.exit_code == 2);
    REQUIRE(dec.err.find("truncated") != std::string::npos);
}

TEST_CASE("unknown arguments and missing files exit 2", "[cli]") {
    REQUIRE(run_cli({"frobnicate"}).exit_code == 2);
    REQUIRE(run_cli({"decode", "--design", "/nonexistent.json", "--dump", "/also-missing"})
                .exit_code == 2);
    REQUIRE(run_cli({"sweep", "--axis", "M"}).exit_code == 2);  // --values missing
}

TEST_CASE("help exits 0", "[cli]") {
    const CliRun r = run_cli({"--help"});
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.find("design") != std::string::npos);
}

TEST_CASE("simulate reports a summary and honors --strict", "[cli]") {
    TempDir tmp;
    {
        std::ofstream cfg_out(tmp.file("cfg.json"));
        cfg_out << R"({"variant": "saffron", "n": 65536, "K": 100, "d": 7, "M": 700,
                       "trials": 30, "master_seed": 99})";
    }
    const CliRun sim = run_cli({"simulate", "--config", tmp.file("cfg.json")});
    REQUIRE(sim.exit_code == 0);
    const auto j = nlohmann::json::parse(sim.out);
    REQUIRE(j["trials"] == 30);
    REQUIRE(j["tests"] == 700ull * 6 * 16);
    REQUIRE(j["fully_recovered_trials"].get<std::uint64_t>() +
                j["failed_trials"].get<std::uint64_t>() ==
            30);

    // an under-provisioned run breaches the strict threshold
    const CliRun strict = run_cli({"simulate", "--config", tmp.file("cfg.json"), "--M", "150",
                                   "--trials", "5", "--strict"});
    REQUIRE(strict.exit_code == 3);
}

TEST_CASE("sweep emits one CSV row per axis value, reproducibly", "[cli]") {
    TempDir tmp;
    {
        std::ofstream cfg_out(tmp.file("cfg.json"));
        cfg_out << R"({"variant": "saffron", "n": 65536, "K": 100, "d": 5,
                       "trials": 10, "master_seed": 123})";
    }
    const std::vector<std::string> args{"sweep",    "--config", tmp.file("cfg.json"),
                                        "--axis",   "M",        "--values",
                                        "300,500",  "--no-timing"};
    const CliRun a = run_cli(args);
    const CliRun b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.out == b.out);
    REQUIRE(std::count(a.out.begin(), a.out.end(), '\n') == 3);  // header + 2 rows
}

TEST_CASE("bench produces a row per axis value", "[cli]") {
    const CliRun r = run_cli({"bench", "--n", "65536", "--K", "4", "--d", "3", "--M", "50",
                              "--variant", "saffron", "--axis", "K", "--values", "2,4",
                              "--min-seconds", "0.001"});
    REQUIRE(r.exit_code == 0);
    REQUIRE(std::count(r.out.begin(), r.out.end(), '\n') == 3);
    REQUIRE(r.out.rfind("axis,median_decode_seconds,trials,tests\n", 0) == 0);
}
