#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "congcount/cli.hpp"

using namespace congcount;
namespace cli = congcount::cli;

namespace {

std::string run_to_string(const std::vector<std::string>& args, int expect_code) {
    std::ostringstream out;
    const auto cmd = cli::parse_args(args);
    const int code = cli::run(cmd, out);
    INFO(out.str());
    CHECK(code == expect_code);
    return out.str();
}

std::string temp_file(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("parse_args validates subcommands and flags", "[cli]") {
    SECTION("count command parses") {
        const auto cmd = cli::parse_args({"count", "--kind", "J4", "--p", "7", "--h", "1", "--n", "6"});
        CHECK(cmd.sub == cli::Command::Sub::Count);
        CHECK(cmd.query.kind == "J4");
        CHECK(cmd.query.p == 7);
        CHECK(cmd.query.h == 1);
        CHECK(cmd.query.N == 6);
    }
    SECTION("non-prime modulus is a usage error") {
        CHECK_THROWS_AS(cli::parse_args({"count", "--kind", "J4", "--p", "8", "--h", "1", "--n", "6"}),
                        cli::usage_error);
    }
    SECTION("unknown flag is a usage error") {
        CHECK_THROWS_AS(cli::parse_args({"count", "--kind", "J4", "--p", "7", "--zz", "1"}),
                        cli::usage_error);
    }
    SECTION("missing required flags are usage errors") {
        CHECK_THROWS_AS(cli::parse_args({"count", "--p", "7"}), cli::usage_error);
        CHECK_THROWS_AS(cli::parse_args({"count", "--kind", "J", "--p", "7"}), cli::usage_error);
        CHECK_THROWS_AS(cli::parse_args({"count", "--kind", "J1", "--p", "7", "--n", "3"}),
                        cli::usage_error);
        CHECK_THROWS_AS(cli::parse_args({"sweep"}), cli::usage_error);
        CHECK_THROWS_AS(cli::parse_args({}), cli::usage_error);
        CHECK_THROWS_AS(cli::parse_args({"frobnicate"}), cli::usage_error);
    }
    SECTION("sweep command parses") {
        const auto cmd = cli::parse_args({"sweep", "--config", "sweep.cfg", "--out", "r.csv"});
        CHECK(cmd.sub == cli::Command::Sub::Sweep);
        CHECK(cmd.sweep.config_path == "sweep.cfg");
        REQUIRE(cmd.sweep.out.has_value());
        CHECK(*cmd.sweep.out == "r.csv");
    }
    SECTION("help is not an error") {
        const auto cmd = cli::parse_args({"--help"});
        CHECK(cmd.sub == cli::Command::Sub::Help);
        CHECK_FALSE(cmd.help_text.empty());
        std::ostringstream out;
        CHECK(cli::run(cmd, out) == cli::kExitOk);
        const auto sub = cli::parse_args({"count", "--help"});
        CHECK(sub.sub == cli::Command::Sub::Help);
        CHECK(sub.help_text.find("--kind") != std::string::npos);
    }
    SECTION("per-subcommand help documents every flag") {
        const auto count_help = cli::parse_args({"count", "--help"}).help_text;
        for (const char* flag : {"--kind", "--p", "--g", "--H", "--K", "--M", "--N", "--h", "--n",
                                 "--u", "--v", "--u-size", "--v-size", "--x", "--x-size", "--S",
                                 "--T", "--xs", "--xt", "--ys", "--yt", "--seed"}) {
            CAPTURE(flag);
            CHECK(count_help.find(flag) != std::string::npos);
        }
        const auto sweep_help = cli::parse_args({"sweep", "--help"}).help_text;
        for (const char* flag : {"--config", "--out", "--format", "--workers"}) {
            CHECK(sweep_help.find(flag) != std::string::npos);
        }
        const auto weil_help = cli::parse_args({"check-weil", "--help"}).help_text;
        for (const char* flag : {"--primes", "--max-p", "--cap", "--samples", "--h", "--seed", "--out"}) {
            CHECK(weil_help.find(flag) != std::string::npos);
        }
    }
}

TEST_CASE("count results match the library", "[cli]") {
    SECTION("J4 fixture") {
        const auto out = run_to_string({"count", "--kind", "J4", "--p", "7", "--h", "1", "--n", "6"},
                                       cli::kExitOk);
        CHECK(out.find("count=6") != std::string::npos);
        CHECK(out.find("main=36/7") != std::string::npos);
    }
    SECTION("J fixture with explicit box") {
        const auto out = run_to_string(
            {"count", "--kind", "J", "--p", "7", "--H", "0", "--K", "6", "--M", "0", "--N", "3"},
            cli::kExitOk);
        CHECK(out.find("count=3") != std::string::npos);
        const auto ctx = find_primitive_root(PrimeField(7));
        CHECK(count_J(PowerBoxQuery(ctx, 0, 6, 0, 3)) == 3);
    }
    SECTION("J2 with explicit sets") {
        const auto out = run_to_string(
            {"count", "--kind", "J2", "--p", "5", "--u", "1,2", "--v", "1,3", "--S", "0", "--T", "2"},
            cli::kExitOk);
        CHECK(out.find("count=3") != std::string::npos);
    }
    SECTION("J1 and J3 run") {
        CHECK(run_to_string({"count", "--kind", "J1", "--p", "7", "--h", "1", "--n", "6"}, cli::kExitOk)
                  .find("count=5") != std::string::npos);
        CHECK(run_to_string({"count", "--kind", "J3", "--p", "7", "--x", "1,3,5", "--S", "2", "--T", "3"},
                            cli::kExitOk)
                  .find("count=2") != std::string::npos);
    }
    SECTION("rejects a non-generator override") {
        const auto cmd = cli::parse_args({"count", "--kind", "J", "--p", "7", "--g", "2", "--K", "3",
                                          "--N", "3"});
        std::ostringstream out;
        CHECK(cli::run(cmd, out) == cli::kExitUsage);
    }
}

TEST_CASE("sandwich reports a valid bracket", "[cli]") {
    const auto out = run_to_string({"sandwich", "--kind", "J", "--p", "101", "--K", "50", "--N", "50"},
                                   cli::kExitOk);
    CHECK(out.find("bracket=ok") != std::string::npos);
    CHECK(out.find("divisor=") != std::string::npos);
    for (const char* kind : {"J1", "J2", "J3", "J4"}) {
        std::vector<std::string> args{"sandwich", "--kind", kind, "--p", "101"};
        if (std::string(kind) == "J1" || std::string(kind) == "J4") {
            args.insert(args.end(), {"--h", "3", "--n", "40"});
        } else if (std::string(kind) == "J2") {
            args.insert(args.end(), {"--u-size", "10", "--v-size", "12", "--T", "30", "--seed", "5"});
        } else {
            args.insert(args.end(), {"--x-size", "17", "--T", "30", "--seed", "5"});
        }
        CHECK(run_to_string(args, cli::kExitOk).find("bracket=ok") != std::string::npos);
    }
}

TEST_CASE("audit subcommands", "[cli]") {
    SECTION("check-weil on a prime list") {
        const auto out = run_to_string({"check-weil", "--primes", "3,5,7"}, cli::kExitOk);
        CHECK(out.find("violations=0") != std::string::npos);
        CHECK(out.find("minus_one=ok") != std::string::npos);
        CHECK(out.find("seed=") != std::string::npos);
    }
    SECTION("check-lemma") {
        const auto out = run_to_string({"check-lemma", "--trials", "40", "--seed", "3"}, cli::kExitOk);
        CHECK(out.find("violations=0") != std::string::npos);
        CHECK(out.find("seed=3") != std::string::npos);
    }
    SECTION("check-l1 prints one row per cell") {
        const auto out = run_to_string({"check-l1", "--primes", "101", "--T", "1,p/2,p"}, cli::kExitOk);
        CHECK(out.find("ratio_sqrtp_logp=") != std::string::npos);
        CHECK(std::count(out.begin(), out.end(), '\n') == 3);
    }
    SECTION("non-prime in audit lists") {
        CHECK_THROWS_AS(cli::parse_args({"check-weil", "--primes", "3,4,7"}), cli::usage_error);
        CHECK_THROWS_AS(cli::parse_args({"check-l1", "--primes", "9"}), cli::usage_error);
    }
}

TEST_CASE("sweep and report drive the full pipeline", "[cli]") {
    const auto cfg_path = temp_file("congcount_cli_sweep.cfg");
    const auto csv_path = temp_file("congcount_cli_sweep.csv");
    const auto json_path = temp_file("congcount_cli_sweep.json");
    {
        std::ofstream cfg(cfg_path);
        cfg << "primes = 101 211\nseed = 9\ntrials = 1\nworkers = 2\nout = " << csv_path
            << "\n[thm1]\nK = p/4 p/2\nN = p/4\n[thm5]\nN = p/2\n";
    }
    SECTION("sweep writes a report the report command accepts") {
        const auto out = run_to_string({"sweep", "--config", cfg_path}, cli::kExitOk);
        CHECK(out.find("records=6") != std::string::npos);
        CHECK(out.find("crossover_violations=0") != std::string::npos);
        const auto rep = run_to_string({"report", "--in", csv_path, "--json", json_path}, cli::kExitOk);
        CHECK(rep.find("problems=0") != std::string::npos);
        std::ifstream js(json_path);
        REQUIRE(js.good());
        nlohmann::json arr;
        js >> arr;
        CHECK(arr.size() == 6);
        std::filesystem::remove(json_path);
    }
    SECTION("unwritable output path exits 3") {
        const auto out = run_to_string(
            {"sweep", "--config", cfg_path, "--out", "/nonexistent-dir/r.csv"}, cli::kExitIo);
        CHECK(out.find("io error") != std::string::npos);
    }
    SECTION("missing config exits 3") {
        run_to_string({"sweep", "--config", "/nonexistent-dir/sweep.cfg"}, cli::kExitIo);
    }
    SECTION("malformed config exits 2") {
        const auto bad_path = temp_file("congcount_cli_bad.cfg");
        std::ofstream bad(bad_path);
        bad << "primes = 101\nwhatever = 3\n";
        bad.close();
        run_to_string({"sweep", "--config", bad_path}, cli::kExitUsage);
        std::filesystem::remove(bad_path);
    }
    SECTION("report flags corruption with exit 1") {
        run_to_string({"sweep", "--config", cfg_path}, cli::kExitOk);
        std::ifstream in(csv_path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        in.close();
        const auto pos = text.find(",0.");
        REQUIRE(pos != std::string::npos);
        text[pos + 3] = text[pos + 3] == '9' ? '1' : '9';
        std::ofstream out(csv_path, std::ios::binary);
        out << text;
        out.close();
        run_to_string({"report", "--in", csv_path}, cli::kExitAssert);
    }
    std::filesystem::remove(cfg_path);
    std::filesystem::remove(csv_path);
}
