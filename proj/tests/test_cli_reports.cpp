#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwlab/csv.hpp"
#include "pwlab/defaults.hpp"
#include "pwlab/errors.hpp"
#include "pwlab/scenario.hpp"

using namespace pwlab;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* leaf) {
    const fs::path p = fs::temp_directory_path() / "pwlab-cli-tests" / leaf;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::vector<std::string> read_lines(const fs::path& path) {
    const std::string bytes = read_bytes(path);
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : bytes) {
        if (ch == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    CHECK(cur.empty());  // every line LF-terminated
    return lines;
}

} // namespace

TEST_CASE("config file parsing") {
    const fs::path dir = fresh_dir("config");
    const fs::path good = dir / "good.cfg";
    write_text(good,
               "# comment\n"
               "\n"
               "  seed = 99  \n"
               "grid-n=128\n"
               "out = runs/a\n"
               "\t# indented comment\n");
    const auto entries = parse_config_file(good.string());
    CHECK(entries.size() == 3);
    CHECK(entries.at("seed") == "99");
    CHECK(entries.at("grid-n") == "128");
    CHECK(entries.at("out") == "runs/a");

    CHECK_THROWS_AS(parse_config_file((dir / "missing.cfg").string()), ConfigError);

    const fs::path bad1 = dir / "noeq.cfg";
    write_text(bad1, "seed 99\n");
    CHECK_THROWS_AS(parse_config_file(bad1.string()), ConfigError);

    const fs::path bad2 = dir / "nokey.cfg";
    write_text(bad2, "= 99\n");
    CHECK_THROWS_AS(parse_config_file(bad2.string()), ConfigError);

    const fs::path bad3 = dir / "dup.cfg";
    write_text(bad3, "seed=1\nseed=2\n");
    CHECK_THROWS_AS(parse_config_file(bad3.string()), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("domain parsing") {
    const auto d = parse_domain(" -8 , 8 ");
    CHECK(d.first == -8.0);
    CHECK(d.second == 8.0);
    CHECK_THROWS_AS(parse_domain("8"), ConfigError);
    CHECK_THROWS_AS(parse_domain("a,b"), ConfigError);
    CHECK_THROWS_AS(parse_domain("1,2,3"), ConfigError);
}

TEST_CASE("per-scenario defaults") {
    const ScenarioConfig n = resolve_config("neumaier-correlations", {}, {});
    CHECK(n.seed == defaults::seed);
    CHECK(n.grid_n == 512);
    CHECK(n.nmax == 40);
    CHECK(n.samples == 100000);
    CHECK(n.tau_frac == 0.5);
    CHECK(n.domain_min == -8.0);
    CHECK(n.domain_max == 8.0);
    CHECK(n.out_dir == "out");

    CHECK(resolve_config("measurement-chain", {}, {}).grid_n == 128);
    CHECK(resolve_config("measurement-chain", {}, {}).samples == 0);
    CHECK(resolve_config("ghose-two-slit", {}, {}).samples == 10000);
    CHECK(resolve_config("equivariance", {}, {}).samples == 10000);
}

TEST_CASE("flags override the file, the file overrides defaults") {
    std::map<std::string, std::string> file{{"seed", "99"}, {"grid-n", "128"}, {"tau-frac", "0.25"}};
    ConfigOverrides flags;
    flags.grid_n = 64;
    const ScenarioConfig c = resolve_config("neumaier-correlations", file, flags);
    CHECK(c.seed == 99);
    CHECK(c.grid_n == 64);
    CHECK(c.tau_frac == 0.25);
    CHECK(c.samples == 100000);
}

TEST_CASE("configuration rejections") {
    CHECK_THROWS_AS(resolve_config("unknown-scenario", {}, {}), ConfigError);
    CHECK_THROWS_AS(resolve_config("equivariance", {{"grid", "64"}}, {}), ConfigError);

    ConfigOverrides flags;
    flags.grid_n = 512;
    CHECK_THROWS_AS(resolve_config("measurement-chain", {}, flags), ConfigError);
    CHECK_NOTHROW(resolve_config("neumaier-correlations", {}, flags));

    flags = {};
    flags.grid_n = 64;
    flags.nmax = 64;
    CHECK_THROWS_AS(resolve_config("neumaier-correlations", {}, flags), ConfigError);
    flags.nmax = 63;
    CHECK_NOTHROW(resolve_config("neumaier-correlations", {}, flags));

    flags = {};
    flags.domain = {-4.0, 6.0};
    CHECK_THROWS_AS(resolve_config("neumaier-correlations", {}, flags), ConfigError);
    CHECK_NOTHROW(resolve_config("ghose-two-slit", {}, flags));
    flags.domain = {2.0, 2.0};
    CHECK_THROWS_AS(resolve_config("ghose-two-slit", {}, flags), ConfigError);

    flags = {};
    flags.tau_frac = 3.0;
    CHECK_THROWS_AS(resolve_config("neumaier-correlations", {}, flags), ConfigError);

    flags = {};
    flags.samples = 99;
    CHECK_THROWS_AS(resolve_config("ghose-two-slit", {}, flags), ConfigError);
    flags.samples = 100;
    CHECK_NOTHROW(resolve_config("ghose-two-slit", {}, flags));
    flags.samples = 999;
    CHECK_THROWS_AS(resolve_config("equivariance", {}, flags), ConfigError);

    flags = {};
    flags.out_dir = std::string();
    CHECK_THROWS_AS(resolve_config("ghose-two-slit", {}, flags), ConfigError);
}

TEST_CASE("csv writer emits full-precision LF rows") {
    const fs::path dir = fresh_dir("csv");
    const fs::path path = dir / "t.csv";
    const std::vector<double> values{0.1, 1.0 / 3.0, -2.5e300, 7.25, 1e-300};
    {
        CsvWriter csv(path.string(), "a,b,c,d,e");
        csv.row(values);
    }
    const std::string bytes = read_bytes(path);
    CHECK(bytes.find('\r') == std::string::npos);
    const auto lines = read_lines(path);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "a,b,c,d,e");

    std::vector<double> parsed;
    const char* p = lines[1].c_str();
    while (true) {
        char* end = nullptr;
        parsed.push_back(std::strtod(p, &end));
        if (*end == '\0') break;
        REQUIRE(*end == ',');
        p = end + 1;
    }
    REQUIRE(parsed.size() == values.size());
    for (std::size_t i = 0; i < values.size(); ++i) CHECK(parsed[i] == values[i]);

    CHECK_THROWS_AS(CsvWriter("/nonexistent-pwlab-dir/x.csv", "a"), IoError);
    fs::remove_all(dir);
}

TEST_CASE("scenario run produces a complete report and output files") {
    const fs::path dir = fresh_dir("run-ghose");
    ConfigOverrides flags;
    flags.samples = 500;
    flags.seed = 4321;
    flags.out_dir = (dir / "nested" / "out").string();
    const ScenarioConfig c = resolve_config("ghose-two-slit", {}, flags);
    const RunReport rep = run_scenario(c);
    CHECK(rep.all_pass());
    CHECK(rep.wall_time_s >= 0.0);

    const fs::path out = dir / "nested" / "out";
    const nlohmann::json j = nlohmann::json::parse(read_bytes(out / "report.json"));
    CHECK(j.at("scenario") == "ghose-two-slit");
    CHECK(j.at("defaults_version") == defaults::version);
    CHECK(j.at("config").at("samples") == 500);
    CHECK(j.at("config").at("seed") == 4321);
    CHECK(j.at("all_pass") == true);
    CHECK(j.at("wall_time_s").get<double>() >= 0.0);
    CHECK_FALSE(j.contains("error"));
    REQUIRE(j.at("metrics").is_array());
    REQUIRE(!j.at("metrics").empty());
    double skipped_fraction = -1.0;
    for (const auto& m : j.at("metrics")) {
        CHECK(m.at("name").is_string());
        CHECK(m.at("value").is_number());
        CHECK(m.at("pass").is_boolean());
        CHECK(m.at("informational").is_boolean());
        if (!m.at("informational").get<bool>()) {
            CHECK(m.at("target").is_number());
            CHECK(m.at("tolerance").is_number());
        }
        if (m.at("name") == "skipped_node_fraction") skipped_fraction = m.at("value").get<double>();
    }
    REQUIRE(skipped_fraction >= 0.0);

    const auto field = read_lines(out / "velocity_field.csv");
    REQUIRE(!field.empty());
    CHECK(field[0] == "x1,x2,v1,v2,vsum,predicted_vsum");
    const long evaluated = 500 - std::lround(skipped_fraction * 500);
    CHECK(static_cast<long>(field.size()) == evaluated + 1);

    const auto traj = read_lines(out / "pair_trajectory.csv");
    REQUIRE(!traj.empty());
    CHECK(traj[0] == "member,t,x");
    CHECK(traj.size() == 2 * 101 + 1);
    fs::remove_all(dir);
}

TEST_CASE("numerical failure is embedded in the report before rethrow") {
    const fs::path dir = fresh_dir("run-error");
    ConfigOverrides flags;
    flags.domain = {-2.0, 2.0};  // far too small for the ground state's tails
    flags.grid_n = 64;
    flags.nmax = 12;
    flags.out_dir = (dir / "out").string();
    const ScenarioConfig c = resolve_config("neumaier-correlations", {}, flags);
    CHECK_THROWS_AS(run_scenario(c), DomainTooSmallError);

    const nlohmann::json j = nlohmann::json::parse(read_bytes(dir / "out" / "report.json"));
    CHECK(j.at("all_pass") == false);
    REQUIRE(j.contains("error"));
    CHECK(j.at("error").at("kind") == "domain-too-small");
    CHECK(j.at("error").at("message").is_string());
    fs::remove_all(dir);
}
