#include <doctest.h>
#include <filesystem>
#include <fstream>

#include "pmstab/config.hpp"
#include "pmstab/errors.hpp"
#include "pmstab/runner.hpp"

using namespace pmstab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("pmstab_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("config parse, serialize, round trip") {
    const std::string text = R"(
# physical constants
m = 1.5
sigma = 0.25
mu = 0.31
k_max = 10            # trailing comment
modes = 0, 2, 5
experiment = gc-scan
seed = 42
)";
    const RunConfig cfg = parse_config(text);
    CHECK(cfg.params.m == 1.5);
    CHECK(cfg.params.sigma == 0.25);
    CHECK(cfg.params.mu == 0.31);
    CHECK(cfg.k_max == 10);
    CHECK(cfg.modes == std::vector<int>{0, 2, 5});
    CHECK(cfg.experiment == Experiment::gc_scan);
    CHECK(cfg.seed == 42);

    // parse-serialize-parse is the identity
    const std::string ser = cfg.serialize();
    const RunConfig again = parse_config(ser);
    CHECK(again.serialize() == ser);
}

TEST_CASE("config rejections") {
    CHECK_THROWS_AS(parse_config("not_a_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("alpha == 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("alpha = fish\n"), ConfigError);

    RunConfig cfg = parse_config("mu = 0.7\n");
    try {
        cfg.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "mu");
        CHECK(std::string(e.what()).find("(0, 1/2)") != std::string::npos);
    }

    RunConfig bad_mode = parse_config("modes = 0, 99\n");
    CHECK_THROWS_AS(bad_mode.validate(), ConfigError);
}

TEST_CASE("run: invalid config exits 2") {
    RunConfig cfg;
    cfg.params.mu = 0.7;
    cfg.out_dir = (fresh_dir("badmu") / "out").string();
    CHECK(run(cfg) == 2);
}

TEST_CASE("run: deterministic CSV artifacts") {
    RunConfig cfg;
    cfg.experiment = Experiment::symbol_scan;
    cfg.symbol_density = 12;
    const fs::path dir_a = fresh_dir("det_a"), dir_b = fresh_dir("det_b");

    cfg.out_dir = dir_a.string();
    REQUIRE(run(cfg) == 0);
    cfg.out_dir = dir_b.string();
    REQUIRE(run(cfg) == 0);
    CHECK(slurp(dir_a / "symbol_scan.csv") == slurp(dir_b / "symbol_scan.csv"));
    CHECK(slurp(dir_a / "config.txt") == slurp(dir_b / "config.txt"));
    CHECK(fs::exists(dir_a / "report.json"));

    // gc-scan artifacts and report
    cfg.experiment = Experiment::gc_scan;
    cfg.gc_x0_x = 0.5;
    const fs::path dir_c = fresh_dir("det_c");
    cfg.out_dir = dir_c.string();
    REQUIRE(run(cfg) == 0);
    const std::string report = slurp(dir_c / "report.json");
    CHECK(report.find("\"max\": -0.5") != std::string::npos);
    CHECK(report.find("\"satisfied\": true") != std::string::npos);
}

TEST_CASE("run: spectrum experiment on a small config") {
    RunConfig cfg;
    cfg.experiment = Experiment::spectrum;
    cfg.k_max = 6;
    cfg.n_annulus = 16;
    cfg.n_disk = 16;
    cfg.lambda_min = 2.0;
    cfg.lambda_max = 120.0;
    cfg.params.m = 1.0;
    const fs::path dir = fresh_dir("spec");
    cfg.out_dir = dir.string();
    REQUIRE(run(cfg) == 0);
    CHECK(fs::exists(dir / "spectrum.csv"));
    CHECK(fs::exists(dir / "resolvent.csv"));
    const std::string report = slurp(dir / "report.json");
    CHECK(report.find("\"verdict\"") != std::string::npos);
}

TEST_CASE("compare: identical configs give identical verdicts, empty diff") {
    RunConfig cfg;
    cfg.k_max = 6;
    cfg.n_annulus = 16;
    cfg.n_disk = 16;
    cfg.lambda_max = 120.0;
    const fs::path dir = fresh_dir("cmp_same");
    REQUIRE(compare(cfg, cfg, dir.string()) == 0);
    const std::string joint = slurp(dir / "compare.json");
    CHECK(joint.find("\"diff\": {}") != std::string::npos);

    // structurally different configs are a usage error
    RunConfig other = cfg;
    other.n_annulus = 24;
    CHECK(compare(cfg, other, (dir / "x").string()) == 2);

    // physics-only differences are allowed
    RunConfig m1 = cfg;
    m1.params.m = 1.0;
    const fs::path dir2 = fresh_dir("cmp_m");
    REQUIRE(compare(cfg, m1, dir2.string()) == 0);
    const std::string joint2 = slurp(dir2 / "compare.json");
    CHECK(joint2.find("\"m\"") != std::string::npos);
}

TEST_CASE("grid and operator dumps") {
    RunConfig cfg;
    cfg.n_annulus = 12;
    cfg.n_disk = 12;
    cfg.k_max = 1;
    const fs::path dir = fresh_dir("dumps");
    cfg.out_dir = dir.string();
    REQUIRE(dump_grids(cfg) == 0);
    CHECK(fs::exists(dir / "grid_annulus.csv"));
    CHECK(fs::exists(dir / "grid_disk.csv"));
    REQUIRE(dump_operators(cfg) == 0);

    // binary header: magic + dims + row-major doubles
    std::ifstream in(dir / "op_k0_reduced.bin", std::ios::binary);
    char magic[8];
    in.read(magic, 8);
    CHECK(std::string(magic, 8) == "PMSTAB01");
    std::int64_t rows = 0, cols = 0;
    in.read(reinterpret_cast<char*>(&rows), 8);
    in.read(reinterpret_cast<char*>(&cols), 8);
    CHECK(rows == 3 * 12 + 2 * 12 - 10);
    CHECK(cols == rows);
}
