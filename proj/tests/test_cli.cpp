#include "resist/run.hpp"

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

using namespace resist;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::InvalidArgument;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("grid parsing") {
    const auto g = parse_grid("0:0.1:1");
    REQUIRE(g.size() == 11);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK(g[5] == doctest::Approx(0.5).epsilon(1e-15));

    CHECK(parse_grid("0.5:1:0.5") == std::vector<double>{0.5});
    CHECK(parse_grid("-0.2:0.2:0.4").size() == 4);

    CHECK(kind_of([] { parse_grid("0:0.1"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_grid("0:-0.1:1"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_grid("0:0.3:1"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_grid("1:0.1:0"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_grid("a:b:c"); }) == ErrorKind::ConfigError);
}

TEST_CASE("domain parsing") {
    const auto disc = parse_omega("disc:2:6");
    REQUIRE(disc.size() == 6);
    CHECK(disc[0].norm() == doctest::Approx(2.0).epsilon(1e-12));

    const auto poly = parse_omega("poly:0,0;2,0;2,1;0,1");
    REQUIRE(poly.size() == 4);
    CHECK(poly[2] == Vec2(2, 1));

    CHECK(kind_of([] { parse_omega("disc:0:8"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_omega("disc:1:2"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_omega("poly:0,0;1,0"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_omega("ball:1"); }) == ErrorKind::ConfigError);

    CHECK(parse_vec3("1,2,3") == Vec3(1, 2, 3));
    CHECK(kind_of([] { parse_vec3("1,2"); }) == ErrorKind::ConfigError);
    CHECK(parse_vec2("0.25,-1") == Vec2(0.25, -1));
}

TEST_CASE("JSON config honors every key and rejects unknown ones") {
    const std::string text = R"({
        "command": "stretch", "law": "area", "M": 2.0, "L": 1.5, "N": 64,
        "omega": "disc:1:16", "h": 0.1, "starts": 2, "body": "cube",
        "apex": "0.5,0.5,2", "s_grid": "0:0.5:1", "suite": "measures",
        "x0": "0.1,0.2", "taus": [0.5, 0.1], "support_radius": 0.2,
        "delta": 0.04, "seed": 777, "out_dir": "somewhere"
    })";
    const RunConfig cfg = config_from_json_text(text);
    CHECK(cfg.command == "stretch");
    CHECK(cfg.law == "area");
    CHECK(cfg.M == 2.0);
    CHECK(cfg.N == 64);
    CHECK(cfg.starts == 2);
    CHECK(cfg.taus == std::vector<double>{0.5, 0.1});
    CHECK(cfg.seed == 777);
    CHECK(cfg.out_dir == "somewhere");

    CHECK(kind_of([] { config_from_json_text("{\"bogus\": 1}"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { config_from_json_text("{\"M\": \"tall\"}"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { config_from_json_text("not json at all"); }) == ErrorKind::ConfigError);
    // Seed may arrive as a decimal string.
    CHECK(config_from_json_text("{\"seed\": \"42\"}").seed == 42);
}

TEST_CASE("seed falls back to the environment") {
    setenv("RESIST_SEED", "99", 1);
    CHECK(default_seed() == 99);
    CHECK(config_from_json_text("{}").seed == 99);
    setenv("RESIST_SEED", "nope", 1);
    CHECK(kind_of([] { default_seed(); }) == ErrorKind::ConfigError);
    unsetenv("RESIST_SEED");
    CHECK(default_seed() == 12345);
}

TEST_CASE("config validation") {
    RunConfig cfg;
    cfg.command = "warp";
    CHECK(kind_of([&] { validate_config(cfg); }) == ErrorKind::ConfigError);
    cfg.command = "solve-radial";
    cfg.law = "area";
    CHECK(kind_of([&] { validate_config(cfg); }) == ErrorKind::ConfigError);
    cfg.law = "classical";
    cfg.N = 1;
    CHECK(kind_of([&] { validate_config(cfg); }) == ErrorKind::ConfigError);
    cfg.N = 100;
    CHECK_NOTHROW(validate_config(cfg));
    cfg.command = "verify";
    cfg.suite = "everything";
    CHECK(kind_of([&] { validate_config(cfg); }) == ErrorKind::ConfigError);
}

TEST_CASE("stretch run writes a gated, hashed artifact set") {
    TempDir dir("resist_cli_stretch");
    RunConfig cfg;
    cfg.command = "stretch";
    cfg.body = "cube";
    cfg.apex = "0.5,0.5,1.75";
    cfg.s_grid = "0:0.25:1";
    cfg.out_dir = (dir.path / "a").string();
    CHECK(run(cfg) == 0);

    const std::string family = slurp(fs::path(cfg.out_dir) / "family.csv");
    CHECK(family.rfind("s,F,area_near,area_V,closure_defect\n", 0) == 0);
    CHECK(fs::exists(fs::path(cfg.out_dir) / "frame_000.off"));
    CHECK(fs::exists(fs::path(cfg.out_dir) / "frame_004.off"));
    CHECK(fs::exists(fs::path(cfg.out_dir) / "report.json"));

    const std::string manifest = slurp(fs::path(cfg.out_dir) / "manifest.json");
    for (const char* name :
         {"family.csv", "frame_000.off", "frame_004.off", "report.json", "\"fnv1a64\""})
        CHECK(manifest.find(name) != std::string::npos);

    // Identical config and seed reproduce the CSV byte for byte.
    RunConfig again = cfg;
    again.out_dir = (dir.path / "b").string();
    CHECK(run(again) == 0);
    CHECK(slurp(fs::path(again.out_dir) / "family.csv") == family);
    CHECK(slurp(fs::path(again.out_dir) / "manifest.json") == manifest);
}

TEST_CASE("solve-radial run gates its profile report") {
    TempDir dir("resist_cli_radial");
    RunConfig cfg;
    cfg.command = "solve-radial";
    cfg.N = 200;
    cfg.starts = 3;
    cfg.out_dir = (dir.path / "out").string();
    CHECK(run(cfg) == 0);
    const std::string report = slurp(fs::path(cfg.out_dir) / "report.json");
    CHECK(report.find("\"pass\": true") != std::string::npos);
    const std::string profile = slurp(fs::path(cfg.out_dir) / "profile.csv");
    CHECK(profile.rfind("r,phi\n", 0) == 0);
    CHECK(fs::exists(fs::path(cfg.out_dir) / "trace.csv"));
    CHECK(fs::exists(fs::path(cfg.out_dir) / "field.off"));
}

TEST_CASE("verify suites pass on the shipped instances") {
    TempDir dir("resist_cli_verify");
    RunConfig cfg;
    cfg.command = "verify";
    cfg.suite = "measures";
    cfg.seed = 7;
    cfg.out_dir = (dir.path / "m").string();
    CHECK(run(cfg) == 0);
    cfg.suite = "solver";
    cfg.out_dir = (dir.path / "s").string();
    CHECK(run(cfg) == 0);
    const std::string report = slurp(fs::path(cfg.out_dir) / "suite_report.json");
    CHECK(report.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("probe run certifies the cap") {
    TempDir dir("resist_cli_probe");
    RunConfig cfg;
    cfg.command = "probe";
    cfg.body = "cap";
    cfg.omega = "disc:1:48";
    cfg.h = 0.06;
    cfg.x0 = "0.3,0";
    cfg.taus = {0.1, 0.03, 0.01};
    cfg.support_radius = 0.12;
    cfg.out_dir = (dir.path / "p").string();
    CHECK(run(cfg) == 0);
    const std::string report = slurp(fs::path(cfg.out_dir) / "report.json");
    CHECK(report.find("CertifiedNonoptimal") != std::string::npos);
    const std::string csv = slurp(fs::path(cfg.out_dir) / "probe.csv");
    CHECK(csv.rfind("tau,I1,I2,Q\n", 0) == 0);
}
