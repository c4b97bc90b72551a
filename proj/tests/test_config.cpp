#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "dit/config.hpp"
#include "dit/io.hpp"
#include "dit/runner.hpp"
#include "dit/scenarios.hpp"

namespace fs = std::filesystem;

namespace {

std::string tiny_config(const std::string& outdir) {
    return R"({
      "aperture": {"type": "staircase", "breakpoints": [0.2], "levels": [0.0, 1.0]},
      "initial_state": {"type": "coherent", "q": -6.0, "p": 4.0},
      "time": 1.0,
      "grid": {"x_min": -12.7, "x_max": 0.7, "n": 135},
      "output_grid": {"x_min": -12.05, "x_max": 7.95, "n": 101},
      "husimi": {"q_min": -8.0, "q_max": 8.0, "nq": 9, "p_min": -2.0, "p_max": 8.0, "np": 9},
      "output": {"directory": ")" + outdir + R"(", "prefix": "tiny"}
    })";
}

}  // namespace

TEST_CASE("scenario parsing: strictness and diagnostics") {
    CHECK_THROWS_AS(dit::parse_scenario("{ not json", "x"), dit::ConfigError);
    CHECK_THROWS_WITH(dit::parse_scenario(R"({"aperture": {"type": "staircase",
        "breakpoints": [], "levels": [1.3]},
        "initial_state": {"type": "coherent", "q": 0.0, "p": 0.0},
        "time": 1.0, "grid": {"x_min": -1.0, "x_max": 1.0, "n": 8}})", "x"),
                      Catch::Matchers::ContainsSubstring("[0,1]"));
    CHECK_THROWS_WITH(dit::parse_scenario(R"({"aperture": {"type": "staircase",
        "breakpoints": [], "levels": [1.0]}, "bogus_key": 1,
        "initial_state": {"type": "coherent", "q": 0.0, "p": 0.0},
        "time": 1.0, "grid": {"x_min": -1.0, "x_max": 1.0, "n": 8}})", "x"),
                      Catch::Matchers::ContainsSubstring("bogus_key"));
    CHECK_THROWS_AS(dit::parse_scenario(R"({"aperture": {"type": "staircase",
        "breakpoints": [], "levels": [1.0]},
        "initial_state": {"type": "coherent", "q": 0.0, "p": 0.0},
        "time": -2.0, "grid": {"x_min": -1.0, "x_max": 1.0, "n": 8}})", "x"),
                    dit::ConfigError);
}

TEST_CASE("aperture JSON round trip") {
    const auto j = nlohmann::json::parse(
        R"({"type": "staircase", "breakpoints": [0.5, 1.25], "levels": [0.0, 0.5, 1.0]})");
    const auto a = dit::aperture_from_json(j);
    CHECK(dit::aperture_to_json(a) == j);

    const auto js = nlohmann::json::parse(
        R"({"type": "sampled", "times": [0.0, 1.0, 2.0], "values": [0.0, 1.0, 0.5]})");
    CHECK(dit::aperture_to_json(dit::aperture_from_json(js)) == js);

    const auto jg = nlohmann::json::parse(
        R"({"type": "grating", "cell": {"breakpoints": [0.056], "levels": [0.0, 1.0]},
            "dt": 0.056, "periods": 3})");
    const auto g = dit::aperture_from_json(jg);
    CHECK(std::get<dit::StaircaseAperture>(g).breakpoints().size() == 5);

    CHECK_THROWS_AS(dit::aperture_from_json(nlohmann::json::parse(R"({"type": "nope"})")),
                    dit::ConfigError);
}

TEST_CASE("bundled scenarios parse and match the files shipped in scenarios/") {
    for (const auto& name : dit::bundled_scenario_names()) {
        const char* text = dit::bundled_scenario(name);
        REQUIRE(text != nullptr);
        CHECK_NOTHROW(dit::parse_scenario(text, name));
        const std::string file_path = std::string(DIT_SCENARIO_DIR) + "/" + name + ".json";
        CHECK(dit::read_text_file(file_path) == text);
    }
    CHECK(dit::bundled_scenario("nonexistent") == nullptr);
}

TEST_CASE("run_scenario writes deterministic, provenance-stamped outputs") {
    const std::string dir = (fs::temp_directory_path() / "dit_cfg_test").string();
    fs::remove_all(dir);
    const auto cfg = dit::parse_scenario(tiny_config(dir), "tiny");
    const auto r1 = dit::run_scenario(cfg);
    REQUIRE(fs::exists(r1.density_path));
    REQUIRE(fs::exists(r1.husimi_path));
    REQUIRE(fs::exists(r1.metadata_path));

    const std::string density1 = dit::read_text_file(r1.density_path);
    CHECK(density1.find("config_hash: " + dit::hex64(r1.config_hash)) != std::string::npos);
    CHECK(density1.find("aperture_route: closed-form-staircase") != std::string::npos);
    CHECK(density1.find("columns: x re im density") != std::string::npos);

    const std::string husimi1 = dit::read_text_file(r1.husimi_path);
    const auto r2 = dit::run_scenario(cfg);
    CHECK(dit::read_text_file(r2.density_path) == density1);  // byte-identical
    CHECK(dit::read_text_file(r2.husimi_path) == husimi1);

    const auto meta = nlohmann::json::parse(dit::read_text_file(r1.metadata_path));
    CHECK(meta["config_hash"] == dit::hex64(r1.config_hash));
    CHECK(meta["observables"].contains("transmitted"));
    CHECK(meta["timings_seconds"].contains("evolve"));
    fs::remove_all(dir);
}

TEST_CASE("initial state from an amplitude table") {
    const std::string dir = (fs::temp_directory_path() / "dit_cfg_table").string();
    fs::create_directories(dir);
    // write a table matching the grid of a tiny config, then run with it
    const dit::SpaceGrid g(-12.81, 0.59, 68);
    {
        dit::TableWriter w(dir + "/init.tsv");
        w.header("columns: x re im");
        for (int i = 0; i < g.n; ++i) {
            const auto a = dit::coherent_amplitude(-6.0, 3.0, g.point(i));
            w.row({g.point(i), a.real(), a.imag()});
        }
        w.write();
    }
    const std::string cfg_text = R"({
      "aperture": {"type": "staircase", "breakpoints": [], "levels": [1.0]},
      "initial_state": {"type": "table", "path": ")" + dir + R"(/init.tsv"},
      "time": 0.5,
      "grid": {"x_min": -12.81, "x_max": 0.59, "n": 68},
      "output_grid": {"x_min": -8.05, "x_max": -2.05, "n": 25},
      "output": {"directory": ")" + dir + R"(", "prefix": "tbl"}
    })";
    const auto cfg = dit::parse_scenario(cfg_text, "tbl");
    const auto res = dit::run_scenario(cfg);
    CHECK(res.obs.norm2 > 0.5);
    fs::remove_all(dir);
}
