#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "diffsearch/config.hpp"
#include "diffsearch/report.hpp"

using namespace diffsearch;
using json = nlohmann::json;

TEST_CASE("configuration parsing") {
    const json doc = json::parse(R"({"b":0.2,"c":1,"lambda":0.01,"timeout_mean":10,"mu":0.05,"D":10,
                                     "N":4,"k":2,"stopping":"NoStop","sim":{"seed":9,"replications":50,"method":"euler"}})");
    const config::RunConfig cfg = config::parse(doc);
    const SearchParams p = validate(cfg.params);
    CHECK(p.timeout_r == doctest::Approx(0.1));
    CHECK(cfg.race == RaceSpec{4, 2, Stopping::NoStop});
    CHECK(cfg.sim.seed == 9);
    CHECK(cfg.sim.replications == 50);
    CHECK(cfg.sim.method == sim::Method::EulerMaruyama);
    CHECK_FALSE(cfg.profile.has_value());
}

TEST_CASE("segments in configuration") {
    const json doc = json::parse(R"({"r":0.05,"mu":0.025,"D":3,
        "segments":[{"size":1,"b":-1,"c":1,"lambda":0.5},{"size":"inf","b":0,"c":1,"lambda":0.1}]})");
    const config::RunConfig cfg = config::parse(doc);
    REQUIRE(cfg.profile.has_value());
    CHECK(cfg.profile->segments.size() == 2);
    CHECK(std::isinf(cfg.profile->segments[1].size));
    const json round = config::to_json(*cfg.profile);
    CHECK(config::parse(round).profile == cfg.profile);

    const json missing = json::parse(R"({"r":0.05,"D":3,"segments":[{"b":0,"c":1,"lambda":0.1}]})");
    CHECK_THROWS_AS(config::parse(missing), SearchError);
}

TEST_CASE("bad fields are rejected") {
    CHECK_THROWS_AS(config::parse(json::parse(R"({"N":2,"k":3})")), SearchError);
    CHECK_THROWS_AS(config::parse(json::parse(R"({"b":"fast"})")), SearchError);
    CHECK_THROWS_AS(config::parse(json::parse(R"({"stopping":"Sometimes"})")), SearchError);
    CHECK_THROWS_AS(config::parse(json::parse("[1,2]")), SearchError);
}

TEST_CASE("overrides") {
    json doc = json::parse(R"({"b":0.2,"timeout_mean":10})");
    config::apply_override(doc, "r=0.5");
    CHECK(doc["r"] == 0.5);
    CHECK_FALSE(doc.contains("timeout_mean"));
    config::apply_override(doc, "sim.seed=7");
    CHECK(doc["sim"]["seed"] == 7);
    config::apply_override(doc, "stopping=NoStop");
    CHECK(doc["stopping"] == "NoStop");
    config::apply_override(doc, "sim.antithetic=true");
    CHECK(doc["sim"]["antithetic"] == true);
    CHECK_THROWS_AS(config::apply_override(doc, "novalue"), SearchError);
}

TEST_CASE("parameters round-trip through JSON") {
    const SearchParams p{0.15, 1.25, 0.001, 0.1, 0.1, 10.0};
    CHECK(config::params_from_json(config::to_json(p)) == p);
}

TEST_CASE("number formatting and CSV") {
    CHECK(report::format_number(0.1) == "0.1");
    CHECK(report::format_number(kInfinity) == "NA");
    CHECK(report::format_number(std::nan("")) == "NA");
    CHECK(report::format_number(1e300) == "1e+300");
    report::CsvTable t({"x", "y"});
    t.add_row({"1", "2"});
    CHECK(t.str() == "x,y\n1,2\n");
    CHECK_THROWS_AS(t.add_row({"1"}), SearchError);
}

TEST_CASE("atomic write and manifest") {
    const auto dir = std::filesystem::temp_directory_path() / "diffsearch_unit_report";
    std::filesystem::remove_all(dir);
    report::write_atomic(dir / "a.csv", "x\n1\n");
    std::ifstream in(dir / "a.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "x\n1\n");
    CHECK_FALSE(std::filesystem::exists(dir / "a.csv.tmp"));

    report::RunManifest m;
    m.command = "simulate";
    m.seed = 3;
    m.artifacts = {"a.csv"};
    const json j = m.to_json();
    CHECK(j["tool_version"] == "0.1.0");
    CHECK(j["artifacts"][0] == "a.csv");
    std::filesystem::remove_all(dir);
}
