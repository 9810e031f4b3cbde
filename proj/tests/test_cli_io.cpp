#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aoilab/config.hpp"
#include "aoilab/csv.hpp"
#include "aoilab/errors.hpp"

using namespace aoilab;
namespace fs = std::filesystem;

namespace {

const char* kMinimalIni =
    "K = 8\n"
    "N = 10\n"
    "epsilon = 0.01\n"
    "lambda = 0.1\n"
    "tau_min = 24\n"
    "tau_max = 138\n"
    "model = NP\n";

fs::path temp_file(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("minimal flat config parses to the baseline scenario") {
    const auto cfg = parse_config_text(kMinimalIni);
    CHECK(cfg.scenario.lambda == 0.1);
    CHECK(cfg.scenario.epsilon == 0.01);
    CHECK(cfg.scenario.model == GenerationModel::kNP);
    CHECK(cfg.scenario.tau_min() == 24);
    CHECK(cfg.scenario.tau_max() == 138);
    CHECK(cfg.scenario.channel.power(24) == doctest::Approx(32.037).epsilon(1e-3));
}

TEST_CASE("sectioned configs and JSON configs agree with the flat form") {
    const char* sectioned =
        "[channel]\nK = 8\nN = 10\nepsilon = 0.01\ntau_min = 24\ntau_max = 138\n"
        "[traffic]\nlambda = 0.1\nmodel = NP\n";
    const char* json =
        R"({"channel": {"K": 8, "N": 10, "epsilon": 0.01, "tau_min": 24, "tau_max": 138},
            "traffic": {"lambda": 0.1, "model": "NP"}})";
    const auto a = parse_config_text(kMinimalIni);
    const auto b = parse_config_text(sectioned);
    const auto c = parse_config_text(json);
    CHECK(a.digest == b.digest);
    CHECK(a.digest == c.digest);  // digest hashes the parsed config, not the raw text
}

TEST_CASE("config validation errors") {
    SUBCASE("epsilon = 1.0 is rejected") {
        const std::string text = std::string(kMinimalIni) + "";
        std::string bad = text;
        bad.replace(bad.find("0.01"), 4, "1.0");
        CHECK_THROWS_AS(parse_config_text(bad), ConfigError);
    }
    SUBCASE("missing tau_max is reported by name") {
        std::string text =
            "K = 8\nN = 10\nepsilon = 0.01\nlambda = 0.1\ntau_min = 24\nmodel = NP\n";
        CHECK_THROWS_WITH_AS(parse_config_text(text), doctest::Contains("tau_max"), ConfigError);
    }
    SUBCASE("unknown keys name the key and line") {
        const std::string text = std::string(kMinimalIni) + "bogus_key = 3\n";
        try {
            parse_config_text(text, "cfg.ini");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            CHECK(what.find("bogus_key") != std::string::npos);
            CHECK(what.find("cfg.ini:8") != std::string::npos);
        }
    }
    SUBCASE("keys in the wrong section are rejected") {
        const char* text = "[traffic]\nK = 8\nlambda = 0.1\nmodel = NP\n";
        CHECK_THROWS_WITH_AS(parse_config_text(text), doctest::Contains("belongs to section"), ConfigError);
    }
    SUBCASE("duplicate keys are rejected") {
        const std::string text = std::string(kMinimalIni) + "lambda = 0.2\n";
        CHECK_THROWS_WITH_AS(parse_config_text(text), doctest::Contains("duplicate"), ConfigError);
    }
    SUBCASE("malformed numbers name the key") {
        std::string text(kMinimalIni);
        text.replace(text.find("0.1"), 3, "zap");
        CHECK_THROWS_WITH_AS(parse_config_text(text), doctest::Contains("lambda"), ConfigError);
    }
}

TEST_CASE("defaults text parses and documents every solver default") {
    const auto cfg = parse_config_text(default_config_text());
    CHECK(cfg.solver.tol == 1e-8);
    CHECK(cfg.solver.de_population == 30);
    CHECK(cfg.solver.pc_grid == 20);
    CHECK(cfg.scenario.tau_min() == 24);
}

TEST_CASE("scenario file loading") {
    const auto path = temp_file("aoilab_test_scenario.ini", kMinimalIni);
    const auto sc = load_scenario(path.string());
    CHECK(sc.tau_max() == 138);
    fs::remove(path);
    CHECK_THROWS_AS(load_scenario("/nonexistent/nowhere.ini"), ConfigError);
}

TEST_CASE("csv emission") {
    const fs::path path = fs::temp_directory_path() / "aoilab_test.csv";
    fs::remove(path);
    SUBCASE("empty rows give a header-only file with a manifest line") {
        emit_csv(path, 0xabcdef, {"a", "b"}, {});
        std::ifstream in(path, std::ios::binary);
        std::string l1, l2, l3;
        std::getline(in, l1);
        std::getline(in, l2);
        const bool more = static_cast<bool>(std::getline(in, l3));
        CHECK(l1 == "# manifest: 0000000000abcdef");
        CHECK(l2 == "a,b");
        CHECK_FALSE(more);
    }
    SUBCASE("12 significant digits round trip") {
        const double value = 41.69696969696969;
        emit_csv(path, 1, {"x"}, {{value}}, true);
        std::ifstream in(path, std::ios::binary);
        std::string line;
        std::getline(in, line);
        std::getline(in, line);
        std::getline(in, line);
        const double back = std::stod(line);
        CHECK(std::fabs(back - value) <= 1e-11 * value);
        CHECK(line == format_csv_number(value));
    }
    SUBCASE("refuses to overwrite without force") {
        emit_csv(path, 1, {"x"}, {{1.0}}, true);
        CHECK_THROWS_AS(emit_csv(path, 1, {"x"}, {{2.0}}, false), ConfigError);
        emit_csv(path, 1, {"x"}, {{2.0}}, true);  // force succeeds
    }
    SUBCASE("LF line endings only") {
        emit_csv(path, 1, {"x"}, {{1.5}}, true);
        std::ifstream in(path, std::ios::binary);
        std::stringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str().find('\r') == std::string::npos);
    }
    fs::remove(path);
}
