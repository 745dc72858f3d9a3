#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <random>
#include <string>

#include "spinbath/io.hpp"
#include "spinbath/rng.hpp"
#include "spinbath/util.hpp"
#include "test_support.hpp"

using namespace spinbath;
namespace fs = std::filesystem;
using testsupport::random_env;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("spinbath_io_" + std::to_string(static_cast<unsigned long>(std::rand())) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("doubles are formatted round-trip exact") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.1) == "0.10000000000000001");
    for (double x : {1.0 / 3.0, 2.2250738585072014e-308, 12345.6789, -9.87e-12}) {
        CHECK(std::stod(format_double(x)) == x);
    }
}

TEST_CASE("csv writes LF lines and reads back exactly") {
    TempDir tmp;
    const fs::path file = tmp.path / "table.csv";
    std::mt19937_64 rng(mix_seed(401, 0));
    std::vector<double> t, v;
    for (int i = 0; i < 50; ++i) {
        t.push_back(0.1 * i);
        v.push_back(uniform01(rng) * 2.0 - 1.0);
    }
    write_csv(file, {{"t", t}, {"value", v}});

    const std::string raw = read_text_file(file);
    CHECK(raw.rfind("t,value\n", 0) == 0);
    CHECK(raw.find('\r') == std::string::npos);

    const CsvTable table = read_csv(file);
    REQUIRE(table.rows() == 50);
    CHECK(table.column("t") == t);          // bitwise round trip
    CHECK(table.column("value") == v);
    CHECK_THROWS_AS(table.column("missing"), std::invalid_argument);
}

TEST_CASE("csv writer rejects malformed tables") {
    TempDir tmp;
    const fs::path file = tmp.path / "bad.csv";
    CHECK_THROWS_AS(write_csv(file, {}), std::invalid_argument);
    CHECK_THROWS_AS(write_csv(file, {{"a", {1.0, 2.0}}, {"b", {1.0}}}), std::invalid_argument);
}

TEST_CASE("csv reader flags missing and malformed files") {
    TempDir tmp;
    CHECK_THROWS_AS(read_csv(tmp.path / "absent.csv"), std::runtime_error);
    const fs::path ragged = tmp.path / "ragged.csv";
    write_text_file(ragged, "a,b\n1,2\n3\n");
    CHECK_THROWS_AS(read_csv(ragged), std::invalid_argument);
    const fs::path garbage = tmp.path / "garbage.csv";
    write_text_file(garbage, "a,b\n1,zebra\n");
    CHECK_THROWS_AS(read_csv(garbage), std::invalid_argument);
}

TEST_CASE("environments survive a json round trip") {
    std::mt19937_64 rng(mix_seed(409, 0));
    const Environment env = random_env(rng, 9);
    const nlohmann::json doc = environment_to_json(env);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 9);
    const Environment back = environment_from_json(doc);
    REQUIRE(back.size() == env.size());
    for (std::size_t k = 0; k < env.size(); ++k) {
        CHECK(back[k].g() == env[k].g());  // stored verbatim
        CHECK(back[k].p_up() == doctest::Approx(env[k].p_up()).epsilon(1e-12));
        CHECK(std::abs(back[k].alpha() - env[k].alpha()) < 1e-12);
        CHECK(std::abs(back[k].beta() - env[k].beta()) < 1e-12);
    }

    TempDir tmp;
    const fs::path file = tmp.path / "env.json";
    save_environment(env, file);
    const Environment loaded = load_environment(file);
    for (std::size_t k = 0; k < env.size(); ++k) {
        CHECK(std::abs(loaded[k].alpha() - env[k].alpha()) < 1e-12);
    }
}

TEST_CASE("environment parsing reports the offending entry") {
    using nlohmann::json;
    CHECK_THROWS_AS(environment_from_json(json::object()), std::invalid_argument);
    CHECK_THROWS_AS(environment_from_json(json::parse(R"([{"p_up": 0.5}])")),
                    std::invalid_argument);  // g missing
    CHECK_THROWS_AS(environment_from_json(json::parse(R"([{"g": 1.0, "p_up": 1.5}])")),
                    std::invalid_argument);
    CHECK_THROWS_AS(environment_from_json(json::parse(R"([{"g": "x", "p_up": 0.5}])")),
                    std::invalid_argument);
    try {
        environment_from_json(json::parse(R"([{"g": 1.0, "p_up": 0.5}, {"g": 1.0, "p_up": 2.0}])"));
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("environment[1]") != std::string::npos);
    }

    // Phases default to zero.
    const Environment env = environment_from_json(json::parse(R"([{"g": 2.0, "p_up": 0.25}])"));
    CHECK(env[0].alpha().real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(env[0].alpha().imag() == 0.0);
    CHECK(env[0].beta().real() == doctest::Approx(std::sqrt(0.75)).epsilon(1e-14));
}

TEST_CASE("json file helpers attach the file name to parse errors") {
    TempDir tmp;
    const fs::path bad = tmp.path / "bad.json";
    write_text_file(bad, "{not json");
    try {
        load_json_file(bad);
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("bad.json") != std::string::npos);
    }
    CHECK_THROWS_AS(load_json_file(tmp.path / "absent.json"), std::runtime_error);

    const fs::path out = tmp.path / "doc.json";
    save_json_file(nlohmann::json{{"a", 1}}, out);
    const std::string text = read_text_file(out);
    CHECK(text.back() == '\n');
    CHECK(load_json_file(out)["a"] == 1);
}

TEST_CASE("analysis results serialize with pinned field names") {
    DecayFit fit;
    fit.model = DecayModel::Gaussian;
    fit.timescale = 0.5;
    fit.amplitude = 1.0;
    fit.residual_rms = 0.01;
    fit.window = {0.1, 0.9};
    nlohmann::json j = fit_to_json(fit);
    CHECK(j["model"] == "gaussian");
    CHECK(j["timescale"] == 0.5);
    CHECK(j["amplitude"] == 1.0);
    CHECK(j["residual_rms"] == 0.01);
    CHECK(j["window"]["t_lo"] == 0.1);
    CHECK(j["window"]["t_hi"] == 0.9);

    fit.timescale = std::numeric_limits<double>::infinity();
    CHECK(fit_to_json(fit)["timescale"].is_null());

    SlopeFit s;
    s.slope = 2.0;
    s.intercept = -1.0;
    s.std_error = 0.05;
    s.window = {0.0, 1.0};
    j = slope_to_json(s);
    CHECK(j["slope"] == 2.0);
    CHECK(j["intercept"] == -1.0);
    CHECK(j["std_error"] == 0.05);

    DecayClassification cls;
    cls.verdict = DecayClass::Exponential;
    cls.gaussian = fit;
    cls.exponential = fit;
    j = classification_to_json(cls);
    CHECK(j["verdict"] == "exponential");
    CHECK(j["gaussian"].is_object());
    CHECK(j["exponential"].is_object());

    CHECK(decay_model_name(DecayModel::Exponential) == "exponential");
    CHECK(decay_class_name(DecayClass::Ambiguous) == "ambiguous");
}

TEST_CASE("digests match the reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);

    TempDir tmp;
    const fs::path file = tmp.path / "payload.bin";
    write_text_file(file, "a");
    CHECK(fnv1a64_file(file) == 0xaf63dc4c8601ec8cULL);
    CHECK(file_digest(file) == "fnv1a64:af63dc4c8601ec8c");
    CHECK_THROWS_AS(fnv1a64_file(tmp.path / "absent"), std::runtime_error);
}

TEST_CASE("timestamps are ISO-8601 UTC") {
    const std::string ts = utc_timestamp_now();
    REQUIRE(ts.size() == 20);
    CHECK(ts[4] == '-');
    CHECK(ts[7] == '-');
    CHECK(ts[10] == 'T');
    CHECK(ts[13] == ':');
    CHECK(ts[16] == ':');
    CHECK(ts.back() == 'Z');
    CHECK(ts.substr(0, 2) == "20");
}
