#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "symcon/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace symcon;
using Json = nlohmann::json;

namespace {

std::string model_path(const char* name) { return std::string(SYMCON_MODEL_DIR) + "/" + name; }

struct CliRun {
    int exit_code;
    std::string out;
    std::string err;
};

CliRun run(RunConfig config) {
    std::ostringstream out, err;
    int code = run_cli(config, out, err);
    return {code, out.str(), err.str()};
}

RunConfig config_for(const char* model, const char* algo) {
    RunConfig c;
    c.model_path = model_path(model);
    c.algorithm = algo;
    return c;
}

Json json_of(RunConfig config) {
    config.output = "json";
    CliRun result = run(config);
    REQUIRE(result.exit_code == 0);
    return Json::parse(result.out);
}

} // namespace

TEST_CASE("all bundled models analyze cleanly under every algorithm") {
    for (const char* model :
         {"hypersphere.model", "toy.model", "relativistic.model", "relativistic_zeta.model"}) {
        for (const char* algo : {"bw", "mbw"}) {
            CliRun result = run(config_for(model, algo));
            CAPTURE(model);
            CAPTURE(algo);
            CHECK(result.exit_code == 0);
            CHECK(result.out.find("verdict") != std::string::npos);
        }
    }
    for (const char* model : {"hypersphere.model", "toy.model", "relativistic.model"}) {
        CliRun result = run(config_for(model, "dirac"));
        CAPTURE(model);
        CHECK(result.exit_code == 0);
    }
}

TEST_CASE("compare on the hypersphere shows no differences") {
    Json j = json_of(config_for("hypersphere.model", "compare"));
    CHECK(j["diff"]["dirac_only"].empty());
    CHECK(j["diff"]["symplectic_only"].empty());
    CHECK(j["diff"]["bracket_mismatches"].empty());
    CHECK(j["diff"]["matched"].size() >= 2); // Omega1 and the generated secondary
}

TEST_CASE("compare on the toy model reports exactly the documented gap") {
    Json j = json_of(config_for("toy.model", "compare"));
    REQUIRE(j["diff"]["dirac_only"].size() == 1);
    CHECK(j["diff"]["dirac_only"][0]["label"] == "chi2");
    CHECK(j["diff"]["symplectic_only"].empty());
    CHECK(j["diff"]["bracket_mismatches"].empty());
}

TEST_CASE("classic BW on the toy model warns about the Dirac-side extra constraint") {
    CliRun result = run(config_for("toy.model", "bw"));
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("only in the Dirac chain") != std::string::npos);
    CHECK(result.out.find("chi2") != std::string::npos);
}

TEST_CASE("missing and invalid models exit with code 1") {
    RunConfig missing;
    missing.model_path = model_path("missing.model");
    CHECK(run(missing).exit_code == 1);

    // invalid: a multiplier inside the potential
    std::string path = "bad_model_for_cli_test.model";
    {
        std::ofstream f(path);
        f << "[variables]\nx : coordinate\np : momentum\nu : multiplier\n"
             "[one_form]\nx = p\n[potential]\np^2/2 + u\n";
    }
    RunConfig bad;
    bad.model_path = path;
    CliRun result = run(bad);
    CHECK(result.exit_code == 1);
    CHECK(result.err.find("multiplier") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("inconsistent system exits with code 2") {
    std::string path = "inconsistent_for_cli_test.model";
    {
        std::ofstream f(path);
        f << "[variables]\nx : coordinate\np : momentum\ny : coordinate\n"
             "[one_form]\nx = p\n[potential]\np^2/2 + y\n";
    }
    RunConfig config;
    config.model_path = path;
    CliRun result = run(config);
    CHECK(result.exit_code == 2);
    std::remove(path.c_str());
}

TEST_CASE("toy mbw with --eom-constraints ends in the symmetry verdict") {
    RunConfig config = config_for("toy.model", "mbw");
    config.eom_constraints = true;
    Json j = json_of(config);
    CHECK(j["verdict"]["kind"] == "symmetry");
    REQUIRE(j["verdict"].contains("symmetry"));
    auto generator = j["verdict"]["symmetry"]["generator"];
    REQUIRE(generator.size() == 5);
    // proportional to (-b, 0, -b, 0, -1): normalized pivot form (b, 0, b, 0, 1)
    CHECK(generator[0] == generator[2]);
    CHECK(generator[1] == "0");
    CHECK(generator[3] == "0");
    CHECK(j["verdict"]["symmetry"]["delta_potential"] == "0");
    // the chain gained the promoted eom constraint
    bool has_eom = false;
    for (auto& c : j["chain"]) has_eom = has_eom || c["origin"] == "eom-derived";
    CHECK(has_eom);

    SUBCASE("promote flag picks the same candidate explicitly") {
        config.promote = "chi2";
        Json j2 = json_of(config);
        CHECK(j2["verdict"]["kind"] == "symmetry");
    }
}

TEST_CASE("relativistic mbw report carries the rewritten Hamiltonian") {
    Json j = json_of(config_for("relativistic.model", "mbw"));
    CHECK(j["verdict"]["kind"] == "brackets");
    CHECK(j["verdict"]["hamiltonian"] == "c*p0");
    REQUIRE(j["verdict"].contains("rewrites"));
    CHECK(Json::string_t(j["verdict"]["rewrites"][0]).find("p0^2 ->") != std::string::npos);
    CHECK(j["verdict"]["branches"]["p0"] == "+");
}

TEST_CASE("free particle with no constraints gives canonical brackets") {
    std::string path = "free_for_cli_test.model";
    {
        std::ofstream f(path);
        f << "[variables]\nx : coordinate\np : momentum\n[one_form]\nx = p\n"
             "[potential]\np^2/2\n[constraints]\n";
    }
    RunConfig config;
    config.model_path = path;
    config.output = "json";
    CliRun result = run(config);
    CHECK(result.exit_code == 0);
    Json j = Json::parse(result.out);
    CHECK(j["verdict"]["kind"] == "brackets");
    CHECK(j["verdict"]["bracket_table"]["entries"][0][1] == "1");
    std::remove(path.c_str());
}

TEST_CASE("reports are byte-identical across repeated runs") {
    for (const char* algo : {"mbw", "bw", "dirac", "compare"}) {
        RunConfig config = config_for("toy.model", algo);
        CliRun first = run(config);
        CliRun second = run(config);
        CAPTURE(algo);
        CHECK(first.out == second.out);

        config.output = "json";
        CliRun jfirst = run(config);
        CliRun jsecond = run(config);
        CHECK(jfirst.out == jsecond.out);
    }
}

TEST_CASE("json file output lands at the requested path") {
    RunConfig config = config_for("toy.model", "mbw");
    config.json_path = "toy_cli_test_report.json";
    CliRun result = run(config);
    CHECK(result.exit_code == 0);
    std::ifstream f(*config.json_path);
    REQUIRE(f.good());
    Json j = Json::parse(f);
    CHECK(j["model"] == "toy");
    CHECK(j["algorithm"] == "mbw");
    std::remove(config.json_path->c_str());
}

TEST_CASE("checks embed in the json report") {
    Json j = json_of(config_for("hypersphere.model", "mbw"));
    REQUIRE(j.contains("checks"));
    bool saw_jacobi = false;
    for (auto& check : j["checks"]) {
        CHECK(check["passed"] == true);
        saw_jacobi = saw_jacobi || check["check"] == "jacobi";
    }
    CHECK(saw_jacobi);
}
