#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "golden_cases.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string out_path = "cli_stdout_" + std::to_string(counter) + ".tmp";
    const std::string err_path = "cli_stderr_" + std::to_string(counter) + ".tmp";
    ++counter;
    const std::string cmd = std::string("'") + P1GLUE_CLI_PATH + "' " + args + " > " +
                            out_path + " 2> " + err_path;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::string golden_path(const std::string& name) {
    return std::string(P1GLUE_GOLDEN_DIR) + "/" + name + ".json";
}

}  // namespace

TEST_CASE("every golden instance reproduces byte-identically") {
    const bool update = std::getenv("P1GLUE_UPDATE_GOLDENS") != nullptr;
    for (const auto& c : golden::cases()) {
        CAPTURE(c.name);
        const auto first = run_cli(c.args);
        CHECK(first.exit_code == 0);
        CHECK(first.err.empty());
        const auto second = run_cli(c.args);
        CHECK(first.out == second.out);
        if (update) {
            std::ofstream out(golden_path(c.name), std::ios::binary);
            out << first.out;
            continue;
        }
        const std::string expected = slurp(golden_path(c.name));
        REQUIRE(!expected.empty());
        CHECK(first.out == expected);
    }
}

TEST_CASE("error contract: exit codes and machine-readable codes") {
    // inverting a nilpotent: exit 2, code not_a_unit
    const auto r2 = run_cli(
        "invert --ring '{\"type\":\"dual\",\"base\":{\"type\":\"Fp\",\"p\":2},\"k\":2}' "
        "'{\"val\":0,\"coeffs\":[[0,1]],\"prec\":null}'");
    CHECK(r2.exit_code == 2);
    CHECK(nlohmann::json::parse(r2.err)["error"] == "not_a_unit");

    // windows too small to certify: exit 3
    const auto r3 = run_cli(
        "factorize --ring '{\"type\":\"Zmod\",\"m\":8}' --prec 3 "
        "'[[{\"val\":0,\"coeffs\":[2,4,2],\"prec\":3}]]'");
    CHECK(r3.exit_code == 3);
    CHECK(nlohmann::json::parse(r3.err)["error"] == "precision_exhausted");

    // random without --seed: exit 4
    const auto r4 = run_cli(
        "random --ring '{\"type\":\"Fp\",\"p\":5}' '{\"kind\":\"product\",\"n\":2}' --prec 8");
    CHECK(r4.exit_code == 4);
    CHECK(nlohmann::json::parse(r4.err)["error"] == "parse_error");

    // malformed input JSON: exit 4
    const auto r5 = run_cli("classify --ring '{\"type\":\"Fp\",\"p\":5}' '{\"val\":'");
    CHECK(r5.exit_code == 4);

    // splitting over a non-field base: exit 4, unsupported_ring
    const auto r6 = run_cli(
        "splitting --ring '{\"type\":\"Zmod\",\"m\":8}' "
        "'{\"g\":[[{\"val\":-1,\"coeffs\":[1],\"prec\":null}]]}'");
    CHECK(r6.exit_code == 4);
    CHECK(nlohmann::json::parse(r6.err)["error"] == "unsupported_ring");
}

TEST_CASE("schema closure: outputs feed back into matching input slots") {
    const std::string ring = "--ring '{\"type\":\"Fp\",\"p\":5}'";

    // factorize -> delta is a matrix accepted by membership (inside GL_n(R[[z]]))
    const auto fact = run_cli(
        "factorize " + ring + " --prec 12 " +
        "'[[{\"val\":-1,\"coeffs\":[1,1,1,1,1,1,1,1,1,1,1,1,1],\"prec\":12}]]'");
    REQUIRE(fact.exit_code == 0);
    const auto fact_json = nlohmann::json::parse(fact.out);
    const auto mem =
        run_cli("membership " + ring + " --prec 12 '" + fact_json["delta"].dump() + "'");
    CHECK(mem.exit_code == 0);
    CHECK(nlohmann::json::parse(mem.out)["membership"] == "yes");

    // the whole factorization document is accepted wherever a matrix slot
    // exists (the g slot is found first)
    const auto mem_g = run_cli("membership " + ring + " '" + fact_json.dump() + "'");
    CHECK(mem_g.exit_code == 0);
    CHECK(nlohmann::json::parse(mem_g.out)["membership"] == "no");

    // random product output feeds factorize directly (gamma slot)
    const auto rnd = run_cli("random " + ring + " --seed 7 --prec 12 "
                             "'{\"kind\":\"product\",\"n\":2}'");
    REQUIRE(rnd.exit_code == 0);
    std::ofstream tmp("rnd_product.tmp.json", std::ios::binary);
    tmp << rnd.out;
    tmp.close();
    const auto refact = run_cli("factorize " + ring + " --prec 12 rnd_product.tmp.json");
    CHECK(refact.exit_code == 0);
    std::remove("rnd_product.tmp.json");

    // glue -> transition roundtrip through files
    const auto glued = run_cli("glue " + ring +
                               " '[[{\"val\":-1,\"coeffs\":[1,0,2],\"prec\":null}]]'");
    REQUIRE(glued.exit_code == 0);
    const auto back =
        run_cli("transition " + ring + " '" + nlohmann::json::parse(glued.out).dump() + "'");
    CHECK(back.exit_code == 0);
    const auto g_back = nlohmann::json::parse(back.out);
    CHECK(g_back == nlohmann::json::parse(glued.out)["g"]);
}

TEST_CASE("outputs go to --out when requested") {
    const auto r = run_cli(
        "splitting --ring '{\"type\":\"Fp\",\"p\":5}' "
        "'{\"g\":[[{\"val\":-2,\"coeffs\":[1],\"prec\":null}]]}' --out splitting_out.tmp.json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(nlohmann::json::parse(slurp("splitting_out.tmp.json")) ==
          nlohmann::json::array({2}));
    std::remove("splitting_out.tmp.json");
}

TEST_CASE("membership on truncated input requires --prec") {
    const auto missing = run_cli(
        "membership --ring '{\"type\":\"Fp\",\"p\":5}' "
        "'[[{\"val\":0,\"coeffs\":[1,2],\"prec\":2}]]'");
    CHECK(missing.exit_code == 4);
    const auto ok = run_cli(
        "membership --ring '{\"type\":\"Fp\",\"p\":5}' --prec 2 "
        "'[[{\"val\":0,\"coeffs\":[1,2],\"prec\":2}]]'");
    CHECK(ok.exit_code == 0);
    CHECK(nlohmann::json::parse(ok.out)["membership"] == "yes");
}
