#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "shiftcalc/cli.hpp"
#include "shiftcalc/json_io.hpp"
#include "shiftcalc/selftest.hpp"

using namespace shiftcalc;

namespace {

struct CliRun {
    int code;
    Json payload;
    std::string raw;
};

CliRun run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    CliRun r{code, Json(), out.str()};
    if (!r.raw.empty() && r.raw[0] == '{') r.payload = Json::parse(r.raw);
    return r;
}

std::string write_temp(const std::string& name, const Json& j) {
    const std::string path = "cli_test_" + name + ".json";
    std::ofstream f(path);
    f << j.dump();
    return path;
}

Json stripped(Json payload) {
    payload["meta"].erase("elapsed_ms");
    return payload;
}

} // namespace

TEST_CASE("degree --set golden output") {
    const std::string path = write_temp(
        "deg", Json{{"p", 5},
                    {"n", 1},
                    {"points", Json::array({Json{{"coords", Json::array({0})}},
                                            Json{{"coords", Json::array({1})}},
                                            Json{{"coords", Json::array({2})}}})}});
    const CliRun r = run_cli({"degree", "--set", path});
    CHECK(r.code == 0);
    CHECK(r.payload["ok"] == true);
    CHECK(r.payload["result"] == Json{{"deg", 2}});
    CHECK(r.payload["meta"]["p"] == 5);
    std::remove(path.c_str());
}

TEST_CASE("capset verify exits 1 with the violating triple") {
    const std::string path = write_temp(
        "line", Json{{"p", 3},
                     {"n", 2},
                     {"points", Json::array({Json{{"coords", Json::array({0, 0})}},
                                             Json{{"coords", Json::array({1, 1})}},
                                             Json{{"coords", Json::array({2, 2})}}})}});
    const CliRun r = run_cli({"capset", "verify", "--set", path});
    CHECK(r.code == 1);
    CHECK(r.payload["ok"] == false);
    CHECK(r.payload["result"]["violation"].size() == 3);
    std::remove(path.c_str());
}

TEST_CASE("bounds kakeya golden output") {
    const CliRun r = run_cli({"bounds", "kakeya", "--n", "2", "--q", "3"});
    CHECK(r.code == 0);
    CHECK(r.payload["result"]["binom"] == "6");
    CHECK(r.payload["result"]["mult_bound"]["num"] == "81");
    CHECK(r.payload["result"]["mult_bound"]["den"] == "25");
}

TEST_CASE("schema round-trip: canonical form re-parses to an equal value") {
    // polynomial with duplicate exponent keys and non-canonical residues
    const Json in{{"p", 5},
                  {"n", 2},
                  {"terms", Json::array({Json{{"exps", Json::array({1, 2})}, {"coeff", 7}},
                                         Json{{"exps", Json::array({1, 2})}, {"coeff", -1}},
                                         Json{{"exps", Json::array({0, 0})}, {"coeff", 12}}})}};
    const Poly f = poly_from_json(in);
    CHECK(f.coeff({1, 2}) == 1); // 7 - 1 = 6 = 1 mod 5
    CHECK(f.coeff({0, 0}) == 2);
    const Json canon = poly_to_json(f);
    CHECK(poly_from_json(canon) == f);
    CHECK(poly_to_json(poly_from_json(canon)) == canon);

    // combo without an explicit base multiset
    const Json cj{{"p", 3},
                  {"n", 1},
                  {"terms", Json::array({Json{{"coords", Json::array({0})},
                                              {"beta", Json::array({1})},
                                              {"coeff", 1}}})}};
    const ShiftCombo l = combo_from_json(cj);
    CHECK(l.base().mult({0}) == 2); // inferred coarsest base
    const Json canon2 = combo_to_json(l);
    CHECK(combo_from_json(canon2) == l);
    CHECK(combo_to_json(combo_from_json(canon2)) == canon2);

    // family
    const Json fj{{"p", 3},
                  {"n", 1},
                  {"k", 3},
                  {"tuples", Json::array({Json::array(
                      {Json::array({0}), Json::array({1}), Json::array({2})})})}};
    const auto fam = family_from_json(fj);
    CHECK(family_to_json(family_from_json(family_to_json(fam))) == family_to_json(fam));
}

TEST_CASE("canonical serialization golden strings") {
    PointMultiset A(5, 1);
    A.add_point({2});
    A.add_point({0});
    A.add_point({1});
    ShiftCombo l{A};
    l.set_coeff({0}, {0}, 1);
    l.set_coeff({1}, {0}, -2);
    l.set_coeff({2}, {0}, 1);
    CHECK(combo_to_json(l).dump() ==
          R"({"p":5,"n":1,"points":[{"coords":[0],"mult":1},{"coords":[1],"mult":1},)"
          R"({"coords":[2],"mult":1}],"terms":[{"coords":[0],"beta":[0],"coeff":1},)"
          R"({"coords":[1],"beta":[0],"coeff":3},{"coords":[2],"beta":[0],"coeff":1}]})");

    Poly f(3, 2);
    f.add_term({0, 0}, 5); // canonicalizes to 2
    f.add_term({2, 1}, 1);
    CHECK(poly_to_json(f).dump() ==
          R"({"p":3,"n":2,"terms":[{"exps":[0,0],"coeff":2},{"exps":[2,1],"coeff":1}]})");
}

TEST_CASE("schema errors exit 2") {
    const CliRun r = run_cli({"degree", "--set", "no_such_file.json"});
    CHECK(r.code == 2);
    CHECK(r.payload["ok"] == false);
    CHECK(r.payload["result"]["error"]["kind"] == "SchemaError");

    const std::string path = write_temp("badp", Json{{"p", 4}, {"n", 1}, {"points", Json::array()}});
    const CliRun r2 = run_cli({"degree", "--set", path});
    CHECK(r2.code == 2);
    std::remove(path.c_str());

    const CliRun r3 = run_cli({"nonsense"});
    CHECK(r3.code == 2);
}

TEST_CASE("guard exits 3: degree bound exhaustion surfaces as a guard") {
    const Json cj{{"p", 5},
                  {"n", 1},
                  {"terms", Json::array({Json{{"coords", Json::array({0})},
                                              {"beta", Json::array({0})},
                                              {"coeff", 1}},
                                         Json{{"coords", Json::array({1})},
                                              {"beta", Json::array({0})},
                                              {"coeff", 3}},
                                         Json{{"coords", Json::array({2})},
                                              {"beta", Json::array({0})},
                                              {"coeff", 1}}})}};
    const std::string path = write_temp("combo", cj);
    const CliRun r = run_cli({"degree", "--combo", path, "--bound", "1"});
    CHECK(r.code == 3);
    CHECK(r.payload["result"]["exhausted"] == true);

    const CliRun r2 = run_cli({"degree", "--combo", path});
    CHECK(r2.code == 0);
    CHECK(r2.payload["result"]["deg"] == 2);
    std::remove(path.c_str());
}

TEST_CASE("determinism: identical argv and files give identical payloads") {
    const std::string path = write_temp(
        "det", Json{{"p", 5},
                    {"n", 1},
                    {"points", Json::array({Json{{"coords", Json::array({0})}},
                                            Json{{"coords", Json::array({1})}, {"mult", 2}}})}});
    const std::vector<std::vector<std::string>> arg_sets{
        {"degree", "--set", path},
        {"construct", "--set", path, "--d", "2"},
        {"delta", "--set", path, "--d", "1"},
        {"gamma", "--p", "3", "--k", "3"},
        {"bounds", "monomials", "--n", "4", "--q", "inf", "--r", "3"}};
    for (const auto& args : arg_sets) {
        const CliRun r1 = run_cli(args);
        const CliRun r2 = run_cli(args);
        REQUIRE(r1.payload.is_object());
        CHECK(stripped(r1.payload) == stripped(r2.payload));
    }
    std::remove(path.c_str());
}

TEST_CASE("cns through the CLI") {
    const std::string fpath = write_temp(
        "cnsf", Json{{"p", 5},
                     {"n", 2},
                     {"terms", Json::array({Json{{"exps", Json::array({1, 1})}, {"coeff", 1}}})}});
    const std::string apath = write_temp(
        "cnsA", Json{{"p", 5},
                     {"n", 1},
                     {"points", Json::array({Json{{"coords", Json::array({0})}},
                                             Json{{"coords", Json::array({1})}}})}});
    const CliRun r = run_cli({"cns", "--poly", fpath, "--alpha", "1,1", "--family", apath,
                              "--family", apath});
    CHECK(r.code == 0);
    CHECK(r.payload["result"]["a"] == Json::array({1, 1}));
    CHECK(r.payload["result"]["value"] == 1);
    std::remove(fpath.c_str());
    std::remove(apath.c_str());
}

TEST_CASE("hp through the CLI, both modes") {
    const std::string apath = write_temp(
        "hpA", Json{{"p", 5},
                    {"n", 1},
                    {"points", Json::array({Json{{"coords", Json::array({0})}},
                                            Json{{"coords", Json::array({1})}}})}});
    const std::string bpath = write_temp(
        "hpB", Json{{"p", 5}, {"n", 1}, {"points", Json::array({Json{{"coords", Json::array({0})}}})}});
    const CliRun r = run_cli({"hp", "--a", apath, "--b", bpath, "--d", "2"});
    CHECK(r.code == 0);
    CHECK(r.payload["result"]["holds_intersect"] == true);
    CHECK(r.payload["result"]["lhs"] == 2);
    CHECK(r.payload["result"]["rhs_intersect"] == 3);

    // technical mode with certificate, p = 7 instance
    const std::string a7 = write_temp(
        "hpA7", Json{{"p", 7},
                     {"n", 1},
                     {"points", Json::array({Json{{"coords", Json::array({0})}},
                                             Json{{"coords", Json::array({1})}}})}});
    const std::string f7 = write_temp(
        "hpF7", Json{{"p", 7},
                     {"n", 1},
                     {"terms", Json::array({Json{{"exps", Json::array({3})}, {"coeff", 1}},
                                            Json{{"exps", Json::array({0})}, {"coeff", -1}}})}});
    const CliRun r2 = run_cli({"hp", "--a", a7, "--b", a7, "--poly", f7, "--certificate"});
    CHECK(r2.code == 0);
    CHECK(r2.payload["result"]["certificate_ok"] == true);
    std::remove(apath.c_str());
    std::remove(bpath.c_str());
    std::remove(a7.c_str());
    std::remove(f7.c_str());
}

TEST_CASE("selftest passes clean and detects an injected fault") {
    const SelftestReport ok = selftest(false);
    CHECK(ok.ok);
    CHECK(ok.first_failure.empty());

    const SelftestReport bad = selftest(true);
    CHECK(!bad.ok);
    CHECK(bad.first_failure.find("binomial.pascal") == 0);
    CHECK(bad.first_failure.find("C(10,3)") != std::string::npos);

    const CliRun r = run_cli({"selftest"});
    CHECK(r.code == 0);
    CHECK(r.payload["result"]["ok"] == true);

    const CliRun r2 = run_cli({"selftest", "--inject-binom-fault"});
    CHECK(r2.code == 1);

    // determinism: byte-identical reports modulo elapsed time
    const CliRun s1 = run_cli({"selftest"});
    const CliRun s2 = run_cli({"selftest"});
    CHECK(stripped(s1.payload) == stripped(s2.payload));
}

TEST_CASE("human output mode") {
    const CliRun r = run_cli({"--human", "gamma", "--p", "3", "--k", "3"});
    CHECK(r.code == 0);
    CHECK(r.raw.rfind("ok", 0) == 0);
}
