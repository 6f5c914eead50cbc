#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "enetacl/errors.hpp"
#include "enetacl/policy_io.hpp"
#include "oracles.hpp"

using namespace enetacl;
using namespace enetacl::testing;

namespace {

const char* kEnglFixtureText = R"({
  "model": "engl",
  "levels": 3,
  "users": ["u1", "u2"],
  "groups": ["g1", "g2"],
  "resources": ["r1", "r2"],
  "lug": {"u1": {"g1": 3}, "u2": {"g1": 2, "g2": 1}},
  "lrg": {"r1": {"g1": 2}, "r2": {"g2": 1}}
})";

const char* kEnlgFixtureText = R"({
  "model": "enlg",
  "levels": 3,
  "users": ["u1", "u2"],
  "groups": ["g1"],
  "resources": ["r1"],
  "lu": {"u1": 3, "u2": 2},
  "lr": {"r1": 2},
  "ulg": [["u1", 1, "g1"], ["u1", 2, "g1"], ["u2", 2, "g1"]],
  "rlg": [["r1", 2, "g1"]]
})";

}  // namespace

TEST_CASE("a minimal engl document parses and validates") {
    const Policy policy = load_policy(R"({
        "model": "engl", "levels": 1,
        "users": ["alice"], "groups": ["ops"], "resources": ["printer"],
        "lug": {"alice": {"ops": 1}}, "lrg": {"printer": {"ops": 1}}
    })");
    const auto& p = std::get<EnglPolicy>(policy);
    CHECK(p.levels == 1);
    CHECK(engl_can_access(p, 1, 1, 1));
}

TEST_CASE("fixture documents load into the expected policies") {
    CHECK(std::get<EnglPolicy>(load_policy(kEnglFixtureText)) == engl_fixture());
    CHECK(std::get<EnlgPolicy>(load_policy(kEnlgFixtureText)) == enlg_fixture());
}

TEST_CASE("parse rejects malformed documents") {
    CHECK_THROWS_AS(parse_policy(R"({"model": "engl")"), ParseError);
    try {
        parse_policy("{\n  \"model\": \"engl\",\n  oops\n}");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.column >= 1);
    }

    CHECK_THROWS_WITH_AS(
        parse_policy(R"({"model": "mac", "levels": 1,
                         "users": [], "groups": [], "resources": []})"),
        "unknown model tag \"mac\"", ValidationError);

    // Duplicate names.
    CHECK_THROWS_AS(parse_policy(R"({
        "model": "engl", "levels": 1,
        "users": ["a", "a"], "groups": ["g"], "resources": ["r"]
    })"), ValidationError);

    // Reference to an undeclared group.
    CHECK_THROWS_WITH_AS(parse_policy(R"({
        "model": "engl", "levels": 1,
        "users": ["a"], "groups": ["g"], "resources": ["r"],
        "lug": {"a": {"ghost": 1}}
    })"), "\"lug\" references undeclared group \"ghost\"", ValidationError);

    // Keys from the other model are unknown keys.
    CHECK_THROWS_AS(parse_policy(R"({
        "model": "engl", "levels": 1,
        "users": ["a"], "groups": ["g"], "resources": ["r"],
        "lu": {"a": 1}
    })"), ValidationError);
}

TEST_CASE("validate rejects out-of-range and shape violations") {
    PolicyDocument doc = parse_policy(kEnglFixtureText);
    doc.lug["u1"]["g1"] = 4;  // beyond levels=3
    CHECK_THROWS_AS(validate_document(doc), ValidationError);
    doc.lug["u1"]["g1"] = -1;
    CHECK_THROWS_AS(validate_document(doc), ValidationError);

    PolicyDocument enlg = parse_policy(kEnlgFixtureText);
    enlg.ulg.insert({"u2", 3, "g1"});  // lu(u2) = 2
    CHECK_THROWS_AS(validate_document(enlg), EntitlementError);

    PolicyDocument missing = parse_policy(kEnlgFixtureText);
    missing.lu.erase("u2");
    CHECK_THROWS_WITH_AS(validate_document(missing),
                         "missing \"lu\" entry for user \"u2\"", ValidationError);

    PolicyDocument zero = parse_policy(kEnglFixtureText);
    zero.levels = 0;
    CHECK_THROWS_AS(validate_document(zero), ValidationError);
}

TEST_CASE("explicit zero entries are accepted and serialize as absent") {
    const Policy policy = load_policy(R"({
        "model": "engl", "levels": 2,
        "users": ["a"], "groups": ["g"], "resources": ["r"],
        "lug": {"a": {"g": 0}}, "lrg": {}
    })");
    const std::string text = serialize_policy(policy);
    CHECK(text.find("\"g\": 0") == std::string::npos);
    CHECK(std::get<EnglPolicy>(policy).lug[0][0] == 0);
}

TEST_CASE("serialization is canonical and fixes after one pass") {
    for (const char* text : {kEnglFixtureText, kEnlgFixtureText}) {
        const Policy policy = load_policy(text);
        const std::string first = serialize_policy(policy);
        CHECK(serialize_policy(policy) == first);  // byte-identical twice
        const Policy reloaded = load_policy(first);
        CHECK(reloaded == policy);
        CHECK(serialize_policy(reloaded) == first);  // fixpoint
    }
}

TEST_CASE("document round-trip preserves value equality") {
    const PolicyDocument doc = parse_policy(kEnglFixtureText);
    const Policy policy = validate_document(doc);
    const PolicyDocument again = parse_policy(serialize_policy(policy));
    CHECK(doc == again);
}

TEST_CASE("unsorted catalogs load to sorted indices") {
    const Policy policy = load_policy(R"({
        "model": "engl", "levels": 1,
        "users": ["zed", "amy"], "groups": ["g"], "resources": ["r"],
        "lug": {"zed": {"g": 1}}, "lrg": {"r": {"g": 1}}
    })");
    const auto& p = std::get<EnglPolicy>(policy);
    REQUIRE(p.users == std::vector<std::string>{"amy", "zed"});
    CHECK(p.lug[1][0] == 1);  // zed's entry followed its name
    CHECK(p.lug[0][0] == 0);
}

TEST_CASE("the shipped fixture files are in canonical form") {
    for (const char* name : {"engl.json", "enlg.json"}) {
        const std::string path = std::string(ENETACL_FIXTURE_DIR) + "/" + name;
        std::ifstream in(path, std::ios::binary);
        REQUIRE(in);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        const std::string bytes = buffer.str();
        CHECK(serialize_policy(load_policy(bytes)) == bytes);
    }
    CHECK(load_policy_file(std::string(ENETACL_FIXTURE_DIR) + "/engl.json") ==
          Policy(engl_fixture()));
    CHECK(load_policy_file(std::string(ENETACL_FIXTURE_DIR) + "/enlg.json") ==
          Policy(enlg_fixture()));
}

TEST_CASE("random policies survive serialize -> load round-trips") {
    std::mt19937 rng(20260810);
    for (int round = 0; round < 100; ++round) {
        const Policy engl = random_engl_policy(rng);
        CHECK(load_policy(serialize_policy(engl)) == engl);
        const Policy enlg = random_enlg_policy(rng);
        CHECK(load_policy(serialize_policy(enlg)) == enlg);
    }
}
