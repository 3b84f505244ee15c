#include <doctest.h>

#include <openssl/sha.h>

#include "finitopos/dsl.hpp"
#include "finitopos/fixtures.hpp"
#include "finitopos/report.hpp"

using namespace finitopos;

namespace {

Invocation on_fixture(std::vector<std::string> path, const std::string& name) {
    Invocation inv;
    inv.path = std::move(path);
    inv.fixture = name;
    inv.budget = 1000000;
    return inv;
}

}  // namespace

TEST_CASE("digest is SHA-256 of the compact report body") {
    auto r = make_report(on_fixture({"check", "sle"}, "lattice-3-2"), execute(on_fixture({"check", "sle"}, "lattice-3-2")));
    json body = r;
    body.erase("digest");
    auto text = body.dump();
    unsigned char md[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(text.data()), text.size(), md);
    std::string hex;
    const char* digits = "0123456789abcdef";
    for (unsigned char b : md) {
        hex += digits[b >> 4];
        hex += digits[b & 15];
    }
    CHECK(r.at("digest") == hex);
    CHECK(r.at("schema_version") == kSchemaVersion);
    CHECK(r.at("verdict").at("status") == "PASS");
}

TEST_CASE("every fixture check replays to the identical verdict and digest") {
    for (const auto& name : fixture_names())
        for (const char* check : {"adjunction", "frobenius", "sle", "stable-units", "exp-ideal", "lcc"}) {
            CAPTURE(name);
            CAPTURE(check);
            auto inv = on_fixture({"check", check}, name);
            auto report = make_report(inv, execute(inv));
            auto reparsed = json::parse(report.dump(2));
            auto r = replay_report(reparsed);
            CHECK(r.ok());
            if (report.contains("witness") && r.independent) CHECK(r.independent_agrees);
        }
}

TEST_CASE("invocations survive a JSON round trip") {
    Invocation inv;
    inv.path = {"kan", "lan"};
    inv.document = "category C { objects: x; }\n";
    inv.names["functor"] = "L";
    inv.presheaves = {"X", "Y"};
    inv.max_vertices = 3;
    inv.fast = true;
    auto back = invocation_from_json(to_json(inv));
    CHECK(to_json(back) == to_json(inv));
}

TEST_CASE("tampering is detected") {
    auto inv = on_fixture({"check", "stable-units"}, "m3");
    auto report = make_report(inv, execute(inv));
    REQUIRE(report.at("verdict").at("status") == "FAIL");

    auto flipped = report;
    flipped["verdict"]["status"] = "PASS";
    auto r = replay_report(flipped);
    CHECK_FALSE(r.digest_matches);
    CHECK_FALSE(r.verdict_matches);
    CHECK_FALSE(r.ok());

    // a consistent re-signing still fails against the recomputation
    flipped["digest"] = report_digest(flipped);
    r = replay_report(flipped);
    CHECK(r.digest_matches);
    CHECK_FALSE(r.verdict_matches);
    CHECK_FALSE(r.independent_agrees);

    auto other = report;
    other["command"]["fixture"] = "bool-2";
    other["digest"] = report_digest(other);
    CHECK_FALSE(replay_report(other).ok());
}

TEST_CASE("constructions from DSL input") {
    Invocation inv;
    inv.path = {"kan", "lan"};
    inv.budget = 1000000;
    inv.document = delta1_source() + R"(
category pt { objects: v; }
functor L : delta1 -> pt { objects: V -> v, E -> v; morphisms: d0 -> id(v), d1 -> id(v), s -> id(v); }
presheaf G on delta1 { at V: a, b, c; at E: la, lb, lc, ab; act d0: la -> a, lb -> b, lc -> c, ab -> a; act d1: la -> a, lb -> b, lc -> c, ab -> b; act s: a -> la, b -> lb, c -> lc; }
)";
    auto out = execute(inv);
    REQUIRE(out.result);
    CHECK(out.result->at("sizes").at("v") == 2);  // components {a, b} and {c}
    auto doc = read_document(out.result->at("dsl").get<std::string>());
    CHECK(doc.presheaves.count("lan"));

    inv.path = {"kan", "ran"};
    CHECK(execute(inv).result->at("sizes").at("v") == 3);  // vertices

    inv.path = {"kan", "sideways"};
    CHECK_THROWS_AS(execute(inv), std::invalid_argument);
    inv.path = {"check", "lcc"};
    inv.document = "category C {";
    CHECK_THROWS_AS(execute(inv), ParseError);
}

TEST_CASE("witness kinds without an independent re-verifier") {
    CHECK_FALSE(replay_witness(json{{"level", "presheaf"}}));
    CHECK_FALSE(replay_witness(json{{"terminal", "x"}}));
    CHECK_THROWS_AS(replay_witness(json::array()), InvalidData);
}
