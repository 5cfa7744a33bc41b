#include <catch2/catch_amalgamated.hpp>

#include <filesystem>

#include "couette/report.hpp"

using namespace couette;

TEST_CASE("manifest parsing") {
    auto m = RunManifest::from_tokens("resolvent-scan", {"nu=1e-3", "k=0.5", "tag=a,b"});
    CHECK(m.get_real("nu", 0) == 1e-3);
    CHECK(m.get_real("k", 0) == 0.5);
    CHECK(m.get_real("missing", 7.0) == 7.0);
    CHECK_THROWS_AS(m.get_real("tag", 0), SchemaError);
    CHECK_THROWS_AS(RunManifest::from_tokens("x", {"novalue"}), SchemaError);

    SECTION("unknown keys are named in the error") {
        try {
            m.validate_keys({"nu", "k"});
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            CHECK(std::string(e.what()).find("tag") != std::string::npos);
        }
    }

    SECTION("echo lines are stable and '#'-prefixed") {
        auto lines = m.echo_lines();
        CHECK(lines.find("# nu=1e-3") != std::string::npos);
        CHECK(lines.find("# subcommand=resolvent-scan") != std::string::npos);
        CHECK(lines.rfind("#", 0) == 0);
    }
}

TEST_CASE("campaign report") {
    CampaignReport rep;

    SECTION("empty report renders header only and passes") {
        auto text = render_text(rep);
        CHECK(text.find("check") == 0);
        CHECK(rep.aggregate_pass());
    }

    SECTION("one failing check fails the aggregate and is printed first") {
        rep.add("good", "anchor-a", 1.0, 2.0);
        rep.add("bad", "anchor-b", 3.0, 2.0);
        CHECK_FALSE(rep.aggregate_pass());
        auto text = render_text(rep);
        CHECK(text.find("bad") < text.find("good"));  // sorted by margin ascending
        CHECK(text.find("FAIL") != std::string::npos);
        CHECK(text.find("anchor-b") == std::string::npos);  // anchors live in JSON
    }

    SECTION("informational checks never fail the aggregate") {
        rep.add("info", "anchor", 5.0, 1.0, true);
        CHECK(rep.aggregate_pass());
    }

    SECTION("margins serialize with six significant digits, round-trip stable") {
        const double v = 0.123456789123;
        const double r = round6(v);
        CHECK(r == Catch::Approx(0.123457).epsilon(1e-12));
        CHECK(round6(r) == r);
        rep.add("m", "a", v, 1.0);
        RunManifest m = RunManifest::from_tokens("airy-selftest", {});
        auto j = report_json(m, rep);
        auto parsed = nlohmann::ordered_json::parse(j.dump());
        CHECK(parsed["checks"][0]["value"].get<double>() == r);
    }
}

TEST_CASE("atomic write") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "couette_harness_test";
    fs::remove_all(dir);
    const auto target = dir / "nested" / "file.txt";
    atomic_write(target.string(), "payload");
    CHECK(fs::exists(target));
    CHECK_FALSE(fs::exists(target.string() + ".tmp"));
    std::ifstream in(target);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "payload");
    atomic_write(target.string(), "replaced");
    std::ifstream in2(target);
    std::string content2((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
    CHECK(content2 == "replaced");
    fs::remove_all(dir);
}

TEST_CASE("csv writer embeds the manifest") {
    auto m = RunManifest::from_tokens("evolve", {"nu=1e-3"});
    CsvWriter csv(m, {"a", "b"});
    csv.row({"1", "2"});
    auto text = csv.str();
    CHECK(text.find("# nu=1e-3\n") != std::string::npos);
    CHECK(text.find("a,b\n1,2\n") != std::string::npos);
}
