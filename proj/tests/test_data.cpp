#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "g2bsd/data.hpp"
#include "g2bsd/errors.hpp"
#include "support.hpp"

using namespace g2bsd;

namespace {

std::vector<std::string> read_lines(const std::string& path)
{
    std::ifstream in(path);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string write_temp(const std::string& name, const std::vector<std::string>& lines)
{
    auto p = std::filesystem::temp_directory_path() / name;
    std::ofstream out(p);
    for (auto& l : lines) out << l << '\n';
    return p.string();
}

std::string header_for(const char* schema, const std::vector<std::string>& body)
{
    std::string all;
    for (auto& l : body) all += l + "\n";
    return std::string("{\"schema\":\"") + schema + "\",\"count\":" + std::to_string(body.size()) +
           ",\"sha256\":\"" + sha256_hex(all) + "\"}";
}

}  // namespace

TEST_CASE("fixture sizes")
{
    auto rs = load_records(testing::fixture_dir() + "/figure1.jsonl");
    auto ts = load_twist_records(testing::fixture_dir() + "/figure2.jsonl");
    CHECK(rs.size() == 28);
    CHECK(ts.size() == 22);
    int r0 = 0;
    for (auto& r : rs) r0 += r.rank == 0;
    CHECK(r0 == 6);
}

TEST_CASE("load, emit, load is the identity")
{
    for (const char* name : {"figure1.jsonl", "figure2.jsonl"}) {
        auto path = testing::fixture_dir() + "/" + name;
        auto lines = read_lines(path);
        REQUIRE(lines.size() > 1);
        if (std::string(name) == "figure1.jsonl") {
            auto rs = load_records(path);
            for (size_t i = 0; i < rs.size(); ++i) CHECK(emit_record(rs[i]) == lines[i + 1]);
        } else {
            auto ts = load_twist_records(path);
            for (size_t i = 0; i < ts.size(); ++i) CHECK(emit_record(ts[i]) == lines[i + 1]);
        }
    }
}

TEST_CASE("sha256")
{
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("corrupted fixtures are rejected")
{
    auto lines = read_lines(testing::fixture_dir() + "/figure1.jsonl");
    SUBCASE("checksum")
    {
        auto bad = lines;
        bad[3][bad[3].find("\"rank\":") + 7] = '1';
        CHECK_THROWS_AS(load_records(write_temp("g2bsd-bad1.jsonl", bad)), ChecksumMismatch);
    }
    SUBCASE("count")
    {
        auto bad = lines;
        bad.pop_back();
        CHECK_THROWS_AS(load_records(write_temp("g2bsd-bad2.jsonl", bad)), SchemaError);
    }
    SUBCASE("field type, with line and field in the message")
    {
        std::vector<std::string> body(lines.begin() + 1, lines.end());
        auto pos = body[1].find("\"rank\":0");
        REQUIRE(pos != std::string::npos);
        body[1].replace(pos, 8, "\"rank\":\"zero\"");
        std::vector<std::string> file{header_for(kCurveSchema, body)};
        file.insert(file.end(), body.begin(), body.end());
        try {
            load_records(write_temp("g2bsd-bad3.jsonl", file));
            FAIL("no exception");
        } catch (const SchemaError& e) {
            std::string w = e.what();
            CHECK(w.find("line 3") != std::string::npos);
            CHECK(w.find("rank") != std::string::npos);
        }
    }
    SUBCASE("schema version")
    {
        std::vector<std::string> body(lines.begin() + 1, lines.end());
        std::vector<std::string> file{header_for("g2bsd.curve/0", body)};
        file.insert(file.end(), body.begin(), body.end());
        CHECK_THROWS_AS(load_records(write_temp("g2bsd-bad4.jsonl", file)), SchemaError);
    }
}

TEST_CASE("record cross-checks")
{
    auto rs = load_records(testing::fixture_dir() + "/figure1.jsonl");
    for (auto& r : rs) CHECK_MESSAGE(crosscheck_record(r).empty(), r.label);
    auto r = find_record(rs, "X0_23");
    SUBCASE("Tamagawa product not dividing the index")
    {
        r.heegner[0].index = 3;
        auto d = crosscheck_record(r);
        REQUIRE(d.size() == 1);
        CHECK(d[0].find("does not divide") != std::string::npos);
    }
    SUBCASE("non-fundamental discriminant")
    {
        r.heegner[0].D = -28;
        CHECK_FALSE(crosscheck_record(r).empty());
    }
    CHECK_THROWS_AS(find_record(rs, "X0_11"), MissingIngestedDatum);
}

TEST_CASE("twist records")
{
    auto rs = load_records(testing::fixture_dir() + "/figure1.jsonl");
    auto ts = load_twist_records(testing::fixture_dir() + "/figure2.jsonl");
    int clean = 0;
    for (auto& t : ts) clean += crosscheck_record(t, find_record(rs, t.label)).empty();
    // the X0(287)* row carries -21, which is not a fundamental discriminant
    CHECK(clean == 21);
    auto& t287 = ts[19];
    CHECK(t287.label == "X0_287star");
    CHECK_FALSE(crosscheck_record(t287, find_record(rs, t287.label)).empty());
}
