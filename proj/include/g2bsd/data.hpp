#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "g2bsd/curve.hpp"

namespace g2bsd {

struct TamagawaEntry {
    u64 p = 0;
    long c = 1;
    std::string reduction;
};

struct HeegnerEntry {
    i64 D = 0;
    std::optional<long> index;
};

struct BadFactorEntry {
    u64 p = 0;
    std::vector<i64> poly;
};

struct LocalH1Entry {
    u64 p = 0;
    std::vector<long> places;
};

struct FrobeniusEntry {
    u64 p = 0;
    i64 trace = 0;
    i64 norm = 0;
};

struct GeneratorEntry {
    std::vector<std::string> a, b;  // Mumford polynomials on the original model, rational strings
};

struct CurveRecord {
    std::string label;
    u64 level = 0;
    std::string quotient_kind;
    std::vector<long> quotient_w;
    std::vector<long> f, h;
    std::vector<long> sextic;
    long rm_disc = 0;
    int rank = 0;
    long tamagawa_odd = 1;
    std::vector<TamagawaEntry> tamagawa;
    std::vector<HeegnerEntry> heegner;
    std::vector<std::string> reducible;
    long sha_an = 1;
    bool sha2_trivial = false;
    std::vector<BadFactorEntry> bad_factors;
    std::vector<LocalH1Entry> local_h1;
    std::vector<FrobeniusEntry> frobenius;
    std::optional<long> torsion;
    std::vector<GeneratorEntry> generators;
    std::vector<std::pair<std::string, std::string>> provenance;

    CurveModel model() const;
    long tamagawa_product() const;
    std::map<u64, std::vector<i64>> bad_factor_map() const;
};

struct TwistRecord {
    std::string label;
    i64 D = 0;
    bool starred = false;
    long sha_twist = 0;
    long sha_K = 0;
    long sha_Q = 0;
    std::vector<TamagawaEntry> twist_tamagawa;
    std::vector<std::pair<std::string, std::string>> provenance;

    long tamagawa_product() const;
};

inline constexpr const char* kCurveSchema = "g2bsd.curve/1";
inline constexpr const char* kTwistSchema = "g2bsd.twist/1";

// Header line {"schema", "count", "sha256"} followed by one record per line.
std::vector<CurveRecord> load_records(const std::string& path);
std::vector<TwistRecord> load_twist_records(const std::string& path);

std::string emit_record(const CurveRecord& r);
std::string emit_record(const TwistRecord& r);
CurveRecord parse_curve_record(const std::string& line, int line_no = 0);
TwistRecord parse_twist_record(const std::string& line, int line_no = 0);

std::string sha256_hex(const std::string& data);

// Re-derives the cheap fields and lists disagreements.
std::vector<std::string> crosscheck_record(const CurveRecord& r);
std::vector<std::string> crosscheck_record(const TwistRecord& t, const CurveRecord& base);

const CurveRecord& find_record(const std::vector<CurveRecord>& rs, const std::string& label);

}  // namespace g2bsd
