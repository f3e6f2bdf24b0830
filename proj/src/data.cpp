#include "g2bsd/data.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "g2bsd/errors.hpp"

namespace g2bsd {

using json = nlohmann::ordered_json;

namespace {

struct Ctx {
    int line;
    std::string field;
    [[noreturn]] void fail(const std::string& what) const
    {
        throw SchemaError("line " + std::to_string(line) + ": field '" + field + "': " + what);
    }
};

const json& need(const json& j, const char* key, Ctx& c)
{
    c.field = key;
    if (!j.is_object() || !j.contains(key)) c.fail("missing");
    return j.at(key);
}

long get_long(const json& j, Ctx& c)
{
    if (!j.is_number_integer()) c.fail("expected integer");
    return j.get<long>();
}

std::string get_string(const json& j, Ctx& c)
{
    if (!j.is_string()) c.fail("expected string");
    return j.get<std::string>();
}

bool get_bool(const json& j, Ctx& c)
{
    if (!j.is_boolean()) c.fail("expected boolean");
    return j.get<bool>();
}

template <class T>
std::vector<T> get_int_list(const json& j, Ctx& c)
{
    if (!j.is_array()) c.fail("expected list");
    std::vector<T> out;
    for (auto& x : j) {
        if (!x.is_number_integer()) c.fail("expected list of integers");
        out.push_back(x.get<T>());
    }
    return out;
}

std::vector<TamagawaEntry> get_tamagawa(const json& j, Ctx& c, bool with_reduction)
{
    if (!j.is_array()) c.fail("expected list");
    std::string f = c.field;
    std::vector<TamagawaEntry> out;
    for (auto& e : j) {
        TamagawaEntry t;
        t.p = static_cast<u64>(get_long(need(e, "p", c), c));
        t.c = get_long(need(e, "c", c), c);
        if (with_reduction) t.reduction = get_string(need(e, "reduction", c), c);
        c.field = f;
        out.push_back(t);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> get_provenance(const json& j, Ctx& c)
{
    if (!j.is_object()) c.fail("expected object");
    std::vector<std::pair<std::string, std::string>> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_string()) c.fail("expected string values");
        out.emplace_back(it.key(), it.value().get<std::string>());
    }
    return out;
}

json tamagawa_json(const std::vector<TamagawaEntry>& v, bool with_reduction)
{
    json a = json::array();
    for (auto& t : v) {
        json e;
        e["p"] = t.p;
        e["c"] = t.c;
        if (with_reduction) e["reduction"] = t.reduction;
        a.push_back(e);
    }
    return a;
}

json provenance_json(const std::vector<std::pair<std::string, std::string>>& p)
{
    json o = json::object();
    for (auto& [k, v] : p) o[k] = v;
    return o;
}

struct Body {
    std::string schema;
    std::vector<std::string> lines;
    int first_line = 2;
};

Body read_body(const std::string& path, const char* schema)
{
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw SchemaError("line 1: empty file");
    json h;
    try {
        h = json::parse(header);
    } catch (const json::parse_error& e) {
        throw SchemaError("line 1: header is not JSON");
    }
    Ctx c{1, ""};
    std::string s = get_string(need(h, "schema", c), c);
    if (s != schema) c.fail("expected " + std::string(schema) + ", found " + s);
    long count = get_long(need(h, "count", c), c);
    std::string digest = get_string(need(h, "sha256", c), c);
    Body b;
    b.schema = s;
    std::string line, all;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        all += line + "\n";
        b.lines.push_back(line);
    }
    if (static_cast<long>(b.lines.size()) != count)
        throw SchemaError("line 1: field 'count': header says " + std::to_string(count) + ", file has " +
                          std::to_string(b.lines.size()));
    if (sha256_hex(all) != digest) throw ChecksumMismatch(path);
    return b;
}

bool split_all(u64 N, i64 D)
{
    for (auto& [p, e] : factor(N))
        if (kronecker(D, p) != 1) return false;
    return true;
}

json parse_line(const std::string& line, int line_no)
{
    try {
        json j = json::parse(line);
        if (!j.is_object()) throw SchemaError("line " + std::to_string(line_no) + ": record is not an object");
        return j;
    } catch (const json::parse_error& e) {
        throw SchemaError("line " + std::to_string(line_no) + ": " + e.what());
    }
}

}  // namespace

std::string sha256_hex(const std::string& data)
{
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int n = 0;
    EVP_Digest(data.data(), data.size(), md, &n, EVP_sha256(), nullptr);
    std::ostringstream o;
    for (unsigned i = 0; i < n; ++i) o << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return o.str();
}

CurveModel CurveRecord::model() const { return CurveModel::from_ints(f, h, label, level); }

long CurveRecord::tamagawa_product() const
{
    long p = 1;
    for (auto& t : tamagawa) p *= t.c;
    return p;
}

std::map<u64, std::vector<i64>> CurveRecord::bad_factor_map() const
{
    std::map<u64, std::vector<i64>> m;
    for (auto& b : bad_factors) m[b.p] = b.poly;
    return m;
}

long TwistRecord::tamagawa_product() const
{
    long p = 1;
    for (auto& t : twist_tamagawa) p *= t.c;
    return p;
}

CurveRecord parse_curve_record(const std::string& line, int line_no)
{
    json j = parse_line(line, line_no);
    Ctx c{line_no, ""};
    CurveRecord r;
    r.label = get_string(need(j, "label", c), c);
    r.level = static_cast<u64>(get_long(need(j, "level", c), c));
    const json& q = need(j, "quotient", c);
    r.quotient_kind = get_string(need(q, "kind", c), c);
    r.quotient_w = get_int_list<long>(need(q, "w", c), c);
    const json& m = need(j, "model", c);
    r.f = get_int_list<long>(need(m, "f", c), c);
    r.h = get_int_list<long>(need(m, "h", c), c);
    c.field = "model";
    if (r.f.size() != 7 || r.h.size() != 4) c.fail("f needs 7 and h needs 4 coefficients");
    r.sextic = get_int_list<long>(need(j, "sextic", c), c);
    if (r.sextic.size() != 7) c.fail("expected 7 coefficients");
    r.rm_disc = get_long(need(j, "rm_disc", c), c);
    r.rank = static_cast<int>(get_long(need(j, "rank", c), c));
    r.tamagawa_odd = get_long(need(j, "tamagawa_odd", c), c);
    r.tamagawa = get_tamagawa(need(j, "tamagawa", c), c, true);
    const json& hg = need(j, "heegner", c);
    if (!hg.is_array()) c.fail("expected list");
    for (auto& e : hg) {
        HeegnerEntry H;
        H.D = get_long(need(e, "D", c), c);
        const json& idx = need(e, "index", c);
        if (!idx.is_null()) H.index = get_long(idx, c);
        r.heegner.push_back(H);
    }
    const json& red = need(j, "reducible", c);
    if (!red.is_array()) c.fail("expected list");
    for (auto& e : red) r.reducible.push_back(get_string(e, c));
    r.sha_an = get_long(need(j, "sha_an", c), c);
    r.sha2_trivial = get_bool(need(j, "sha2_trivial", c), c);
    const json& bf = need(j, "bad_factors", c);
    if (!bf.is_array()) c.fail("expected list");
    for (auto& e : bf) {
        BadFactorEntry b;
        b.p = static_cast<u64>(get_long(need(e, "p", c), c));
        b.poly = get_int_list<i64>(need(e, "poly", c), c);
        r.bad_factors.push_back(b);
    }
    const json& lh = need(j, "local_h1", c);
    if (!lh.is_array()) c.fail("expected list");
    for (auto& e : lh) {
        LocalH1Entry L;
        L.p = static_cast<u64>(get_long(need(e, "p", c), c));
        L.places = get_int_list<long>(need(e, "places", c), c);
        r.local_h1.push_back(L);
    }
    const json& fr = need(j, "frobenius", c);
    if (!fr.is_array()) c.fail("expected list");
    for (auto& e : fr) {
        auto v = get_int_list<i64>(e, c);
        if (v.size() != 3) c.fail("expected [p, trace, norm] triples");
        r.frobenius.push_back({static_cast<u64>(v[0]), v[1], v[2]});
    }
    if (j.contains("torsion")) r.torsion = get_long(need(j, "torsion", c), c);
    if (j.contains("generators")) {
        const json& g = need(j, "generators", c);
        if (!g.is_array()) c.fail("expected list");
        for (auto& e : g) {
            GeneratorEntry G;
            for (auto& x : need(e, "a", c)) G.a.push_back(get_string(x, c));
            for (auto& x : need(e, "b", c)) G.b.push_back(get_string(x, c));
            r.generators.push_back(G);
        }
    }
    r.provenance = get_provenance(need(j, "provenance", c), c);
    return r;
}

std::string emit_record(const CurveRecord& r)
{
    json j;
    j["label"] = r.label;
    j["level"] = r.level;
    j["quotient"] = {{"kind", r.quotient_kind}, {"w", r.quotient_w}};
    j["model"] = {{"f", r.f}, {"h", r.h}};
    j["sextic"] = r.sextic;
    j["rm_disc"] = r.rm_disc;
    j["rank"] = r.rank;
    j["tamagawa_odd"] = r.tamagawa_odd;
    j["tamagawa"] = tamagawa_json(r.tamagawa, true);
    json hg = json::array();
    for (auto& H : r.heegner) {
        json e;
        e["D"] = H.D;
        e["index"] = H.index ? json(*H.index) : json(nullptr);
        hg.push_back(e);
    }
    j["heegner"] = hg;
    j["reducible"] = r.reducible;
    j["sha_an"] = r.sha_an;
    j["sha2_trivial"] = r.sha2_trivial;
    json bf = json::array();
    for (auto& b : r.bad_factors) bf.push_back({{"p", b.p}, {"poly", b.poly}});
    j["bad_factors"] = bf;
    json lh = json::array();
    for (auto& L : r.local_h1) lh.push_back({{"p", L.p}, {"places", L.places}});
    j["local_h1"] = lh;
    json fr = json::array();
    for (auto& e : r.frobenius) fr.push_back(json::array({e.p, e.trace, e.norm}));
    j["frobenius"] = fr;
    if (r.torsion) j["torsion"] = *r.torsion;
    if (!r.generators.empty()) {
        json g = json::array();
        for (auto& G : r.generators) g.push_back({{"a", G.a}, {"b", G.b}});
        j["generators"] = g;
    }
    j["provenance"] = provenance_json(r.provenance);
    return j.dump();
}

TwistRecord parse_twist_record(const std::string& line, int line_no)
{
    json j = parse_line(line, line_no);
    Ctx c{line_no, ""};
    TwistRecord t;
    t.label = get_string(need(j, "label", c), c);
    t.D = get_long(need(j, "D", c), c);
    t.starred = get_bool(need(j, "starred", c), c);
    t.sha_twist = get_long(need(j, "sha_twist", c), c);
    t.sha_K = get_long(need(j, "sha_K", c), c);
    t.sha_Q = get_long(need(j, "sha_Q", c), c);
    t.twist_tamagawa = get_tamagawa(need(j, "twist_tamagawa", c), c, false);
    t.provenance = get_provenance(need(j, "provenance", c), c);
    return t;
}

std::string emit_record(const TwistRecord& t)
{
    json j;
    j["label"] = t.label;
    j["D"] = t.D;
    j["starred"] = t.starred;
    j["sha_twist"] = t.sha_twist;
    j["sha_K"] = t.sha_K;
    j["sha_Q"] = t.sha_Q;
    j["twist_tamagawa"] = tamagawa_json(t.twist_tamagawa, false);
    j["provenance"] = provenance_json(t.provenance);
    return j.dump();
}

std::vector<CurveRecord> load_records(const std::string& path)
{
    Body b = read_body(path, kCurveSchema);
    std::vector<CurveRecord> out;
    for (size_t i = 0; i < b.lines.size(); ++i) out.push_back(parse_curve_record(b.lines[i], static_cast<int>(i) + 2));
    return out;
}

std::vector<TwistRecord> load_twist_records(const std::string& path)
{
    Body b = read_body(path, kTwistSchema);
    std::vector<TwistRecord> out;
    for (size_t i = 0; i < b.lines.size(); ++i) out.push_back(parse_twist_record(b.lines[i], static_cast<int>(i) + 2));
    return out;
}

const CurveRecord& find_record(const std::vector<CurveRecord>& rs, const std::string& label)
{
    for (auto& r : rs)
        if (r.label == label) return r;
    throw MissingIngestedDatum("no record labelled " + label);
}

std::vector<std::string> crosscheck_record(const CurveRecord& r)
{
    std::vector<std::string> d;
    // the level is the first integer in the label
    size_t i = r.label.find_first_of("0123456789", 2);
    if (i != std::string::npos) {
        u64 n = std::stoull(r.label.substr(i));
        if (n != r.level) d.push_back("label level " + std::to_string(n) + " differs from N = " + std::to_string(r.level));
    }
    CurveModel M = r.model();
    auto F = M.sextic();
    for (size_t k = 0; k < 7; ++k)
        if (F[k] != r.sextic[k]) {
            d.push_back("sextic does not equal h^2 + 4f");
            break;
        }
    Int disc = M.discriminant();
    for (auto& [p, e] : factor(r.level)) {
        if (disc % Int(static_cast<unsigned long>(p)) != 0)
            d.push_back("p = " + std::to_string(p) + " divides N but not the model discriminant");
        bool have = false;
        for (auto& t : r.tamagawa) have |= t.p == p;
        if (!have) d.push_back("no Tamagawa number at p = " + std::to_string(p));
    }
    long c_odd = static_cast<long>(odd_part(static_cast<u64>(r.tamagawa_product())));
    if (c_odd != r.tamagawa_odd)
        d.push_back("odd part of the Tamagawa product is " + std::to_string(c_odd) + ", record says " +
                    std::to_string(r.tamagawa_odd));
    for (auto& H : r.heegner) {
        if (!is_fundamental_discriminant(H.D)) d.push_back("D = " + std::to_string(H.D) + " is not fundamental");
        for (auto& [p, e] : factor(r.level))
            if (kronecker(H.D, p) != 1)
                d.push_back("D = " + std::to_string(H.D) + ": p = " + std::to_string(p) + " does not split");
        if (H.index) {
            long I = static_cast<long>(odd_part(static_cast<u64>(*H.index)));
            if (I % r.tamagawa_odd != 0)
                d.push_back("Tamagawa odd part " + std::to_string(r.tamagawa_odd) + " does not divide the index " +
                            std::to_string(*H.index));
        }
    }
    for (auto& e : r.frobenius) {
        if (r.level % e.p == 0) d.push_back("Frobenius datum at a bad prime " + std::to_string(e.p));
        long double p = static_cast<long double>(e.p);
        if (std::abs(e.trace) > 4 * std::sqrt(p) + 1e-9)
            d.push_back("trace at " + std::to_string(e.p) + " violates the Weil bound");
    }
    return d;
}

std::vector<std::string> crosscheck_record(const TwistRecord& t, const CurveRecord& base)
{
    std::vector<std::string> d;
    if (t.label != base.label) d.push_back("label mismatch");
    if (!is_fundamental_discriminant(t.D)) d.push_back("D = " + std::to_string(t.D) + " is not fundamental");
    else if (!split_all(base.level, t.D)) d.push_back("D = " + std::to_string(t.D) + " fails the split condition");
    bool listed = false;
    for (auto& H : base.heegner) listed |= H.D == t.D;
    if (!listed && !t.starred) d.push_back("D = " + std::to_string(t.D) + " differs from the curve record without a star");
    for (auto& e : t.twist_tamagawa)
        if (base.level % e.p != 0 && static_cast<u64>(t.D < 0 ? -t.D : t.D) % e.p != 0)
            d.push_back("twist Tamagawa entry at unrelated prime " + std::to_string(e.p));
    return d;
}

}  // namespace g2bsd
