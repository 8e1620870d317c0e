#include "shiftcalc/json_io.hpp"

#include <fstream>
#include <sstream>

namespace shiftcalc {

namespace {

[[noreturn]] void schema_fail(const std::string& what) { fail("SchemaError", what); }

u64 get_u64(const Json& j, const char* key, u64 lo, u64 hi) {
    if (!j.contains(key) || !j[key].is_number_integer())
        schema_fail(std::string("missing or non-integer field '") + key + "'");
    const i64 v = j[key].get<i64>();
    if (v < 0 || static_cast<u64>(v) < lo || static_cast<u64>(v) > hi)
        schema_fail(std::string("field '") + key + "' out of range");
    return static_cast<u64>(v);
}

std::vector<u32> get_residue_vector(const Json& j, std::size_t n, u32 p, const char* what) {
    if (!j.is_array() || j.size() != n)
        schema_fail(std::string(what) + " must be an array of length n");
    std::vector<u32> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_number_integer()) schema_fail(std::string(what) + " entries must be integers");
        v[i] = fpdetail::canon(j[i].get<i64>(), p);
    }
    return v;
}

MultiIndex get_exponent_vector(const Json& j, std::size_t n, const char* what) {
    if (!j.is_array() || j.size() != n)
        schema_fail(std::string(what) + " must be an array of length n");
    MultiIndex v(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_number_integer() || j[i].get<i64>() < 0)
            schema_fail(std::string(what) + " entries must be nonnegative integers");
        v[i] = static_cast<u32>(j[i].get<i64>());
    }
    return v;
}

std::pair<u32, std::size_t> get_p_n(const Json& j) {
    const u64 p = get_u64(j, "p", 2, 0x7fffffffULL);
    if (!is_prime(p)) schema_fail("p is not prime");
    const u64 n = get_u64(j, "n", 1, 64);
    return {static_cast<u32>(p), static_cast<std::size_t>(n)};
}

} // namespace

Json poly_to_json(const Poly& f) {
    Json terms = Json::array();
    for (const auto& [e, c] : f.terms())
        terms.push_back(Json{{"exps", e}, {"coeff", c}});
    return Json{{"p", f.prime()}, {"n", f.arity()}, {"terms", std::move(terms)}};
}

Poly poly_from_json(const Json& j) {
    const auto [p, n] = get_p_n(j);
    Poly f(p, n);
    if (!j.contains("terms") || !j["terms"].is_array()) schema_fail("missing 'terms' array");
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("exps") || !t.contains("coeff") ||
            !t["coeff"].is_number_integer())
            schema_fail("each term needs 'exps' and integer 'coeff'");
        f.add_term(get_exponent_vector(t["exps"], n, "exps"), t["coeff"].get<i64>());
    }
    return f;
}

Json multiset_to_json(const PointMultiset& A) {
    Json pts = Json::array();
    for (const auto& [a, m] : A.points())
        pts.push_back(Json{{"coords", a}, {"mult", m}});
    return Json{{"p", A.prime()}, {"n", A.arity()}, {"points", std::move(pts)}};
}

PointMultiset multiset_from_json(const Json& j) {
    const auto [p, n] = get_p_n(j);
    PointMultiset A(p, n);
    if (!j.contains("points") || !j["points"].is_array()) schema_fail("missing 'points' array");
    for (const auto& e : j["points"]) {
        if (!e.is_object() || !e.contains("coords")) schema_fail("each point needs 'coords'");
        u32 mult = 1;
        if (e.contains("mult")) mult = static_cast<u32>(get_u64(e, "mult", 1, 1'000'000));
        A.add_point(get_residue_vector(e["coords"], n, p, "coords"), mult);
    }
    return A;
}

Json combo_to_json(const ShiftCombo& l) {
    Json pts = Json::array();
    for (const auto& [a, m] : l.base().points())
        pts.push_back(Json{{"coords", a}, {"mult", m}});
    Json terms = Json::array();
    for (const auto& [k, c] : l.terms())
        terms.push_back(Json{{"coords", k.a}, {"beta", k.beta}, {"coeff", c}});
    return Json{{"p", l.prime()}, {"n", l.arity()}, {"points", std::move(pts)},
                {"terms", std::move(terms)}};
}

ShiftCombo combo_from_json(const Json& j) {
    const auto [p, n] = get_p_n(j);
    if (!j.contains("terms") || !j["terms"].is_array()) schema_fail("missing 'terms' array");

    struct RawTerm {
        Point a;
        MultiIndex beta;
        i64 coeff;
    };
    std::vector<RawTerm> raw;
    for (const auto& t : j["terms"]) {
        if (!t.is_object() || !t.contains("coords") || !t.contains("beta") ||
            !t.contains("coeff") || !t["coeff"].is_number_integer())
            schema_fail("each combo term needs 'coords', 'beta' and integer 'coeff'");
        raw.push_back({get_residue_vector(t["coords"], n, p, "coords"),
                       get_exponent_vector(t["beta"], n, "beta"), t["coeff"].get<i64>()});
    }

    PointMultiset base(p, n);
    if (j.contains("points")) {
        base = multiset_from_json(Json{{"p", p}, {"n", n}, {"points", j["points"]}});
    } else {
        // Infer the coarsest base from the terms.
        std::map<Point, u64, GradedLex> top;
        for (const auto& t : raw) {
            auto [it, fresh] = top.try_emplace(t.a, weight(t.beta));
            if (!fresh) it->second = std::max(it->second, weight(t.beta));
        }
        for (const auto& [a, w] : top) base.add_point(a, static_cast<u32>(w + 1));
    }

    ShiftCombo l{base};
    for (const auto& t : raw) l.add_coeff(t.a, t.beta, t.coeff);
    return l;
}

Json family_to_json(const apps::SumFreeFamily& fam) {
    Json tuples = Json::array();
    for (const auto& tup : fam.tuples) {
        Json jt = Json::array();
        for (const auto& pt : tup) jt.push_back(pt);
        tuples.push_back(std::move(jt));
    }
    return Json{{"p", fam.p}, {"n", fam.n}, {"k", fam.k}, {"tuples", std::move(tuples)}};
}

apps::SumFreeFamily family_from_json(const Json& j) {
    const auto [p, n] = get_p_n(j);
    const u64 k = get_u64(j, "k", 2, 64);
    apps::SumFreeFamily fam;
    fam.p = p;
    fam.n = n;
    fam.k = static_cast<std::size_t>(k);
    if (!j.contains("tuples") || !j["tuples"].is_array()) schema_fail("missing 'tuples' array");
    for (const auto& jt : j["tuples"]) {
        if (!jt.is_array() || jt.size() != k) schema_fail("each tuple must list k points");
        std::vector<Point> tup;
        for (const auto& jp : jt) tup.push_back(get_residue_vector(jp, n, p, "tuple point"));
        fam.tuples.push_back(std::move(tup));
    }
    return fam;
}

Json expansion_to_json(const DerivExpansion& e) {
    Json coeffs = Json::array();
    for (const auto& [a, c] : e.coeffs)
        coeffs.push_back(Json{{"alpha", a}, {"coeff", c}});
    return Json{{"p", e.p}, {"n", e.n}, {"truncation_weight", e.truncation_weight},
                {"coeffs", std::move(coeffs)}};
}

Json delta_to_json(const DeltaBasis& b) {
    Json basis = Json::array();
    for (const auto& e : b.basis) basis.push_back(expansion_to_json(e));
    return Json{{"d", b.d},
                {"certified", b.certified},
                {"dim", b.basis.size()},
                {"basis", std::move(basis)}};
}

std::string bigfloat_str(const BigFloat& x, int digits) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("SchemaError", "cannot open file: " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        fail("SchemaError", "invalid JSON in " + path + ": " + e.what());
    }
}

} // namespace shiftcalc
