#include "shiftcalc/selftest.hpp"

#include <sstream>
#include <vector>

#include "shiftcalc/json_io.hpp"
#include "shiftcalc/matrix.hpp"
#include "shiftcalc/shiftop.hpp"

namespace shiftcalc {

namespace {

struct Check {
    std::ostringstream& out;
    bool& ok;
    std::string& first;

    void pass(const std::string& name) { out << "ok   " << name << "\n"; }
    void failure(const std::string& name, const std::string& detail) {
        out << "FAIL " << name << ": " << detail << "\n";
        if (first.empty()) first = name + ": " + detail;
        ok = false;
    }
};

// Small deterministic generator; good enough for smoke inputs.
struct Lcg {
    u64 s;
    u32 next(u32 mod) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<u32>((s >> 33) % mod);
    }
};

void field_smoke(Check& c) {
    for (u32 p : {2u, 3u, 5u, 7u, 11u, 13u}) {
        FieldCtx F(p);
        for (u32 a = 1; a < p; ++a) {
            const FpElem x = F.elem(a);
            if (x * x.inv() != F.one()) {
                c.failure("field.inverse", "a*inv(a) != 1 at p=" + std::to_string(p) +
                                               ", a=" + std::to_string(a));
                return;
            }
            if (x.pow(p - 1) != F.one()) {
                c.failure("field.fermat", "a^(p-1) != 1 at p=" + std::to_string(p) +
                                              ", a=" + std::to_string(a));
                return;
            }
        }
    }
    c.pass("field.inverse+fermat (exhaustive, p <= 13)");
}

void binom_smoke(Check& c, bool inject_fault) {
    for (u32 p : {2u, 3u, 5u, 7u}) {
        // Pascal-triangle oracle.
        std::vector<std::vector<u32>> row{{1}};
        for (int n = 0; n <= 60; ++n) {
            for (int k = 0; k <= n; ++k) {
                u32 expect = row[0][static_cast<std::size_t>(k)];
                if (inject_fault && p == 5 && n == 10 && k == 3) expect = (expect + 1) % p;
                const u32 got = binom_mod_p_raw(static_cast<u64>(n), static_cast<u64>(k), p);
                if (got != expect) {
                    c.failure("binomial.pascal",
                              "C(" + std::to_string(n) + "," + std::to_string(k) + ") mod " +
                                  std::to_string(p) + ": table " + std::to_string(expect) +
                                  " vs lucas " + std::to_string(got));
                    return;
                }
            }
            std::vector<u32> next(static_cast<std::size_t>(n) + 2, 1);
            for (int k = 1; k <= n; ++k)
                next[static_cast<std::size_t>(k)] =
                    fpdetail::add_mod(row[0][static_cast<std::size_t>(k - 1)],
                                      row[0][static_cast<std::size_t>(k)], p);
            row[0] = std::move(next);
        }
    }
    c.pass("binomial.pascal (n <= 60, p <= 7)");
}

void rref_smoke(Check& c) {
    Lcg rng{20240817};
    for (int trial = 0; trial < 50; ++trial) {
        const u32 p = trial % 2 == 0 ? 3 : 5;
        FpMatrix M(p, 4, 5);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t col = 0; col < 5; ++col) M.at(r, col) = rng.next(p);
        const RrefResult R = rref(M);
        if (R.rank + R.nullspace.size() != 5) {
            c.failure("rref.rank_nullity", "rank + nullity != cols");
            return;
        }
        for (const auto& v : R.nullspace) {
            for (std::size_t r = 0; r < 4; ++r) {
                u32 acc = 0;
                for (std::size_t col = 0; col < 5; ++col)
                    acc = fpdetail::add_mod(acc, fpdetail::mul_mod(M.at(r, col), v[col], p), p);
                if (acc != 0) {
                    c.failure("rref.nullspace", "M * v != 0");
                    return;
                }
            }
        }
    }
    c.pass("rref.rank_nullity+nullspace (50 matrices)");
}

// The certified window promises: if the expansion vanishes on [0, W], it
// vanishes everywhere. Checked against a direct scan out to 3W, exhaustively
// over tiny one-dimensional multisets and all coefficient vectors.
void window_validation(Check& c) {
    for (u32 p : {2u, 3u}) {
        std::vector<std::vector<u32>> mult_choices;
        std::vector<u32> cur(p, 0);
        while (true) {
            u32 total = 0;
            for (u32 m : cur) total += m;
            if (total >= 1 && total <= 3) mult_choices.push_back(cur);
            std::size_t pos = p;
            while (pos > 0 && cur[pos - 1] == 3) cur[--pos] = 0;
            if (pos == 0) break;
            ++cur[pos - 1];
        }
        for (const auto& mults : mult_choices) {
            PointMultiset A(p, 1);
            for (u32 a = 0; a < p; ++a)
                if (mults[a] > 0) A.add_point(Point{a}, mults[a]);
            const CertWindow w = certified_window(A);
            ShiftCombo probe{A};
            const auto keys = probe.all_keys();

            std::vector<u32> coeff(keys.size(), 0);
            while (true) {
                // next coefficient vector (odometer), skipping the zero combo
                std::size_t pos = keys.size();
                while (pos > 0 && coeff[pos - 1] + 1 == p) coeff[--pos] = 0;
                if (pos == 0) break;
                ++coeff[pos - 1];

                ShiftCombo l{A};
                for (std::size_t i = 0; i < keys.size(); ++i)
                    if (coeff[i] != 0) l.set_coeff(keys[i].a, keys[i].beta, coeff[i]);
                if (l.is_zero()) continue;

                long first_direct = -1;
                for (u64 kk = 0; kk <= 3 * w.coord_bound; ++kk) {
                    if (expansion_coefficient(l, MultiIndex{static_cast<u32>(kk)}) != 0) {
                        first_direct = static_cast<long>(kk);
                        break;
                    }
                }
                const DegreeResult dr = degree_and_leading(l);
                if (first_direct == -1 || dr.deg != first_direct ||
                    static_cast<u64>(first_direct) > w.coord_bound) {
                    c.failure("window.certified",
                              "windowed degree " + std::to_string(dr.deg) +
                                  " vs direct scan " + std::to_string(first_direct) +
                                  " (p=" + std::to_string(p) + ")");
                    return;
                }
            }
        }
    }
    c.pass("window.certified (p in {2,3}, n=1, beta_max <= 2, exhaustive)");
}

void determinism_smoke(Check& c) {
    PointMultiset A(5, 2);
    A.add_point(Point{0, 1}, 2);
    A.add_point(Point{3, 4}, 1);
    const std::string s1 = multiset_to_json(A).dump();
    const std::string s2 = multiset_to_json(multiset_from_json(multiset_to_json(A))).dump();
    if (s1 != s2) {
        c.failure("serialization.roundtrip", "canonical form not a fixed point");
        return;
    }
    c.pass("serialization.roundtrip");
}

} // namespace

SelftestReport selftest(bool inject_binom_fault) {
    SelftestReport rep;
    std::ostringstream out;
    Check c{out, rep.ok, rep.first_failure};

    field_smoke(c);
    binom_smoke(c, inject_binom_fault);
    rref_smoke(c);
    window_validation(c);
    determinism_smoke(c);

    out << (rep.ok ? "selftest: all checks passed\n" : "selftest: FAILED\n");
    rep.text = out.str();
    return rep;
}

} // namespace shiftcalc
