#include "shiftcalc/apps.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace shiftcalc::apps {

using fpdetail::add_mod;
using fpdetail::mul_mod;
using fpdetail::pow_mod;
using fpdetail::sub_mod;

namespace {

std::vector<u32> canon_sorted(std::vector<u32> xs, u32 p) {
    for (u32& x : xs) x %= p;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

Poly root_product(u32 p, const std::vector<u32>& roots) {
    Poly f = Poly::constant(p, 1, 1);
    for (u32 c : roots) {
        Poly lin(p, 1);
        lin.add_term(MultiIndex{1}, 1);
        lin.add_term(MultiIndex{0}, -static_cast<i64>(c % p));
        f = f * lin;
    }
    return f;
}

} // namespace

BigInt count_monomials(u64 n, std::optional<u64> q, u64 r) {
    if (q && *q == 0) fail("OutOfRange", "q must be >= 1");
    if (!q) return big_binomial(n + r, r);
    if (n == 0) return 1;
    if (r > 5'000'000) fail("GuardTripped", "monomial count table too large");
    // DP over coordinates with prefix sums: dp[s] = #vectors of weight s.
    const u64 cap = std::min<u64>(*q - 1, r);
    std::vector<BigInt> dp(static_cast<std::size_t>(r) + 1, 0);
    dp[0] = 1;
    for (u64 v = 0; v < n; ++v) {
        std::vector<BigInt> pre(dp.size() + 1, 0);
        for (std::size_t s = 0; s < dp.size(); ++s) pre[s + 1] = pre[s] + dp[s];
        std::vector<BigInt> nx(dp.size(), 0);
        for (std::size_t s = 0; s < nx.size(); ++s) {
            const u64 lo = s > cap ? s - cap : 0;
            nx[s] = pre[s + 1] - pre[lo];
        }
        dp = std::move(nx);
    }
    BigInt total = 0;
    for (const BigInt& x : dp) total += x;
    return total;
}

GammaResult gamma(u32 p, u32 k, const BigFloat& tol) {
    if (!is_prime(p)) fail("SchemaError", "p must be prime");
    if (k < 3) fail("OutOfRange", "k must be >= 3");
    if (tol <= 0) fail("OutOfRange", "tol must be positive");

    const BigFloat e = BigFloat(p - 1) / k;
    const auto f_of_gamma = [&](const BigFloat& g) {
        BigFloat s = 0, gp = 1;
        for (u32 j = 0; j < p; ++j) {
            s += gp;
            gp *= g;
        }
        return s * exp(-e * log(g));
    };
    const auto f_of_u = [&](const BigFloat& u) { return f_of_gamma(exp(u)); };

    // Unimodality-validating grid pre-scan on the log domain. If the grid
    // minimum lands on the left edge (large k pushes the minimizer toward
    // 0), the grid is re-anchored further left.
    const int G = 256;
    BigFloat ulo = log(BigFloat("1e-6"));
    const BigFloat uhi = log(BigFloat(1) - BigFloat("1e-9"));
    std::vector<BigFloat> us(G), vs(G);
    int best = 0;
    bool unimodal = true;
    for (int regrid = 0; regrid < 8; ++regrid) {
        best = 0;
        for (int i = 0; i < G; ++i) {
            us[i] = ulo + (uhi - ulo) * i / (G - 1);
            vs[i] = f_of_u(us[i]);
            if (vs[i] < vs[best]) best = i;
        }
        unimodal = true;
        bool ascending = false;
        for (int i = 0; i + 1 < G; ++i) {
            if (vs[i + 1] > vs[i]) ascending = true;
            if (ascending && vs[i + 1] < vs[i]) {
                unimodal = false; // second descent: multiple local minima
                break;
            }
        }
        if (best > 0) break;
        ulo *= 2;
    }

    BigFloat a = us[std::max(0, best - 1)];
    BigFloat b = us[std::min(G - 1, best + 1)];
    BigFloat width_target = tol;
    if (width_target > BigFloat("1e-12")) width_target = BigFloat("1e-12");
    width_target /= 100;
    if (width_target < BigFloat("1e-35")) width_target = BigFloat("1e-35");
    for (int it = 0; it < 500 && b - a > width_target; ++it) {
        const BigFloat m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
        if (f_of_u(m1) <= f_of_u(m2))
            b = m2;
        else
            a = m1;
    }
    const BigFloat umin = (a + b) / 2;

    GammaResult out;
    out.unimodal = unimodal;
    out.minimizer = exp(umin);
    out.value = f_of_u(umin);
    const BigFloat h("1e-12");
    out.stationarity_residual =
        abs(f_of_gamma(out.minimizer + h) - f_of_gamma(out.minimizer - h)) / (2 * h);
    return out;
}

CdReport cd_check(const FieldCtx& F, std::vector<u32> A, std::vector<u32> B) {
    const u32 p = F.p();
    A = canon_sorted(std::move(A), p);
    B = canon_sorted(std::move(B), p);
    if (A.empty() || B.empty()) fail("EmptyInput", "A and B must be nonempty");

    std::set<u32> sum;
    for (u32 a : A)
        for (u32 b : B) sum.insert(add_mod(a, b, p));

    CdReport rep;
    rep.sumset.assign(sum.begin(), sum.end());
    rep.bound = std::min<u64>(p, A.size() + B.size() - 1);
    rep.holds = rep.sumset.size() >= rep.bound;

    if (rep.sumset.size() < p) {
        rep.certificate_checked = true;
        const Poly f = root_product(p, rep.sumset);
        const std::size_t cols = rep.sumset.size() + 1; // deg f + 1
        FpMatrix M(p, B.size(), cols);
        for (std::size_t i = 0; i < B.size(); ++i) {
            const Poly fb = shift_poly(f, Point{B[i]});
            for (const auto& [e2, c2] : fb.terms()) M.at(i, e2[0]) = c2;
        }
        rep.certificate_rank = rref(M).rank;
        rep.certificate_ok = rep.certificate_rank == B.size();
    }
    return rep;
}

CnsWitness cns_witness(const Poly& f, const MultiIndex& alpha,
                       const std::vector<PointMultiset>& families) {
    const u32 p = f.prime();
    const std::size_t n = f.arity();
    if (alpha.size() != n || families.size() != n)
        fail("ArityMismatch", "alpha and family count must match the arity of f");
    for (const auto& fam : families) {
        if (fam.prime() != p) fail("CtxMismatch", "family over a different field");
        if (fam.arity() != 1) fail("ArityMismatch", "families must be one-dimensional");
    }
    if (!is_maximal_monomial(f, alpha))
        fail("NotMaximal", "alpha is not a maximal monomial of f");
    for (std::size_t i = 0; i < n; ++i)
        if (families[i].size() < static_cast<u64>(alpha[i]) + 1)
            fail("FamilyTooSmall", "family " + std::to_string(i) + " has size < alpha_i + 1");

    // Product of one-dimensional degree-alpha_i combos, embedded coordinatewise.
    ShiftCombo product{PointMultiset(p, n)};
    for (std::size_t i = 0; i < n; ++i) {
        const ShiftCombo li = construct_1d(families[i], alpha[i]);
        PointMultiset embedded_base(p, n);
        for (const auto& [a, m] : li.base().points()) {
            Point pt(n, 0);
            pt[i] = a[0];
            embedded_base.add_point(std::move(pt), m);
        }
        ShiftCombo embedded{embedded_base};
        for (const auto& [key, c] : li.terms()) {
            Point pt(n, 0);
            pt[i] = key.a[0];
            MultiIndex be(n, 0);
            be[i] = key.beta[0];
            embedded.set_coeff(pt, be, c);
        }
        product = i == 0 ? embedded : multiply(product, embedded);
    }

    const Poly g = apply(product, f);
    if (g.is_zero() || g.degree() != Deg{0})
        fail("InternalContradiction", "product operator did not map f to a nonzero constant");

    for (const auto& [key, c] : product.terms()) {
        const FpElem val = eval(hasse_derivative(f, key.beta), key.a);
        if (!val.is_zero()) return {key.a, key.beta, val};
    }
    fail("InternalContradiction", "no witness among the product terms");
}

namespace {

std::vector<u32> subgroup_with_zero(u32 p, u64 d) {
    // Z_d union {0}: elements of order dividing d, plus 0.
    std::vector<u32> s{0};
    for (u32 x = 1; x < p; ++x)
        if (pow_mod(x, d, p) == 1 % p) s.push_back(x);
    return s;
}

} // namespace

HpZdReport hp_check_zd(const FieldCtx& F, u64 d, std::vector<u32> A, std::vector<u32> B) {
    const u32 p = F.p();
    A = canon_sorted(std::move(A), p);
    B = canon_sorted(std::move(B), p);
    if (A.empty() || B.empty()) fail("EmptyInput", "A and B must be nonempty");
    if (d == 0 || (p - 1) % d != 0 || d == static_cast<u64>(p) - 1)
        fail("HypothesisViolation", "d must properly divide p - 1");

    const std::vector<u32> s = subgroup_with_zero(p, d);
    std::set<u32> allowed(s.begin(), s.end());
    std::set<u32> sum;
    for (u32 a : A)
        for (u32 b : B) {
            const u32 c = add_mod(a, b, p);
            if (!allowed.count(c))
                fail("HypothesisViolation", "A + B not contained in Z_d union {0}");
            sum.insert(c);
        }

    std::set<u32> negA;
    for (u32 a : A) negA.insert(a == 0 ? 0 : p - a);
    u64 inter = 0, uni = negA.size();
    for (u32 b : B) {
        if (negA.count(b))
            ++inter;
        else
            ++uni;
    }

    HpZdReport rep;
    rep.d = d;
    rep.sumset_size = sum.size();
    rep.lhs = static_cast<u64>(A.size()) * B.size();
    rep.rhs_intersect = d + inter;
    rep.rhs_union = d + uni;
    rep.holds_intersect = rep.lhs <= rep.rhs_intersect;
    rep.holds_union = rep.lhs <= rep.rhs_union;
    return rep;
}

HPInstance HPInstance::make(const FieldCtx& F, std::vector<u32> A, std::vector<u32> B, Poly Fz) {
    const u32 p = F.p();
    if (Fz.prime() != p) fail("CtxMismatch", "F over a different field");
    if (Fz.arity() != 1) fail("ArityMismatch", "F must be univariate");
    A = canon_sorted(std::move(A), p);
    B = canon_sorted(std::move(B), p);
    if (A.empty() || B.empty()) fail("EmptyInput", "A and B must be nonempty");
    if (Fz.is_zero()) fail("HypothesisViolation", "F must be nonzero");

    HPInstance inst(F, Fz);
    inst.A = A;
    inst.B = B;

    const auto& lead = *Fz.terms().rbegin();
    if (lead.second != 1) fail("HypothesisViolation", "F must be monic");
    inst.d = static_cast<long>(lead.first[0]);
    if (inst.d < 1) fail("HypothesisViolation", "deg F must be >= 1");
    if (static_cast<u64>(inst.d) >= p) fail("HypothesisViolation", "d < p required");

    Poly R = Fz;
    R.add_term(MultiIndex{static_cast<u32>(inst.d)}, -1);
    if (R.is_zero()) fail("HypothesisViolation", "R = 0: remainder degree undefined");
    inst.r = *R.degree();
    if (inst.r > static_cast<long>(B.size()) - 2)
        fail("HypothesisViolation", "r <= |B| - 2 required");

    Poly zF = Poly::monomial(p, MultiIndex{1}, 1) * Fz;
    for (u32 a : A)
        for (u32 b : B)
            if (!eval(zF, Point{add_mod(a, b, p)}).is_zero())
                fail("HypothesisViolation", "z F(z) must vanish on A + B");

    inst.K = B.size() - 1 - static_cast<u64>(inst.r);

    std::set<u32> negB;
    for (u32 b : B) negB.insert(b == 0 ? 0 : p - b);
    std::vector<u32> in, out;
    for (u32 a : A) (negB.count(a) ? in : out).push_back(a);
    inst.g0 = root_product(p, in);
    inst.g1 = root_product(p, out);
    return inst;
}

HpReport hp_verify(const HPInstance& inst, bool with_certificate) {
    const u32 p = inst.F.p();
    HpReport rep;
    rep.d = inst.d;
    rep.r = inst.r;
    rep.K = inst.K;

    std::set<u32> negA;
    for (u32 a : inst.A) negA.insert(a == 0 ? 0 : p - a);
    u64 inter = 0, uni = negA.size();
    for (u32 b : inst.B) {
        if (negA.count(b))
            ++inter;
        else
            ++uni;
    }
    rep.lhs = inst.A.size() * (inst.B.size() - static_cast<u64>(inst.r));
    rep.rhs_intersect = static_cast<u64>(inst.d - inst.r) + inter;
    rep.rhs_union = static_cast<u64>(inst.d - inst.r) + uni;
    rep.holds_intersect = rep.lhs <= rep.rhs_intersect;
    rep.holds_union = rep.lhs <= rep.rhs_union;

    if (!with_certificate) return rep;
    rep.with_certificate = true;

    for (u64 k = 0; k < rep.K; ++k)
        if (binom_mod_p_raw(static_cast<u64>(inst.d) + rep.K, rep.K - k, p) == 0)
            rep.vanishing_epsilons.push_back(k);

    PointMultiset Bset(p, 1);
    for (u32 b : inst.B) Bset.add_point(Point{b});
    const ShiftCombo l = construct_1d(Bset, inst.B.size() - 1);

    const Poly FK = Poly::monomial(p, MultiIndex{static_cast<u32>(rep.K)}, 1) * inst.Fz;
    Poly lfk = apply(l, FK);
    rep.certificate_degenerate = lfk.is_zero();

    bool ok = true;
    for (u64 step = 0; step < rep.K && ok; ++step) {
        auto [q, r] = divrem_univariate(lfk, inst.g0);
        ok = r.is_zero();
        lfk = q;
    }
    for (u64 step = 0; step < rep.K + 1 && ok; ++step) {
        auto [q, r] = divrem_univariate(lfk, inst.g1);
        ok = r.is_zero();
        lfk = q;
    }
    rep.certificate_ok = ok;
    return rep;
}

CapsetReport capset_verify(const PointMultiset& A) {
    const u32 p = A.prime();
    if (p == 2) fail("EvenCharacteristic", "3-term progressions need odd characteristic");
    const u32 inv2 = fpdetail::inv_mod(2 % p, p);
    const std::size_t n = A.arity();

    CapsetReport rep;
    for (const auto& [x, mx] : A.points()) {
        for (const auto& [z, mz] : A.points()) {
            if (x == z) continue;
            Point y(n);
            for (std::size_t i = 0; i < n; ++i)
                y[i] = mul_mod(add_mod(x[i], z[i], p), inv2, p);
            if (A.contains(y)) {
                rep.ok = false;
                rep.violation = {x, y, z};
                return rep;
            }
        }
    }
    return rep;
}

CapsetBound capset_bound(u64 n, u32 p) {
    if (!is_prime(p)) fail("SchemaError", "p must be prime");
    CapsetBound b;
    b.r = (static_cast<u64>(p) - 1) * n / 3;
    b.N = count_monomials(n, static_cast<u64>(p), b.r);
    b.statement_bound = 3 * b.N;
    b.proof_bound = 2 * b.N;
    return b;
}

ExtremeSupports extreme_supports(const PointMultiset& A, long r,
                                 const std::vector<Point>* order) {
    if (!A.is_plain()) fail("OutOfRange", "extreme_supports needs a plain set");
    const u32 p = A.prime();
    const std::size_t n = A.arity();

    std::vector<Point> pts;
    if (order) {
        pts = *order;
        if (pts.size() != A.point_count())
            fail("OutOfRange", "order must list every point exactly once");
        for (const auto& a : pts)
            if (!A.contains(a)) fail("OutOfRange", "order contains a foreign point");
    } else {
        for (const auto& [a, m] : A.points()) pts.push_back(a);
    }

    // Cells of weight <= r inside the plain-set box [0, p-1]^n.
    std::vector<MultiIndex> cells;
    if (r >= 0) {
        const std::vector<u64> caps(n, p - 1);
        for (u64 d = 0; d <= static_cast<u64>(r); ++d)
            for_each_composition(n, d, caps, [&](const MultiIndex& a) {
                cells.push_back(a);
                return true;
            });
    }

    const auto point_power = [&](const Point& a, const MultiIndex& alpha) {
        u32 t = 1;
        for (std::size_t i = 0; i < n; ++i)
            if (alpha[i] != 0) t = mul_mod(t, pow_mod(a[i], alpha[i], p), p);
        return t;
    };

    // Support is a contiguous range of `pts`; the tested point sits at
    // column `target`.
    const auto admits = [&](std::size_t lo, std::size_t hi, std::size_t target) {
        const std::size_t cnt = hi - lo;
        FpMatrix M(p, cells.size(), cnt);
        for (std::size_t ci = 0; ci < cells.size(); ++ci)
            for (std::size_t j = 0; j < cnt; ++j)
                M.at(ci, j) = point_power(pts[lo + j], cells[ci]);
        for (const auto& v : rref(M).nullspace)
            if (v[target - lo] != 0) return true;
        return false;
    };

    ExtremeSupports out;
    for (std::size_t t = 0; t < pts.size(); ++t) {
        if (admits(0, t + 1, t)) out.s_plus.push_back(pts[t]);
        if (admits(t, pts.size(), t)) out.s_minus.push_back(pts[t]);
    }
    return out;
}

SumFreeReport sumfree_verify(const SumFreeFamily& fam, u64 guard) {
    if (fam.k < 2) fail("OutOfRange", "k must be >= 2");
    const u32 p = fam.p;
    const std::size_t n = fam.n, k = fam.k;
    const std::size_t M = fam.tuples.size();
    for (const auto& tup : fam.tuples) {
        if (tup.size() != k) fail("SchemaError", "tuple with wrong number of colors");
        for (const auto& pt : tup)
            if (pt.size() != n) fail("SchemaError", "point with wrong arity");
    }

    SumFreeReport rep;
    if (M == 0) return rep;

    // Diagonal direction: every tuple must sum to zero.
    for (std::size_t j = 0; j < M; ++j) {
        Point s(n, 0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t c = 0; c < n; ++c) s[c] = add_mod(s[c], fam.tuples[j][i][c] % p, p);
        if (std::any_of(s.begin(), s.end(), [](u32 x) { return x != 0; })) {
            rep.valid = false;
            rep.reason = "diagonal tuple does not sum to zero";
            rep.witness.assign(k, j);
            return rep;
        }
    }

    // Off-diagonal direction, meet-in-the-middle on the first ceil(k/2) colors.
    const std::size_t hL = (k + 1) / 2, hR = k - hL;
    u64 left_count = 1;
    for (std::size_t i = 0; i < hL; ++i) {
        left_count *= M;
        if (left_count > guard) fail("TooLarge", "partial-sum guard exceeded");
    }
    double bits = static_cast<double>(n) * std::log2(static_cast<double>(p));
    if (bits > 62) fail("TooLarge", "point space too large to encode");

    const auto encode = [&](const Point& pt) {
        u64 code = 0;
        for (u32 c : pt) code = code * p + c;
        return code;
    };

    struct Bucket {
        u64 count = 0;
        u64 ex1 = 0, ex2 = 0; // encoded index tuples; ex2 valid iff count >= 2
    };
    const auto encode_idx = [&](const std::vector<std::size_t>& js) {
        u64 code = 0;
        for (std::size_t j : js) code = code * M + j;
        return code;
    };
    const auto decode_idx = [&](u64 code, std::size_t len) {
        std::vector<std::size_t> js(len);
        for (std::size_t i = len; i-- > 0;) {
            js[i] = code % M;
            code /= M;
        }
        return js;
    };

    std::unordered_map<u64, Bucket> sums;
    sums.reserve(static_cast<std::size_t>(std::min<u64>(left_count, 1'000'000)));
    {
        std::vector<std::size_t> js(hL, 0);
        while (true) {
            Point s(n, 0);
            for (std::size_t i = 0; i < hL; ++i)
                for (std::size_t c = 0; c < n; ++c)
                    s[c] = add_mod(s[c], fam.tuples[js[i]][i][c] % p, p);
            Bucket& b = sums[encode(s)];
            const u64 code = encode_idx(js);
            if (b.count == 0)
                b.ex1 = code;
            else if (b.count == 1 && code != b.ex1)
                b.ex2 = code;
            ++b.count;
            std::size_t pos = hL;
            while (pos > 0 && js[pos - 1] + 1 == M) js[--pos] = 0;
            if (pos == 0) break;
            ++js[pos - 1];
        }
    }

    const auto all_equal = [](const std::vector<std::size_t>& js) {
        return std::all_of(js.begin(), js.end(), [&](std::size_t j) { return j == js[0]; });
    };

    std::vector<std::size_t> js(hR, 0);
    while (true) {
        Point s(n, 0);
        for (std::size_t i = 0; i < hR; ++i)
            for (std::size_t c = 0; c < n; ++c)
                s[c] = add_mod(s[c], fam.tuples[js[i]][hL + i][c] % p, p);
        Point need(n);
        for (std::size_t c = 0; c < n; ++c) need[c] = s[c] == 0 ? 0 : p - s[c];
        auto it = sums.find(encode(need));
        if (it != sums.end()) {
            const Bucket& b = it->second;
            const bool right_const = hR == 0 || all_equal(js);
            std::optional<u64> offending;
            if (!right_const) {
                offending = b.ex1;
            } else {
                const u64 diag =
                    hR == 0 ? 0 : encode_idx(std::vector<std::size_t>(hL, js[0]));
                // hR == 0 cannot happen (k >= 2 gives hR >= 1).
                if (b.ex1 != diag)
                    offending = b.ex1;
                else if (b.count >= 2)
                    offending = b.ex2;
            }
            if (offending) {
                rep.valid = false;
                rep.reason = "off-diagonal index tuple sums to zero";
                rep.witness = decode_idx(*offending, hL);
                for (std::size_t j : js) rep.witness.push_back(j);
                return rep;
            }
        }
        if (hR == 0) break;
        std::size_t pos = hR;
        while (pos > 0 && js[pos - 1] + 1 == M) js[--pos] = 0;
        if (pos == 0) break;
        ++js[pos - 1];
    }
    return rep;
}

SumFreeBound sumfree_bound(u64 n, u32 p, u32 k) {
    if (k < 3) fail("OutOfRange", "k must be >= 3");
    SumFreeBound b;
    b.r = (static_cast<u64>(p) - 1) * n / k;
    b.N = count_monomials(n, static_cast<u64>(p), b.r);
    b.kN = k * b.N;
    const GammaResult g = gamma(p, k);
    b.gamma_value = g.value;
    b.gamma_pow_n = 1;
    for (u64 i = 0; i < n; ++i) b.gamma_pow_n *= g.value;
    b.n_le_gamma_pow = BigFloat(b.N.str()) <= b.gamma_pow_n;
    return b;
}

namespace {

u64 checked_space_size(u32 p, std::size_t n, u64 guard) {
    u64 total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > guard / p) fail("TooLarge", "point space too large");
        total *= p;
    }
    return total;
}

u64 encode_point(const Point& a, u32 p) {
    u64 code = 0;
    for (u32 c : a) code = code * p + c;
    return code;
}

} // namespace

KakeyaReport kakeya_verify(const PointMultiset& K) {
    const u32 p = K.prime();
    const std::size_t n = K.arity();
    const u64 space = checked_space_size(p, n, 10'000'000);

    std::vector<bool> member(space, false);
    for (const auto& [a, m] : K.points()) member[encode_point(a, p)] = true;

    KakeyaReport rep;
    rep.is_kakeya = true;

    // Projective representatives: first nonzero coordinate = 1, graded-lex.
    std::vector<Point> dirs;
    const std::vector<u64> caps(n, p - 1);
    for (u64 d = 1; d <= static_cast<u64>(p - 1) * n; ++d)
        for_each_composition(n, d, caps, [&](const MultiIndex& v) {
            for (u32 c : v)
                if (c != 0) {
                    if (c == 1) dirs.push_back(v);
                    break;
                }
            return true;
        });
    rep.direction_count = dirs.size();

    std::vector<u32> stamp(space, 0);
    u32 gen = 0;
    for (const auto& v : dirs) {
        ++gen;
        bool covered = false;
        Point u(n);
        for (u64 code = 0; code < space && !covered; ++code) {
            if (stamp[code] == gen) continue;
            u64 c = code;
            for (std::size_t i = n; i-- > 0;) {
                u[i] = static_cast<u32>(c % p);
                c /= p;
            }
            bool full = true;
            Point x = u;
            for (u32 t = 0; t < p; ++t) {
                const u64 xc = encode_point(x, p);
                stamp[xc] = gen;
                if (!member[xc]) full = false;
                for (std::size_t i = 0; i < n; ++i) x[i] = add_mod(x[i], v[i], p);
            }
            if (full) covered = true;
        }
        if (!covered) {
            rep.is_kakeya = false;
            rep.missing.push_back(v);
        }
    }
    return rep;
}

KakeyaBounds kakeya_bounds(u64 n, u32 q) {
    if (!is_prime(q)) fail("SchemaError", "q must be prime");
    KakeyaBounds b;
    b.binom = big_binomial(n + q - 1, n);
    b.mult_num = 1;
    b.mult_den = 1;
    const BigInt q2 = BigInt(q) * q, den = 2 * BigInt(q) - 1; // coprime
    for (u64 i = 0; i < n; ++i) {
        b.mult_num *= q2;
        b.mult_den *= den;
    }
    b.mult_ceil = (b.mult_num + b.mult_den - 1) / b.mult_den;
    return b;
}

KakeyaSpanReport kakeya_span_check(const PointMultiset& K, u64 d) {
    const u32 q = K.prime();
    const std::size_t n = K.arity();
    if (d > static_cast<u64>(q) - 1) fail("DegreeTooLarge", "d must be <= q - 1");
    if (!kakeya_verify(K).is_kakeya) fail("NotKakeya", "K is not a Kakeya set");

    const DeltaBasis delta = delta_space(K, d);
    KakeyaSpanReport rep;
    rep.delta_dim = delta.basis.size();

    RowSpanBasis span(q, delta.cells.size());
    for (const auto& b : delta.basis) {
        std::vector<u32> row(delta.cells.size(), 0);
        for (std::size_t j = 0; j < delta.cells.size(); ++j) row[j] = b.at(delta.cells[j]);
        span.add(std::move(row));
    }
    rep.delta_contains_all = true;
    for (std::size_t j = 0; j < delta.cells.size(); ++j) {
        std::vector<u32> unit(delta.cells.size(), 0);
        unit[j] = 1;
        if (!span.contains(std::move(unit))) {
            rep.delta_contains_all = false;
            break;
        }
    }

    // Independent check of the span claim: the powers (v^alpha)_{|alpha|=d}
    // over all nonzero v span the full weight-d coordinate space.
    rep.claim_expected = static_cast<std::size_t>(big_binomial(n + d - 1, n - 1));
    RowSpanBasis powers(q, delta.cells.size());
    const u64 space = checked_space_size(q, n, 10'000'000);
    for (u64 code = 1; code < space && powers.rank() < rep.claim_expected; ++code) {
        Point v(n);
        u64 c = code;
        for (std::size_t i = n; i-- > 0;) {
            v[i] = static_cast<u32>(c % q);
            c /= q;
        }
        std::vector<u32> row(delta.cells.size());
        for (std::size_t j = 0; j < delta.cells.size(); ++j) {
            u32 t = 1;
            for (std::size_t i = 0; i < n; ++i)
                if (delta.cells[j][i] != 0) t = mul_mod(t, pow_mod(v[i], delta.cells[j][i], q), q);
            row[j] = t;
        }
        powers.add(std::move(row));
    }
    rep.claim_rank = powers.rank();
    rep.claim_dim_ok = rep.claim_rank == rep.claim_expected;
    return rep;
}

KakeyaMultSpanReport kakeya_mult_span_check(u32 q, std::size_t n, u64 l_mult, u64 cell_guard) {
    if (!is_prime(q)) fail("SchemaError", "q must be prime");
    if (n < 2) fail("OutOfRange", "n must be >= 2");
    if (l_mult == 0 || l_mult % q != 0)
        fail("OutOfRange", "l must be a positive multiple of q");

    KakeyaMultSpanReport rep;
    rep.l = l_mult;
    rep.m = 2 * l_mult - l_mult / q;
    rep.d = l_mult * q - 1;

    // Full column rank of (H^(beta)(h^alpha)) over rows (h, beta) in
    // (F^(n-1), l+1), columns |alpha| <= d.
    const std::size_t nm1 = n - 1;
    std::vector<MultiIndex> cols;
    {
        const std::vector<u64> caps(nm1, rep.d);
        for (u64 w = 0; w <= rep.d; ++w)
            for_each_composition(nm1, w, caps, [&](const MultiIndex& a) {
                cols.push_back(a);
                return true;
            });
    }
    const u64 space = checked_space_size(q, nm1, 10'000'000);
    std::vector<MultiIndex> betas;
    {
        const std::vector<u64> caps(nm1, l_mult);
        for (u64 w = 0; w <= l_mult; ++w)
            for_each_composition(nm1, w, caps, [&](const MultiIndex& b) {
                betas.push_back(b);
                return true;
            });
    }
    rep.rows = static_cast<std::size_t>(space) * betas.size();
    rep.cols = cols.size();
    if (static_cast<u64>(rep.rows) * rep.cols > cell_guard)
        fail("GuardTripped", "matrix " + std::to_string(rep.rows) + "x" +
                                 std::to_string(rep.cols) + " exceeds the guard");

    RowSpanBasis span(q, cols.size());
    for (u64 code = 0; code < space && span.rank() < cols.size(); ++code) {
        Point h(nm1);
        u64 c = code;
        for (std::size_t i = nm1; i-- > 0;) {
            h[i] = static_cast<u32>(c % q);
            c /= q;
        }
        for (const auto& beta : betas) {
            std::vector<u32> row(cols.size());
            for (std::size_t j = 0; j < cols.size(); ++j) {
                // H^(beta)(h^alpha) = binom(alpha, beta) h^(alpha - beta)
                u64 t = 1;
                for (std::size_t i = 0; i < nm1 && t; ++i) {
                    if (beta[i] > cols[j][i]) {
                        t = 0;
                        break;
                    }
                    t = t * binom_mod_p_raw(cols[j][i], beta[i], q) % q;
                    const u32 e = cols[j][i] - beta[i];
                    if (t && e) t = t * pow_mod(h[i], e, q) % q;
                }
                row[j] = static_cast<u32>(t);
            }
            span.add(std::move(row));
            if (span.rank() == cols.size()) break;
        }
    }
    rep.full_column_rank = span.rank() == cols.size();

    // Multiset delta space of (F_q^n, m) at weight d contains every H^(alpha).
    PointMultiset full(q, n);
    {
        const u64 total = checked_space_size(q, n, 1'000'000);
        for (u64 code = 0; code < total; ++code) {
            Point a(n);
            u64 c = code;
            for (std::size_t i = n; i-- > 0;) {
                a[i] = static_cast<u32>(c % q);
                c /= q;
            }
            full.add_point(std::move(a), static_cast<u32>(rep.m));
        }
    }
    const DeltaBasis delta = delta_space(full, rep.d);
    RowSpanBasis dspan(q, delta.cells.size());
    for (const auto& b : delta.basis) {
        std::vector<u32> row(delta.cells.size(), 0);
        for (std::size_t j = 0; j < delta.cells.size(); ++j) row[j] = b.at(delta.cells[j]);
        dspan.add(std::move(row));
    }
    rep.delta_contains_all = true;
    // Every weight-d multi-index lies inside the certified box here, so the
    // cells enumerate exactly the |alpha| = d monomial derivatives.
    const BigInt expected = big_binomial(rep.d + n - 1, n - 1);
    if (BigInt(delta.cells.size()) != expected) {
        rep.delta_contains_all = false;
        return rep;
    }
    for (std::size_t j = 0; j < delta.cells.size(); ++j) {
        std::vector<u32> unit(delta.cells.size(), 0);
        unit[j] = 1;
        if (!dspan.contains(std::move(unit))) {
            rep.delta_contains_all = false;
            break;
        }
    }
    return rep;
}

} // namespace shiftcalc::apps
