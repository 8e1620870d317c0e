#include "shiftcalc/shiftop.hpp"

#include <algorithm>
#include <climits>

namespace shiftcalc {

using fpdetail::add_mod;
using fpdetail::mul_mod;
using fpdetail::pow_mod;
using fpdetail::sub_mod;

namespace {

constexpr u64 kScanCellGuard = 50'000'000;   // degree / rank sweeps
constexpr u64 kMatrixCellGuard = 50'000'000; // constraint matrices

// prod_i binom(alpha_i, beta_i) a_i^(alpha_i - beta_i), the expansion
// coefficient of a single multishift generator at H^(alpha).
u32 key_coefficient(const ComboKey& k, const MultiIndex& alpha, u32 p) {
    u64 t = 1;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (k.beta[i] > alpha[i]) return 0;
        t = t * binom_mod_p_raw(alpha[i], k.beta[i], p) % p;
        if (t == 0) return 0;
        const u32 e = alpha[i] - k.beta[i];
        if (e != 0) {
            t = t * pow_mod(k.a[i] % p, e, p) % p; // a^0 = 1, including 0^0
            if (t == 0) return 0;
        }
    }
    return static_cast<u32>(t);
}

std::vector<u64> coord_caps(std::size_t n, u64 bound) { return std::vector<u64>(n, bound); }

} // namespace

void PointMultiset::add_point(Point a, u32 mult) {
    if (a.size() != n_) fail("ArityMismatch", "point arity");
    if (mult == 0) fail("SchemaError", "multiplicity must be >= 1");
    for (u32& c : a) c %= p_;
    auto [it, fresh] = pts_.try_emplace(std::move(a), mult);
    if (!fresh) fail("SchemaError", "duplicate point in multiset");
}

u64 PointMultiset::size() const {
    u64 s = 0;
    for (const auto& [a, m] : pts_) s += m;
    return s;
}

bool PointMultiset::is_plain() const {
    return std::all_of(pts_.begin(), pts_.end(), [](const auto& kv) { return kv.second == 1; });
}

void ShiftCombo::check_key(const Point& a, const MultiIndex& beta) const {
    if (a.size() != arity() || beta.size() != arity())
        fail("ArityMismatch", "combo key arity");
    const u32 m = base_.mult(a);
    if (m == 0) fail("OutOfRange", "combo point not in the base multiset");
    if (weight(beta) + 1 > m)
        fail("OutOfRange", "derivative index weight exceeds multiplicity - 1");
}

void ShiftCombo::set_coeff(const Point& a, const MultiIndex& beta, i64 c) {
    check_key(a, beta);
    Point ac = a;
    for (u32& x : ac) x %= prime();
    const u32 cv = fpdetail::canon(c, prime());
    ComboKey k{std::move(ac), beta};
    if (cv == 0)
        c_.erase(k);
    else
        c_[std::move(k)] = cv;
}

void ShiftCombo::add_coeff(const Point& a, const MultiIndex& beta, i64 c) {
    const u32 cur = coeff(a, beta);
    set_coeff(a, beta, static_cast<i64>(cur) + c);
}

u32 ShiftCombo::coeff(const Point& a, const MultiIndex& beta) const {
    Point ac = a;
    for (u32& x : ac) x %= prime();
    auto it = c_.find(ComboKey{std::move(ac), beta});
    return it == c_.end() ? 0 : it->second;
}

ShiftCombo ShiftCombo::scaled(i64 c) const {
    ShiftCombo r(base_);
    const u32 cv = fpdetail::canon(c, prime());
    for (const auto& [k, v] : c_) r.set_coeff(k.a, k.beta, mul_mod(v, cv, prime()));
    return r;
}

ShiftCombo operator-(const ShiftCombo& x, const ShiftCombo& y) {
    if (!(x.base_ == y.base_)) fail("CtxMismatch", "combos over different multisets");
    ShiftCombo r = x;
    for (const auto& [k, v] : y.c_) r.add_coeff(k.a, k.beta, -static_cast<i64>(v));
    return r;
}

std::vector<ComboKey> ShiftCombo::all_keys() const {
    std::vector<ComboKey> keys;
    const std::size_t n = arity();
    for (const auto& [a, m] : base_.points()) {
        for_each_weight_upto(n, m - 1, [&](const MultiIndex& beta) {
            keys.push_back(ComboKey{a, beta});
            return true;
        });
    }
    return keys;
}

CertWindow certified_window(u32 p, u64 beta_max) {
    unsigned __int128 pl = 1;
    while (pl <= beta_max) pl *= p;
    const unsigned __int128 per = pl * (p - 1);
    if (per > (u64{1} << 62)) fail("GuardTripped", "certified window exceeds 2^62");
    return {beta_max, static_cast<u64>(per), beta_max + static_cast<u64>(per)};
}

CertWindow certified_window(const PointMultiset& A) {
    u64 beta_max = 0;
    for (const auto& [a, m] : A.points()) beta_max = std::max<u64>(beta_max, m - 1);
    return certified_window(A.prime(), beta_max);
}

u32 expansion_coefficient(const ShiftCombo& l, const MultiIndex& alpha) {
    if (alpha.size() != l.arity()) fail("ArityMismatch", "alpha arity");
    const u32 p = l.prime();
    u32 acc = 0;
    for (const auto& [k, c] : l.terms())
        acc = add_mod(acc, mul_mod(c, key_coefficient(k, alpha, p), p), p);
    return acc;
}

DerivExpansion expand(const ShiftCombo& l, u64 W) {
    const std::size_t n = l.arity();
    DerivExpansion out{l.prime(), n, W, {}};
    u64 visited = 0;
    for_each_weight_upto(n, W, [&](const MultiIndex& alpha) {
        if (++visited > kScanCellGuard) fail("GuardTripped", "expansion window too large");
        const u32 c = expansion_coefficient(l, alpha);
        if (c != 0) out.coeffs.emplace(alpha, c);
        return true;
    });
    return out;
}

Poly apply(const ShiftCombo& l, const Poly& f) {
    if (f.prime() != l.prime()) fail("CtxMismatch", "combo and polynomial fields differ");
    if (f.arity() != l.arity()) fail("ArityMismatch", "combo and polynomial arity differ");
    Poly out(f.prime(), f.arity());
    for (const auto& [k, c] : l.terms())
        out = out + shift_poly(hasse_derivative(f, k.beta), k.a).scaled(c);
    return out;
}

DegreeResult degree_and_leading(const ShiftCombo& l, std::optional<u64> weight_bound) {
    if (l.is_zero()) fail("EmptyCombo", "degree of the zero combination");
    const std::size_t n = l.arity();
    const CertWindow w = certified_window(l.base());
    const u64 cert_total = w.coord_bound * n;
    const u64 dmax = weight_bound ? std::min(*weight_bound, cert_total) : cert_total;
    const auto caps = coord_caps(n, w.coord_bound);

    u64 visited = 0;
    for (u64 d = 0; d <= dmax; ++d) {
        DerivExpansion lead{l.prime(), n, d, {}};
        for_each_composition(n, d, caps, [&](const MultiIndex& alpha) {
            if (++visited > kScanCellGuard) fail("GuardTripped", "degree scan too large");
            const u32 c = expansion_coefficient(l, alpha);
            if (c != 0) lead.coeffs.emplace(alpha, c);
            return true;
        });
        if (!lead.coeffs.empty()) {
            DegreeResult r;
            r.deg = static_cast<long>(d);
            r.leading = std::move(lead);
            return r;
        }
    }
    if (weight_bound && *weight_bound < cert_total) {
        DegreeResult r;
        r.exhausted = true;
        r.bound = *weight_bound;
        return r;
    }
    fail("InternalContradiction", "nonzero combination expanded to zero in its certified window");
}

ShiftCombo construct_1d(const PointMultiset& A, u64 d) {
    if (A.arity() != 1) fail("ArityMismatch", "construct_1d needs arity 1");
    const u64 N = A.size();
    if (d >= N) fail("OutOfRange", "target degree exceeds multiset size - 1");
    const u32 p = A.prime();

    ShiftCombo probe{A};
    const std::vector<ComboKey> keys = probe.all_keys();
    const std::size_t D = keys.size(); // == N when n = 1

    FpMatrix M(p, static_cast<std::size_t>(d), D);
    for (u64 k = 0; k < d; ++k)
        for (std::size_t j = 0; j < D; ++j)
            M.at(static_cast<std::size_t>(k), j) =
                key_coefficient(keys[j], MultiIndex{static_cast<u32>(k)}, p);
    const RrefResult R = rref(M);

    const MultiIndex target{static_cast<u32>(d)};
    for (const auto& v : R.nullspace) {
        u32 cd = 0;
        for (std::size_t j = 0; j < D; ++j)
            cd = add_mod(cd, mul_mod(v[j], key_coefficient(keys[j], target, p), p), p);
        if (cd == 0) continue;
        ShiftCombo out{A};
        for (std::size_t j = 0; j < D; ++j)
            if (v[j] != 0) out.set_coeff(keys[j].a, keys[j].beta, v[j]);
        return out;
    }
    fail("InternalContradiction", "no degree-d combination found (contradicts the degree lemma)");
}

ShiftCombo reduce(const ShiftCombo& l, std::size_t i) {
    if (i >= l.arity()) fail("OutOfRange", "coordinate index");
    ShiftCombo out{l.base()};
    for (const auto& [k, c] : l.terms()) {
        // c_{a,beta} contributes a_i * c at beta and c at beta - e_i.
        out.add_coeff(k.a, k.beta, mul_mod(c, k.a[i], l.prime()));
        if (k.beta[i] > 0) {
            MultiIndex down = k.beta;
            --down[i];
            out.add_coeff(k.a, down, c);
        }
    }
    return out;
}

ShiftCombo annihilate_hyperplane(const ShiftCombo& l, std::size_t i, FpElem eps) {
    if (eps.p != l.prime()) fail("CtxMismatch", "epsilon from a different field");
    return reduce(l, i) - l.scaled(eps.v);
}

ShiftCombo multiply(const ShiftCombo& l1, const ShiftCombo& l2) {
    if (l1.prime() != l2.prime()) fail("CtxMismatch", "combos over different fields");
    if (l1.arity() != l2.arity()) fail("ArityMismatch", "combos of different arity");
    const u32 p = l1.prime();
    const std::size_t n = l1.arity();

    std::map<ComboKey, u32, ComboKeyLess> acc;
    for (const auto& [k1, c1] : l1.terms()) {
        for (const auto& [k2, c2] : l2.terms()) {
            u32 coeff = mul_mod(c1, c2, p);
            Point s(n);
            MultiIndex delta(n);
            for (std::size_t i = 0; i < n; ++i) {
                s[i] = add_mod(k1.a[i], k2.a[i], p);
                delta[i] = k1.beta[i] + k2.beta[i];
                coeff = mul_mod(coeff, binom_mod_p_raw(delta[i], k1.beta[i], p), p);
            }
            if (coeff == 0) continue;
            ComboKey k{std::move(s), std::move(delta)};
            auto [it, fresh] = acc.try_emplace(std::move(k), coeff);
            if (!fresh) {
                it->second = add_mod(it->second, coeff, p);
                if (it->second == 0) acc.erase(it);
            }
        }
    }

    // Coarsest base supported by the surviving keys.
    PointMultiset base(p, n);
    std::map<Point, u64, GradedLex> top;
    for (const auto& [k, c] : acc) {
        auto [it, fresh] = top.try_emplace(k.a, weight(k.beta));
        if (!fresh) it->second = std::max(it->second, weight(k.beta));
    }
    for (const auto& [a, w] : top) base.add_point(a, static_cast<u32>(w + 1));

    ShiftCombo out{base};
    for (const auto& [k, c] : acc) out.set_coeff(k.a, k.beta, c);
    return out;
}

DeltaBasis delta_space(const PointMultiset& A, u64 d, std::optional<u64> coord_bound_override) {
    const u32 p = A.prime();
    const std::size_t n = A.arity();
    const CertWindow w = certified_window(A);
    // Cells beyond the certified box carry no new information, so an
    // oversized override is clamped rather than padded with zero columns.
    const u64 bound = coord_bound_override ? std::min(*coord_bound_override, w.coord_bound)
                                           : w.coord_bound;
    const auto caps = coord_caps(n, bound);

    ShiftCombo probe{A};
    const std::vector<ComboKey> keys = probe.all_keys();
    const std::size_t D = keys.size();

    std::vector<MultiIndex> lt_cells;
    for (u64 k = 0; k < d; ++k)
        for_each_composition(n, k, caps, [&](const MultiIndex& a) {
            lt_cells.push_back(a);
            return true;
        });
    if (lt_cells.size() * D > kMatrixCellGuard)
        fail("GuardTripped", "delta-space constraint matrix too large");

    FpMatrix M(p, lt_cells.size(), D);
    for (std::size_t r = 0; r < lt_cells.size(); ++r)
        for (std::size_t c = 0; c < D; ++c) M.at(r, c) = key_coefficient(keys[c], lt_cells[r], p);
    const RrefResult R = rref(M);

    DeltaBasis out;
    out.d = static_cast<long>(d);
    out.certified = bound == w.coord_bound;
    for_each_composition(n, d, caps, [&](const MultiIndex& a) {
        out.cells.push_back(a);
        return true;
    });
    if (out.cells.empty()) return out;

    RowSpanBasis span(p, out.cells.size());
    for (const auto& v : R.nullspace) {
        std::vector<u32> img(out.cells.size(), 0);
        for (std::size_t j = 0; j < out.cells.size(); ++j) {
            u32 acc = 0;
            for (std::size_t k = 0; k < D; ++k) {
                if (v[k] == 0) continue;
                acc = add_mod(acc, mul_mod(v[k], key_coefficient(keys[k], out.cells[j], p), p), p);
            }
            img[j] = acc;
        }
        span.add(std::move(img));
    }
    for (const auto& row : span.echelon_rows()) {
        DerivExpansion e{p, n, d, {}};
        for (std::size_t j = 0; j < out.cells.size(); ++j)
            if (row[j] != 0) e.coeffs.emplace(out.cells[j], row[j]);
        out.basis.push_back(std::move(e));
    }
    return out;
}

long deg_set(const PointMultiset& A, std::optional<u64> weight_bound) {
    if (A.empty()) fail("EmptyInput", "degree of the empty multiset");
    const u32 p = A.prime();
    const std::size_t n = A.arity();
    const CertWindow w = certified_window(A);
    const auto caps = coord_caps(n, w.coord_bound);

    ShiftCombo probe{A};
    const std::vector<ComboKey> keys = probe.all_keys();
    const std::size_t D = keys.size();

    RowSpanBasis basis(p, D);
    long last_increment = -1;
    u64 visited = 0;
    const u64 cert_total = w.coord_bound * n;
    const u64 dmax = weight_bound ? std::min(*weight_bound, cert_total) : cert_total;
    for (u64 d = 0; d <= dmax && basis.rank() < D; ++d) {
        bool grew = false;
        for_each_composition(n, d, caps, [&](const MultiIndex& alpha) {
            if (++visited > kScanCellGuard) fail("GuardTripped", "degree sweep too large");
            std::vector<u32> row(D);
            for (std::size_t k = 0; k < D; ++k) row[k] = key_coefficient(keys[k], alpha, p);
            if (basis.add(std::move(row))) grew = true;
            return basis.rank() < D;
        });
        if (grew) last_increment = static_cast<long>(d);
    }
    if (basis.rank() != D) {
        // Full rank is what certifies that no higher weight can increment.
        if (weight_bound && *weight_bound < cert_total)
            fail("BoundExhausted", "degree sweep stopped at weight " + std::to_string(dmax) +
                                       " before certification");
        fail("InternalContradiction", "expansion matrix rank below the multiset dimension");
    }
    return last_increment;
}

PointMultiset affine_transform(const PointMultiset& A, const FpMatrix& L, const Point& b) {
    const u32 p = A.prime();
    const std::size_t n = A.arity();
    if (L.p() != p) fail("CtxMismatch", "transform over a different field");
    if (L.rows() != n || L.cols() != n) fail("DimensionMismatch", "transform shape");
    if (b.size() != n) fail("DimensionMismatch", "translation arity");
    if (rref(L).rank != n) fail("SingularMatrix", "affine transform is not invertible");

    PointMultiset out(p, n);
    for (const auto& [a, m] : A.points()) {
        Point y(n);
        for (std::size_t r = 0; r < n; ++r) {
            u32 acc = b[r] % p;
            for (std::size_t c = 0; c < n; ++c)
                acc = add_mod(acc, mul_mod(L.at(r, c), a[c], p), p);
            y[r] = acc;
        }
        out.add_point(std::move(y), m);
    }
    return out;
}

namespace {

long ub_recursive(const std::vector<Point>& pts, const std::vector<std::size_t>& order) {
    if (order.size() == 1) {
        std::vector<u32> vals;
        for (const auto& a : pts) vals.push_back(a[order[0]]);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        return static_cast<long>(vals.size()) - 1;
    }
    const std::size_t j = order.back();
    std::vector<std::size_t> rest(order.begin(), order.end() - 1);
    std::map<u32, std::vector<Point>> slices;
    for (const auto& a : pts) slices[a[j]].push_back(a);

    std::vector<long> slice_ubs;
    for (const auto& [val, slice] : slices) slice_ubs.push_back(ub_recursive(slice, rest));

    const long kmax = *std::max_element(slice_ubs.begin(), slice_ubs.end());
    long best = LONG_MIN;
    for (long k = 0; k <= kmax; ++k) {
        long count = static_cast<long>(
            std::count_if(slice_ubs.begin(), slice_ubs.end(), [&](long u) { return u >= k; }));
        best = std::max(best, count - 1 + k);
    }
    return best;
}

} // namespace

long deg_upper_bound(const PointMultiset& A, const std::vector<std::size_t>& order) {
    if (A.empty()) fail("EmptyInput", "bound on the empty set");
    if (!A.is_plain()) fail("OutOfRange", "deg_upper_bound needs a plain set");
    const std::size_t n = A.arity();
    std::vector<bool> seen(n, false);
    if (order.size() != n) fail("OutOfRange", "order must be a permutation of the coordinates");
    for (std::size_t i : order) {
        if (i >= n || seen[i]) fail("OutOfRange", "order must be a permutation of the coordinates");
        seen[i] = true;
    }
    std::vector<Point> pts;
    for (const auto& [a, m] : A.points()) pts.push_back(a);
    return ub_recursive(pts, order);
}

long deg_lower_bound(const PointMultiset& A, const std::vector<std::size_t>& coords) {
    if (A.empty()) fail("EmptyInput", "bound on the empty set");
    if (!A.is_plain()) fail("OutOfRange", "deg_lower_bound needs a plain set");
    const u32 p = A.prime();
    const std::size_t n = A.arity();
    std::vector<bool> in_w(n, false);
    for (std::size_t i : coords) {
        if (i >= n || in_w[i]) fail("OutOfRange", "coordinate subset invalid");
        in_w[i] = true;
    }

    u64 count = 0;
    for (const auto& [a, m] : A.points()) {
        bool inside = true;
        for (std::size_t i = 0; i < n; ++i)
            if (!in_w[i] && a[i] != 0) {
                inside = false;
                break;
            }
        if (inside) ++count;
    }
    if (count <= 1) return 0;

    // Largest r with N(dim W, p, r) < |A cap W|, clamped counting.
    const std::size_t m = coords.size();
    long best = 0;
    for (u64 r = 0;; ++r) {
        // N(m, p, r) with saturation at `count`.
        std::vector<u64> dp(static_cast<std::size_t>(r) + 1, 0);
        dp[0] = 1;
        for (std::size_t v = 0; v < m; ++v) {
            std::vector<u64> nx(dp.size(), 0);
            for (std::size_t s = 0; s < dp.size(); ++s) {
                if (dp[s] == 0) continue;
                for (u64 j = 0; j < p && s + j < nx.size(); ++j)
                    nx[s + j] = std::min<u64>(nx[s + j] + dp[s], count + 1);
            }
            dp = std::move(nx);
        }
        u64 N = 0;
        for (u64 x : dp) N = std::min<u64>(N + x, count + 1);
        if (N < count)
            best = static_cast<long>(r) + 1;
        else
            break;
    }
    return best;
}

} // namespace shiftcalc
