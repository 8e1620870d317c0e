#include "shiftcalc/poly.hpp"

namespace shiftcalc {

using fpdetail::mul_mod;
using fpdetail::pow_mod;

Poly operator+(const Poly& f, const Poly& g) {
    Poly::check_compat(f, g);
    Poly r = f;
    for (const auto& [e, c] : g.terms_) r.add_term(e, c);
    return r;
}

Poly operator-(const Poly& f, const Poly& g) {
    Poly::check_compat(f, g);
    Poly r = f;
    for (const auto& [e, c] : g.terms_) r.add_term(e, -static_cast<i64>(c));
    return r;
}

Poly operator*(const Poly& f, const Poly& g) {
    Poly::check_compat(f, g);
    Poly r(f.p_, f.n_);
    for (const auto& [ef, cf] : f.terms_)
        for (const auto& [eg, cg] : g.terms_)
            r.add_term(add(ef, eg), mul_mod(cf, cg, f.p_));
    return r;
}

Poly Poly::scaled(i64 c) const {
    Poly r(p_, n_);
    const u32 cv = fpdetail::canon(c, p_);
    for (const auto& [e, coeff] : terms_) r.add_term(e, mul_mod(coeff, cv, p_));
    return r;
}

FpElem eval(const Poly& f, const Point& x) {
    if (x.size() != f.arity()) fail("ArityMismatch", "evaluation point arity");
    const u32 p = f.prime();
    u32 acc = 0;
    for (const auto& [e, c] : f.terms()) {
        u32 t = c;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (e[i] != 0) t = mul_mod(t, pow_mod(x[i] % p, e[i], p), p);
        acc = fpdetail::add_mod(acc, t, p);
    }
    return {acc, p};
}

Poly hasse_derivative(const Poly& f, const MultiIndex& alpha) {
    if (alpha.size() != f.arity()) fail("ArityMismatch", "derivative index arity");
    const u32 p = f.prime();
    Poly r(p, f.arity());
    for (const auto& [e, c] : f.terms()) {
        if (!leq(alpha, e)) continue;
        u32 coeff = c;
        MultiIndex out(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            coeff = mul_mod(coeff, binom_mod_p_raw(e[i], alpha[i], p), p);
            out[i] = e[i] - alpha[i];
        }
        r.add_term(std::move(out), coeff);
    }
    return r;
}

Poly ordinary_derivative(const Poly& f, const MultiIndex& alpha) {
    if (alpha.size() != f.arity()) fail("ArityMismatch", "derivative index arity");
    const u32 p = f.prime();
    Poly r(p, f.arity());
    for (const auto& [e, c] : f.terms()) {
        if (!leq(alpha, e)) continue;
        // d^alpha X^e = e!/(e-alpha)! X^(e-alpha), as a falling factorial.
        u32 coeff = c;
        MultiIndex out(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            for (u32 j = 0; j < alpha[i]; ++j)
                coeff = mul_mod(coeff, (e[i] - j) % p, p);
            out[i] = e[i] - alpha[i];
        }
        r.add_term(std::move(out), coeff);
    }
    return r;
}

Poly shift_poly(const Poly& f, const Point& h) {
    if (h.size() != f.arity()) fail("ArityMismatch", "shift vector arity");
    const u32 p = f.prime();
    const std::size_t n = f.arity();
    Poly r(p, n);
    for (const auto& [e, c] : f.terms()) {
        // Expand prod_i (X_i + h_i)^{e_i} by an odometer over j <= e.
        MultiIndex j(n, 0);
        while (true) {
            u32 coeff = c;
            for (std::size_t i = 0; i < n; ++i) {
                coeff = mul_mod(coeff, binom_mod_p_raw(e[i], j[i], p), p);
                if (e[i] != j[i]) coeff = mul_mod(coeff, pow_mod(h[i] % p, e[i] - j[i], p), p);
            }
            r.add_term(j, coeff);
            std::size_t k = 0;
            while (k < n && j[k] == e[k]) j[k++] = 0;
            if (k == n) break;
            ++j[k];
        }
    }
    return r;
}

std::pair<Poly, Poly> divrem_univariate(const Poly& f, const Poly& g) {
    if (f.arity() != 1 || g.arity() != 1) fail("ArityMismatch", "univariate division");
    if (f.prime() != g.prime()) fail("CtxMismatch", "division over different fields");
    if (g.is_zero()) fail("DivisionByZeroPoly", "division by the zero polynomial");
    const u32 p = f.prime();

    const auto& glead = *g.terms().rbegin();
    const u32 gdeg = glead.first[0];
    const u32 glead_inv = fpdetail::inv_mod(glead.second, p);

    Poly q(p, 1), r = f;
    while (!r.is_zero()) {
        const auto& rlead = *r.terms().rbegin();
        const u32 rdeg = rlead.first[0];
        if (rdeg < gdeg) break;
        const u32 factor = mul_mod(rlead.second, glead_inv, p);
        const MultiIndex shift{rdeg - gdeg};
        q.add_term(shift, factor);
        for (const auto& [e, c] : g.terms())
            r.add_term(MultiIndex{e[0] + shift[0]}, -static_cast<i64>(mul_mod(c, factor, p)));
    }
    return {q, r};
}

bool is_maximal_monomial(const Poly& f, const MultiIndex& alpha) {
    if (alpha.size() != f.arity()) fail("ArityMismatch", "monomial index arity");
    if (f.coeff(alpha) == 0) return false;
    for (const auto& [e, c] : f.terms())
        if (e != alpha && leq(alpha, e)) return false;
    return true;
}

DirectionalFrame::DirectionalFrame(u32 p, std::size_t n, std::vector<Point> vectors)
    : p_(p), n_(n), vectors_(std::move(vectors)) {
    for (const auto& v : vectors_)
        if (v.size() != n_) fail("ArityMismatch", "frame vector arity");
    FpMatrix M(p_, vectors_.size(), n_);
    for (std::size_t r = 0; r < vectors_.size(); ++r)
        for (std::size_t c = 0; c < n_; ++c) M.at(r, c) = vectors_[r][c] % p_;
    if (rref(M).rank != vectors_.size())
        fail("DependentFrame", "frame vectors are linearly dependent");
}

Poly directional_hasse(const Poly& f, const DirectionalFrame& I, const MultiIndex& alpha) {
    if (f.prime() != I.prime()) fail("CtxMismatch", "frame over a different field");
    if (f.arity() != I.arity()) fail("ArityMismatch", "frame arity");
    if (alpha.size() != I.size()) fail("ArityMismatch", "alpha length vs frame size");
    const u32 p = f.prime();
    const std::size_t n = f.arity(), k = I.size();

    // Substitute X_i -> X_i + sum_j v_{j,i} Z_j in an (n+k)-variate ring
    // (X first, Z last), then read off the Z^alpha slice.
    std::vector<Poly> lin;
    lin.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Poly li(p, n + k);
        MultiIndex xe(n + k, 0);
        xe[i] = 1;
        li.add_term(xe, 1);
        for (std::size_t j = 0; j < k; ++j) {
            MultiIndex ze(n + k, 0);
            ze[n + j] = 1;
            li.add_term(ze, I.vectors()[j][i] % p);
        }
        lin.push_back(std::move(li));
    }

    Poly sub(p, n + k);
    for (const auto& [e, c] : f.terms()) {
        Poly t = Poly::constant(p, n + k, c);
        for (std::size_t i = 0; i < n; ++i)
            for (u32 rep = 0; rep < e[i]; ++rep) t = t * lin[i];
        sub = sub + t;
    }

    Poly out(p, n);
    for (const auto& [e, c] : sub.terms()) {
        bool match = true;
        for (std::size_t j = 0; j < k; ++j)
            if (e[n + j] != alpha[j]) {
                match = false;
                break;
            }
        if (!match) continue;
        out.add_term(MultiIndex(e.begin(), e.begin() + static_cast<long>(n)), c);
    }
    return out;
}

} // namespace shiftcalc
