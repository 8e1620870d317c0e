#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "shiftcalc/field.hpp"
#include "shiftcalc/matrix.hpp"
#include "shiftcalc/multi_index.hpp"

namespace shiftcalc {

// Total degree; std::nullopt is the -infinity sentinel for the zero
// polynomial (kept distinct from every integer on purpose).
using Deg = std::optional<long>;

inline bool deg_less(Deg a, Deg b) {
    if (!a) return static_cast<bool>(b); // -inf < anything but -inf
    if (!b) return false;
    return *a < *b;
}

// Sparse multivariate polynomial over F_p. Zero coefficients are never
// stored; term iteration is graded-lex.
class Poly {
public:
    Poly(u32 p, std::size_t n) : p_(p), n_(n) {}

    static Poly zero(u32 p, std::size_t n) { return Poly(p, n); }
    static Poly constant(u32 p, std::size_t n, i64 c) {
        Poly f(p, n);
        f.add_term(MultiIndex(n, 0), c);
        return f;
    }
    static Poly monomial(u32 p, MultiIndex exps, i64 c) {
        Poly f(p, exps.size());
        f.add_term(std::move(exps), c);
        return f;
    }

    u32 prime() const { return p_; }
    std::size_t arity() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    const std::map<MultiIndex, u32, GradedLex>& terms() const { return terms_; }

    u32 coeff(const MultiIndex& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? 0 : it->second;
    }

    // Adds c * X^e (any residue; canonicalized, zero results pruned).
    void add_term(MultiIndex e, i64 c) {
        if (e.size() != n_) fail("ArityMismatch", "exponent arity");
        const u32 cv = fpdetail::canon(c, p_);
        if (cv == 0 && terms_.find(e) == terms_.end()) return;
        auto [it, fresh] = terms_.try_emplace(std::move(e), cv);
        if (!fresh) {
            it->second = fpdetail::add_mod(it->second, cv, p_);
            if (it->second == 0) terms_.erase(it);
        } else if (cv == 0) {
            terms_.erase(it);
        }
    }

    Deg degree() const {
        if (terms_.empty()) return std::nullopt;
        // Graded-lex map: the last key has maximal weight.
        return static_cast<long>(weight(terms_.rbegin()->first));
    }

    long deg_i(std::size_t i) const {
        long d = 0;
        for (const auto& [e, c] : terms_) d = std::max<long>(d, e[i]);
        return terms_.empty() ? -1 : d;
    }

    friend Poly operator+(const Poly& f, const Poly& g);
    friend Poly operator-(const Poly& f, const Poly& g);
    friend Poly operator*(const Poly& f, const Poly& g);
    Poly scaled(i64 c) const;

    friend bool operator==(const Poly& f, const Poly& g) {
        return f.p_ == g.p_ && f.n_ == g.n_ && f.terms_ == g.terms_;
    }

private:
    static void check_compat(const Poly& f, const Poly& g) {
        if (f.p_ != g.p_) fail("CtxMismatch", "polynomials over different fields");
        if (f.n_ != g.n_) fail("ArityMismatch", "polynomials of different arity");
    }

    u32 p_;
    std::size_t n_;
    std::map<MultiIndex, u32, GradedLex> terms_;
};

FpElem eval(const Poly& f, const Point& x);

// H^(alpha): termwise C(beta, alpha) X^(beta - alpha), out-of-range dropped.
Poly hasse_derivative(const Poly& f, const MultiIndex& alpha);

// Formal iterated partial derivative (falling-factorial coefficients).
Poly ordinary_derivative(const Poly& f, const MultiIndex& alpha);

// T^h: X -> X + h, exact binomial expansion.
Poly shift_poly(const Poly& f, const Point& h);

// f = q*g + r with deg r < deg g (univariate).
std::pair<Poly, Poly> divrem_univariate(const Poly& f, const Poly& g);

// True iff [X^alpha]f != 0 and no other key of f dominates alpha componentwise.
bool is_maximal_monomial(const Poly& f, const MultiIndex& alpha);

// A sequence of linearly independent vectors in F_p^n (checked via rank).
class DirectionalFrame {
public:
    DirectionalFrame(u32 p, std::size_t n, std::vector<Point> vectors);

    u32 prime() const { return p_; }
    std::size_t arity() const { return n_; }
    std::size_t size() const { return vectors_.size(); }
    const std::vector<Point>& vectors() const { return vectors_; }

private:
    u32 p_;
    std::size_t n_;
    std::vector<Point> vectors_;
};

// H_I^(alpha) f = [Z^alpha] f(X + Z_1 v_1 + ... + Z_k v_k).
Poly directional_hasse(const Poly& f, const DirectionalFrame& I, const MultiIndex& alpha);

} // namespace shiftcalc
