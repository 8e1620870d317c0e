#pragma once

#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "shiftcalc/matrix.hpp"
#include "shiftcalc/multi_index.hpp"
#include "shiftcalc/poly.hpp"

namespace shiftcalc {

// Points of F_p^n with positive multiplicities. A plain set is the
// constant-1 multiset. (a, beta) is a member pair when a is a point and
// |beta| <= m(a) - 1.
class PointMultiset {
public:
    PointMultiset(u32 p, std::size_t n) : p_(p), n_(n) {}

    u32 prime() const { return p_; }
    std::size_t arity() const { return n_; }

    void add_point(Point a, u32 mult = 1);
    u32 mult(const Point& a) const {
        Point q = a;
        for (u32& c : q) c %= p_;
        auto it = pts_.find(q);
        return it == pts_.end() ? 0 : it->second;
    }
    bool contains(const Point& a) const { return mult(a) > 0; }

    std::size_t point_count() const { return pts_.size(); }
    u64 size() const; // sum of multiplicities
    bool is_plain() const;
    bool empty() const { return pts_.empty(); }

    const std::map<Point, u32, GradedLex>& points() const { return pts_; }

    friend bool operator==(const PointMultiset& a, const PointMultiset& b) {
        return a.p_ == b.p_ && a.n_ == b.n_ && a.pts_ == b.pts_;
    }

private:
    u32 p_;
    std::size_t n_;
    std::map<Point, u32, GradedLex> pts_;
};

struct ComboKey {
    Point a;
    MultiIndex beta;

    friend bool operator==(const ComboKey& x, const ComboKey& y) {
        return x.a == y.a && x.beta == y.beta;
    }
};

struct ComboKeyLess {
    bool operator()(const ComboKey& x, const ComboKey& y) const {
        if (x.a != y.a) return graded_lex_less(x.a, y.a);
        return graded_lex_less(x.beta, y.beta);
    }
};

// A formal linear combination l = sum c_{a,beta} (T^a)^(beta) over a point
// multiset; the element of Lambda_{(A,m)}. Zero coefficients are pruned.
class ShiftCombo {
public:
    explicit ShiftCombo(PointMultiset base) : base_(std::move(base)) {}

    u32 prime() const { return base_.prime(); }
    std::size_t arity() const { return base_.arity(); }
    const PointMultiset& base() const { return base_; }

    void set_coeff(const Point& a, const MultiIndex& beta, i64 c);
    void add_coeff(const Point& a, const MultiIndex& beta, i64 c);
    u32 coeff(const Point& a, const MultiIndex& beta) const;

    bool is_zero() const { return c_.empty(); }
    std::size_t term_count() const { return c_.size(); }
    const std::map<ComboKey, u32, ComboKeyLess>& terms() const { return c_; }

    ShiftCombo scaled(i64 c) const;
    friend ShiftCombo operator-(const ShiftCombo& x, const ShiftCombo& y);

    // All member pairs of the base multiset, canonical order.
    std::vector<ComboKey> all_keys() const;

    friend bool operator==(const ShiftCombo& x, const ShiftCombo& y) {
        return x.base_ == y.base_ && x.c_ == y.c_;
    }

private:
    void check_key(const Point& a, const MultiIndex& beta) const;

    PointMultiset base_;
    std::map<ComboKey, u32, ComboKeyLess> c_;
};

// Truncated derivative-basis expansion: alpha -> C_alpha = [H^(alpha)]l for
// every |alpha| <= truncation_weight; absent keys in the window mean 0.
struct DerivExpansion {
    u32 p = 2;
    std::size_t n = 0;
    u64 truncation_weight = 0;
    std::map<MultiIndex, u32, GradedLex> coeffs;

    u32 at(const MultiIndex& alpha) const {
        auto it = coeffs.find(alpha);
        return it == coeffs.end() ? 0 : it->second;
    }

    friend bool operator==(const DerivExpansion& a, const DerivExpansion& b) {
        return a.p == b.p && a.n == b.n && a.coeffs == b.coeffs;
    }
};

// Certified completeness window. Coefficients C_alpha depend on alpha_i only
// through binom(alpha_i, beta_i) mod p (periodic with period p^L once
// p^L > beta_max, by Lucas) and a_i^(alpha_i - beta_i) (period p-1 for
// a_i != 0 by Fermat, vanishing beyond beta_max for a_i = 0). Along each
// coordinate the coefficient function is therefore determined by its values
// on [0, beta_max + p^L (p-1)]: vanishing inside the box implies vanishing
// everywhere, and minimal-weight nonzeros always occur inside the box.
struct CertWindow {
    u64 beta_max = 0;
    u64 period = 1;      // p^L (p-1)
    u64 coord_bound = 0; // beta_max + period, per coordinate
};

CertWindow certified_window(u32 p, u64 beta_max);
CertWindow certified_window(const PointMultiset& A);

// Exact expansion coefficient C_alpha = sum c_{a,beta} binom(alpha,beta)
// a^(alpha-beta); no truncation involved.
u32 expansion_coefficient(const ShiftCombo& l, const MultiIndex& alpha);

DerivExpansion expand(const ShiftCombo& l, u64 W);

// sum c_{a,beta} T^a H^(beta) f.
Poly apply(const ShiftCombo& l, const Poly& f);

struct DegreeResult {
    bool exhausted = false; // only reachable with a caller-supplied bound
    u64 bound = 0;          // the exhausted weight bound
    long deg = -1;
    DerivExpansion leading; // homogeneous of weight deg
};

// Scans weights 0,1,2,... (graded-lex within a weight) over the certified
// box; `weight_bound`, when given, overrides the scan ceiling and may yield
// an exhausted result.
DegreeResult degree_and_leading(const ShiftCombo& l, std::optional<u64> weight_bound = {});

// One-dimensional degree lemma, constructive: a combo over (A, m) with
// degree exactly d, found by solving {C_k = 0, k < d} and picking the first
// echelon nullspace vector with C_d != 0.
ShiftCombo construct_1d(const PointMultiset& A, u64 d);

// Reduction transform: output expands to C~_alpha = C_(alpha + e_i); stays
// in the same Lambda_{(A,m)}. Coordinate index is 0-based.
ShiftCombo reduce(const ShiftCombo& l, std::size_t i);

// reduce(l, i) - eps * l; kills every coefficient at (a, beta) with
// a_i = eps and |beta| = m(a) - 1, so the result lives in Lambda of the
// multiset with the hyperplane x_i = eps reduced in multiplicity.
ShiftCombo annihilate_hyperplane(const ShiftCombo& l, std::size_t i, FpElem eps);

// Operator product: (T^a)^(beta) (T^b)^(gamma) = binom(beta+gamma, beta)
// (T^(a+b))^(beta+gamma). The result's base multiset is the coarsest one
// supported by the surviving keys.
ShiftCombo multiply(const ShiftCombo& l1, const ShiftCombo& l2);

// Basis of Delta^d_{(A,m)} = weight-d leading components, echelonized over
// graded-lex weight-d cells. Empty basis means the space is {0}.
// `certified` is false only when a caller-supplied window undercut the
// certified one (the basis is then relative to the smaller box).
struct DeltaBasis {
    long d = 0;
    bool certified = true;
    std::vector<MultiIndex> cells; // weight-d box cells, graded-lex
    std::vector<DerivExpansion> basis;
};

DeltaBasis delta_space(const PointMultiset& A, u64 d,
                       std::optional<u64> coord_bound_override = {});

// Largest d with Delta^d != {0}; exact under the certified window. A
// caller-supplied weight bound that is hit before the sweep completes
// raises BoundExhausted.
long deg_set(const PointMultiset& A, std::optional<u64> weight_bound = {});

// Points mapped a -> L a + b; multiplicities preserved. L must be invertible.
PointMultiset affine_transform(const PointMultiset& A, const FpMatrix& L, const Point& b);

// Iterated coordinate-hyperplane upper bound: slice along the last
// coordinate of `order`, recurse on the slices, and combine as
// max_k (|C_k| - 1 + k) over C_k = {slice values with recursive bound >= k}.
// Plain sets only.
long deg_upper_bound(const PointMultiset& A, const std::vector<std::size_t>& order);

// Monomial-counting lower bound on a coordinate subspace W (0-based coord
// indices): largest r+1 with |A cap W| > N(dim W, p, r); 0 if none.
long deg_lower_bound(const PointMultiset& A, const std::vector<std::size_t>& coords);

} // namespace shiftcalc
