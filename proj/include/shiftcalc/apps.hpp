#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shiftcalc/bigint.hpp"
#include "shiftcalc/poly.hpp"
#include "shiftcalc/shiftop.hpp"

namespace shiftcalc::apps {

// N(n, q, r): exponent vectors with every entry < q and total weight <= r.
// q = nullopt means no per-coordinate cap (then N = C(n+r, r)).
BigInt count_monomials(u64 n, std::optional<u64> q, u64 r);

struct GammaResult {
    BigFloat value;                 // Gamma_{p,k}
    BigFloat minimizer;             // gamma* in (0,1)
    BigFloat stationarity_residual; // |f'(gamma*)| by central differences
    bool unimodal = true;           // grid pre-scan verdict
};

// Gamma_{p,k} = min_{0<gamma<1} (1+gamma+...+gamma^(p-1)) / gamma^((p-1)/k),
// ternary search on the log domain after a 256-sample unimodality pre-scan.
GammaResult gamma(u32 p, u32 k, const BigFloat& tol = BigFloat("1e-12"));

struct CdReport {
    std::vector<u32> sumset;
    u64 bound = 0; // min(p, |A|+|B|-1)
    bool holds = false;
    bool certificate_checked = false; // run only when |A+B| < p
    std::size_t certificate_rank = 0; // rank{T^b f}_{b in B}
    bool certificate_ok = false;      // rank == |B|
};

CdReport cd_check(const FieldCtx& F, std::vector<u32> A, std::vector<u32> B);

struct CnsWitness {
    Point a;
    MultiIndex r;
    FpElem value; // H^(r) f (a) != 0
};

// Generalized Combinatorial Nullstellensatz witness: needs a maximal
// monomial alpha of f and per-coordinate multisets of size >= alpha_i + 1.
CnsWitness cns_witness(const Poly& f, const MultiIndex& alpha,
                       const std::vector<PointMultiset>& families);

// Power-subgroup sumset inequality |A||B| <= d + |B cap (-A)| checked on the
// hypothesis A + B subset of Z_d union {0}, d a proper divisor of p-1.
struct HpZdReport {
    u64 d = 0;
    std::size_t sumset_size = 0;
    u64 lhs = 0;
    u64 rhs_intersect = 0, rhs_union = 0;
    bool holds_intersect = false, holds_union = false;
};

HpZdReport hp_check_zd(const FieldCtx& F, u64 d, std::vector<u32> A, std::vector<u32> B);

// Technical instance: F = z^d + R monic with low-degree remainder, z F(z)
// vanishing on A + B. All invariants checked by make().
struct HPInstance {
    FieldCtx F;
    std::vector<u32> A, B; // sorted distinct residues
    Poly Fz;
    long d = 0, r = 0;
    u64 K = 0; // |B| - 1 - r
    Poly g0, g1;

    static HPInstance make(const FieldCtx& F, std::vector<u32> A, std::vector<u32> B, Poly Fz);

private:
    HPInstance(const FieldCtx& f, Poly fz) : F(f), Fz(fz), g0(fz.prime(), 1), g1(fz.prime(), 1) {}
};

struct HpReport {
    long d = 0, r = 0;
    u64 K = 0;
    u64 lhs = 0;                         // |A| (|B| - r)
    u64 rhs_intersect = 0, rhs_union = 0; // d - r + |B cap/cup (-A)|
    bool holds_intersect = false, holds_union = false;
    bool with_certificate = false;
    bool certificate_ok = false;
    bool certificate_degenerate = false;  // l(F_K) = 0
    std::vector<u64> vanishing_epsilons;  // k < K with binom(d+K, K-k) = 0 mod p
};

HpReport hp_verify(const HPInstance& inst, bool with_certificate);

struct CapsetReport {
    bool ok = true;
    std::vector<Point> violation; // x, y, z with x + z = 2y when !ok
};

// True iff A has no nontrivial 3-term arithmetic progression (p odd).
CapsetReport capset_verify(const PointMultiset& A);

struct CapsetBound {
    u64 r = 0;
    BigInt N;
    BigInt statement_bound; // 3N, as in the theorem statement
    BigInt proof_bound;     // 2N, as derived in the proof
};

CapsetBound capset_bound(u64 n, u32 p);

struct ExtremeSupports {
    std::vector<Point> s_plus, s_minus;
};

// For each a: does some combo supported on the points up to (resp. from) a
// in the given order have all expansion coefficients of weight <= r zero and
// a nonzero coefficient at a? Default order is graded-lex.
ExtremeSupports extreme_supports(const PointMultiset& A, long r,
                                 const std::vector<Point>* order = nullptr);

struct SumFreeFamily {
    u32 p = 2;
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::vector<Point>> tuples; // tuples[j][i] = x_{i+1, j+1}
};

struct SumFreeReport {
    bool valid = true;
    std::string reason;
    std::vector<std::size_t> witness; // offending index tuple when available
};

// Both directions of the defining property; off-diagonal search by
// meet-in-the-middle on partial sums, guarded at `guard` partial sums.
SumFreeReport sumfree_verify(const SumFreeFamily& fam, u64 guard = 10'000'000);

struct SumFreeBound {
    u64 r = 0;
    BigInt N;
    BigInt kN;
    BigFloat gamma_value;
    BigFloat gamma_pow_n;
    bool n_le_gamma_pow = false; // N <= Gamma^n
};

SumFreeBound sumfree_bound(u64 n, u32 p, u32 k);

struct KakeyaReport {
    bool is_kakeya = false;
    std::size_t direction_count = 0;
    std::vector<Point> missing; // uncovered projective representatives
};

KakeyaReport kakeya_verify(const PointMultiset& K);

struct KakeyaBounds {
    BigInt binom;              // C(n+q-1, n)
    BigInt mult_num, mult_den; // (q^2 / (2q-1))^n, reduced
    BigInt mult_ceil;
};

KakeyaBounds kakeya_bounds(u64 n, u32 q);

struct KakeyaSpanReport {
    bool delta_contains_all = false;
    std::size_t delta_dim = 0;
    bool claim_dim_ok = false; // dim <(v^alpha)_{|alpha|=d}> = C(n+d-1, n-1)
    std::size_t claim_rank = 0, claim_expected = 0;
};

KakeyaSpanReport kakeya_span_check(const PointMultiset& K, u64 d);

struct KakeyaMultSpanReport {
    u64 l = 0, m = 0, d = 0;
    std::size_t rows = 0, cols = 0;
    bool full_column_rank = false;
    bool delta_contains_all = false;
};

KakeyaMultSpanReport kakeya_mult_span_check(u32 q, std::size_t n, u64 l_mult,
                                            u64 cell_guard = 50'000'000);

} // namespace shiftcalc::apps
