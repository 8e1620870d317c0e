#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "shiftcalc/error.hpp"

namespace shiftcalc {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;

// Deterministic Miller-Rabin; exact for all n < 2^32.
bool is_prime(u64 n);

namespace fpdetail {

inline u32 add_mod(u32 a, u32 b, u32 p) {
    u32 s = a + b; // p <= 2^31-1, so no overflow
    return s >= p ? s - p : s;
}
inline u32 sub_mod(u32 a, u32 b, u32 p) { return a >= b ? a - b : a + (p - b); }
inline u32 mul_mod(u32 a, u32 b, u32 p) {
    return static_cast<u32>(static_cast<u64>(a) * b % p);
}
inline u32 pow_mod(u32 a, u64 e, u32 p) {
    // 0^0 = 1 by the empty-product convention.
    u64 r = 1 % p, base = a;
    while (e) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<u32>(r);
}
inline u32 inv_mod(u32 a, u32 p) {
    if (a == 0) fail("DivisionByZero", "inverse of zero");
    return pow_mod(a, p - 2, p); // p prime
}
inline u32 canon(i64 v, u32 p) {
    i64 r = v % static_cast<i64>(p);
    if (r < 0) r += p;
    return static_cast<u32>(r);
}

} // namespace fpdetail

class FieldCtx;

// Canonical residue tagged with its modulus. The modulus doubles as the
// context identity: mixing elements of different fields is a CtxMismatch.
struct FpElem {
    u32 v = 0;
    u32 p = 2;

    FpElem() = default;
    FpElem(u32 value, u32 prime) : v(value), p(prime) {}

    bool is_zero() const { return v == 0; }

    friend FpElem operator+(FpElem a, FpElem b) {
        check_ctx(a, b);
        return {fpdetail::add_mod(a.v, b.v, a.p), a.p};
    }
    friend FpElem operator-(FpElem a, FpElem b) {
        check_ctx(a, b);
        return {fpdetail::sub_mod(a.v, b.v, a.p), a.p};
    }
    friend FpElem operator*(FpElem a, FpElem b) {
        check_ctx(a, b);
        return {fpdetail::mul_mod(a.v, b.v, a.p), a.p};
    }
    friend FpElem operator/(FpElem a, FpElem b) {
        check_ctx(a, b);
        return {fpdetail::mul_mod(a.v, fpdetail::inv_mod(b.v, a.p), a.p), a.p};
    }
    FpElem operator-() const { return {v == 0 ? 0u : p - v, p}; }
    FpElem inv() const { return {fpdetail::inv_mod(v, p), p}; }
    FpElem pow(u64 e) const { return {fpdetail::pow_mod(v, e, p), p}; }

    friend bool operator==(FpElem a, FpElem b) { return a.v == b.v && a.p == b.p; }
    friend bool operator!=(FpElem a, FpElem b) { return !(a == b); }
    friend std::ostream& operator<<(std::ostream& os, FpElem a) { return os << a.v; }

    static void check_ctx(FpElem a, FpElem b) {
        if (a.p != b.p)
            fail("CtxMismatch", "elements of F_" + std::to_string(a.p) + " and F_" +
                                    std::to_string(b.p));
    }
};

// A prime field F_p with 2 <= p <= 2^31-1. Primality is verified at
// construction.
class FieldCtx {
public:
    explicit FieldCtx(u64 p) {
        if (p < 2 || p > 0x7fffffffULL)
            fail("SchemaError", "modulus out of range: " + std::to_string(p));
        if (!is_prime(p)) fail("SchemaError", "modulus is not prime: " + std::to_string(p));
        p_ = static_cast<u32>(p);
    }

    u32 p() const { return p_; }

    FpElem elem(i64 v) const { return {fpdetail::canon(v, p_), p_}; }
    FpElem zero() const { return {0, p_}; }
    FpElem one() const { return {1 % p_, p_}; }

    friend bool operator==(const FieldCtx& a, const FieldCtx& b) { return a.p_ == b.p_; }

private:
    u32 p_;
};

// Binomial coefficient C(n, k) mod p via Lucas' digit decomposition.
// Out-of-range (k < 0 or k > n) yields 0.
FpElem binom_mod_p(i64 n, i64 k, const FieldCtx& F);

// Raw-residue variant used in inner loops.
u32 binom_mod_p_raw(u64 n, u64 k, u32 p);

} // namespace shiftcalc
