#include "shiftcalc/field.hpp"

namespace shiftcalc {

namespace {

u64 mulmod_u64(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<unsigned __int128>(a) * b % m);
}

u64 powmod_u64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin(u64 n, u64 a) {
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    u64 x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod_u64(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    // Bases {2, 7, 61} are exact for n < 4'759'123'141.
    for (u64 a : {2ULL, 7ULL, 61ULL}) {
        if (!miller_rabin(n, a)) return false;
    }
    return true;
}

u32 binom_mod_p_raw(u64 n, u64 k, u32 p) {
    if (k > n) return 0;
    u64 result = 1;
    while (n > 0 || k > 0) {
        u64 nd = n % p, kd = k % p;
        if (kd > nd) return 0;
        // C(nd, kd) mod p with nd, kd < p, multiplicative formula.
        u64 kk = kd < nd - kd ? kd : nd - kd;
        u64 num = 1, den = 1;
        for (u64 i = 1; i <= kk; ++i) {
            num = num * ((nd - kk + i) % p) % p;
            den = den * (i % p) % p;
        }
        result = result * num % p;
        result = result * fpdetail::inv_mod(static_cast<u32>(den), p) % p;
        n /= p;
        k /= p;
    }
    return static_cast<u32>(result);
}

FpElem binom_mod_p(i64 n, i64 k, const FieldCtx& F) {
    if (n < 0) fail("SchemaError", "binomial with negative n");
    if (k < 0 || k > n) return F.zero();
    return {binom_mod_p_raw(static_cast<u64>(n), static_cast<u64>(k), F.p()), F.p()};
}

} // namespace shiftcalc
