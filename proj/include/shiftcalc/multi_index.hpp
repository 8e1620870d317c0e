#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "shiftcalc/error.hpp"
#include "shiftcalc/field.hpp"

namespace shiftcalc {

// Exponent vectors and coordinate vectors share the same representation.
using MultiIndex = std::vector<u32>;
using Point = std::vector<u32>;

inline u64 weight(const MultiIndex& a) {
    return std::accumulate(a.begin(), a.end(), u64{0});
}

// alpha <= beta componentwise.
inline bool leq(const MultiIndex& a, const MultiIndex& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

// Graded-lexicographic total order: weight first, then lexicographic.
// This is the canonical iteration order everywhere determinism matters.
inline bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    const u64 wa = weight(a), wb = weight(b);
    if (wa != wb) return wa < wb;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct GradedLex {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        return graded_lex_less(a, b);
    }
};

// Visits every alpha with |alpha| = d and alpha_i <= caps_i, in lexicographic
// ascending order. Returns false from `fn` to stop early.
template <typename Fn>
bool for_each_composition(std::size_t n, u64 d, const std::vector<u64>& caps, Fn&& fn) {
    MultiIndex cur(n, 0);
    std::function<bool(std::size_t, u64)> rec = [&](std::size_t pos, u64 rest) -> bool {
        if (pos + 1 == n) {
            if (rest > caps[pos]) return true;
            cur[pos] = static_cast<u32>(rest);
            return fn(static_cast<const MultiIndex&>(cur));
        }
        u64 tail_cap = 0;
        for (std::size_t j = pos + 1; j < n; ++j) tail_cap += caps[j];
        const u64 lo = rest > tail_cap ? rest - tail_cap : 0;
        const u64 hi = std::min<u64>(caps[pos], rest);
        for (u64 v = lo; v <= hi; ++v) {
            cur[pos] = static_cast<u32>(v);
            if (!rec(pos + 1, rest - v)) return false;
        }
        return true;
    };
    if (n == 0) return d == 0 ? fn(static_cast<const MultiIndex&>(cur)) : true;
    return rec(0, d);
}

// Visits every alpha with |alpha| <= W in graded-lex order (no coordinate caps).
template <typename Fn>
bool for_each_weight_upto(std::size_t n, u64 W, Fn&& fn) {
    const std::vector<u64> caps(n, W);
    for (u64 d = 0; d <= W; ++d)
        if (!for_each_composition(n, d, caps, fn)) return false;
    return true;
}

} // namespace shiftcalc
