#include "shiftcalc/matrix.hpp"

#include <algorithm>

namespace shiftcalc {

using fpdetail::inv_mod;
using fpdetail::mul_mod;
using fpdetail::sub_mod;

RrefResult rref(const FpMatrix& M) {
    const u32 p = M.p();
    FpMatrix R = M;
    const std::size_t nr = R.rows(), nc = R.cols();
    std::vector<std::size_t> pivots;

    std::size_t row = 0;
    for (std::size_t col = 0; col < nc && row < nr; ++col) {
        std::size_t sel = row;
        while (sel < nr && R.at(sel, col) == 0) ++sel;
        if (sel == nr) continue;
        if (sel != row)
            for (std::size_t c = 0; c < nc; ++c) std::swap(R.at(row, c), R.at(sel, c));
        const u32 inv = inv_mod(R.at(row, col), p);
        for (std::size_t c = col; c < nc; ++c) R.at(row, c) = mul_mod(R.at(row, c), inv, p);
        for (std::size_t r = 0; r < nr; ++r) {
            if (r == row || R.at(r, col) == 0) continue;
            const u32 f = R.at(r, col);
            for (std::size_t c = col; c < nc; ++c)
                R.at(r, c) = sub_mod(R.at(r, c), mul_mod(f, R.at(row, c), p), p);
        }
        pivots.push_back(col);
        ++row;
    }

    RrefResult out{pivots.size(), pivots, R, {}};

    std::vector<bool> is_pivot(nc, false);
    for (std::size_t c : pivots) is_pivot[c] = true;
    for (std::size_t f = 0; f < nc; ++f) {
        if (is_pivot[f]) continue;
        std::vector<u32> v(nc, 0);
        v[f] = 1 % p;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = sub_mod(0, R.at(r, f), p);
        // Normalize: first nonzero entry 1 (deterministic representative).
        for (u32 x : v) {
            if (x != 0) {
                const u32 inv = inv_mod(x, p);
                for (u32& y : v) y = mul_mod(y, inv, p);
                break;
            }
        }
        out.nullspace.push_back(std::move(v));
    }
    return out;
}

std::optional<std::vector<u32>> solve(const FpMatrix& M, const std::vector<u32>& rhs) {
    if (rhs.size() != M.rows())
        fail("DimensionMismatch", "rhs length " + std::to_string(rhs.size()) + " vs " +
                                      std::to_string(M.rows()) + " rows");
    const std::size_t nc = M.cols();
    FpMatrix aug(M.p(), M.rows(), nc + 1);
    for (std::size_t r = 0; r < M.rows(); ++r) {
        for (std::size_t c = 0; c < nc; ++c) aug.at(r, c) = M.at(r, c);
        aug.at(r, nc) = rhs[r] % M.p();
    }
    RrefResult R = rref(aug);
    for (std::size_t r = 0; r < R.rank; ++r)
        if (R.pivots[r] == nc) return std::nullopt; // pivot in the rhs column
    std::vector<u32> x(nc, 0);
    for (std::size_t r = 0; r < R.rank; ++r) x[R.pivots[r]] = R.reduced.at(r, nc);
    return x;
}

void RowSpanBasis::reduce(std::vector<u32>& v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const u32 f = v[pivots_[i]];
        if (f == 0) continue;
        const auto& row = rows_[i];
        for (std::size_t c = pivots_[i]; c < cols_; ++c)
            v[c] = sub_mod(v[c], mul_mod(f, row[c], p_), p_);
    }
}

bool RowSpanBasis::add(std::vector<u32> v) {
    reduce(v);
    std::size_t piv = cols_;
    for (std::size_t c = 0; c < cols_; ++c) {
        if (v[c] != 0) {
            piv = c;
            break;
        }
    }
    if (piv == cols_) return false;
    const u32 inv = inv_mod(v[piv], p_);
    for (std::size_t c = piv; c < cols_; ++c) v[c] = mul_mod(v[c], inv, p_);
    // Back-substitute into the existing rows to keep them fully reduced.
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const u32 f = rows_[i][piv];
        if (f == 0) continue;
        for (std::size_t c = piv; c < cols_; ++c)
            rows_[i][c] = sub_mod(rows_[i][c], mul_mod(f, v[c], p_), p_);
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(piv);
    return true;
}

bool RowSpanBasis::contains(std::vector<u32> v) const {
    reduce(v);
    return std::all_of(v.begin(), v.end(), [](u32 x) { return x == 0; });
}

std::vector<std::vector<u32>> RowSpanBasis::echelon_rows() const {
    std::vector<std::size_t> idx(rows_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return pivots_[a] < pivots_[b]; });
    std::vector<std::vector<u32>> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(rows_[i]);
    return out;
}

} // namespace shiftcalc
