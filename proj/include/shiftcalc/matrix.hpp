#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "shiftcalc/field.hpp"

namespace shiftcalc {

// Dense row-major matrix of canonical residues over a single F_p.
class FpMatrix {
public:
    FpMatrix(u32 p, std::size_t rows, std::size_t cols)
        : p_(p), rows_(rows), cols_(cols), a_(rows * cols, 0) {}

    u32 p() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    u32& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    u32 at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    std::vector<u32> row(std::size_t r) const {
        return {a_.begin() + static_cast<long>(r * cols_),
                a_.begin() + static_cast<long>((r + 1) * cols_)};
    }

    friend bool operator==(const FpMatrix& x, const FpMatrix& y) {
        return x.p_ == y.p_ && x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
    }

private:
    u32 p_;
    std::size_t rows_, cols_;
    std::vector<u32> a_;
};

struct RrefResult {
    std::size_t rank = 0;
    std::vector<std::size_t> pivots; // pivot column per pivot row, ascending
    FpMatrix reduced;
    // Nullspace basis vectors, one per free column (ascending free-column
    // order), each normalized so its first nonzero entry is 1.
    std::vector<std::vector<u32>> nullspace;
};

// Exact reduced row-echelon form. Pivot choice: first row with a nonzero
// entry in the current column, columns scanned left to right.
RrefResult rref(const FpMatrix& M);

// One exact solution of M x = rhs if consistent (free variables set to 0),
// std::nullopt otherwise.
std::optional<std::vector<u32>> solve(const FpMatrix& M, const std::vector<u32>& rhs);

// Incrementally maintained reduced row basis; used for rank sweeps and span
// membership tests without materializing large matrices.
class RowSpanBasis {
public:
    RowSpanBasis(u32 p, std::size_t cols) : p_(p), cols_(cols) {}

    // Reduces v against the basis; inserts the reduction if nonzero.
    // Returns true iff the rank grew.
    bool add(std::vector<u32> v);

    bool contains(std::vector<u32> v) const;

    std::size_t rank() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    // Rows in echelon order (pivot columns strictly increasing).
    std::vector<std::vector<u32>> echelon_rows() const;

private:
    void reduce(std::vector<u32>& v) const;

    u32 p_;
    std::size_t cols_;
    std::vector<std::vector<u32>> rows_; // insertion order, fully reduced
    std::vector<std::size_t> pivots_;    // pivot column of rows_[i]
};

} // namespace shiftcalc
