#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "shiftcalc/field.hpp"
#include "shiftcalc/matrix.hpp"

using namespace shiftcalc;

namespace {

bool fails_with(const char* kind, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind() == kind;
    }
    return false;
}

} // namespace

TEST_CASE("field arithmetic basics") {
    FieldCtx F(5);
    CHECK((F.elem(3) * F.elem(4)).v == 2);
    CHECK(F.elem(2).inv().v == 3);
    CHECK((F.elem(1) - F.elem(3)).v == 3);
    CHECK((F.elem(4) / F.elem(2)).v == 2);

    FieldCtx F7(7);
    CHECK(F7.elem(0).pow(0).v == 1); // 0^0 = 1 by convention
    CHECK(F7.elem(3).pow(0).v == 1);

    CHECK(fails_with("DivisionByZero", [&] { (void)F.elem(0).inv(); }));
    CHECK(fails_with("DivisionByZero", [&] { (void)(F.elem(1) / F.elem(0)); }));
    CHECK(fails_with("CtxMismatch", [&] { (void)(F.elem(1) + F7.elem(1)); }));
}

TEST_CASE("field context requires a prime modulus") {
    CHECK(fails_with("SchemaError", [] { FieldCtx F(1); }));
    CHECK(fails_with("SchemaError", [] { FieldCtx F(4); }));
    CHECK(fails_with("SchemaError", [] { FieldCtx F(0x7fffffffULL + 1); }));
    FieldCtx big(2147483647); // 2^31 - 1 is prime
    CHECK(big.p() == 2147483647u);
    CHECK(is_prime(2));
    CHECK(!is_prime(2147483647ULL * 2));
}

TEST_CASE("inverses and Fermat exhaustively for small p") {
    for (u32 p : {2u, 3u, 5u, 7u, 11u, 13u}) {
        FieldCtx F(p);
        for (u32 a = 1; a < p; ++a) {
            CHECK(F.elem(a) * F.elem(a).inv() == F.one());
            CHECK(F.elem(a).pow(p - 1) == F.one());
        }
    }
}

TEST_CASE("binomials via Lucas") {
    FieldCtx F5(5), F7(7);
    CHECK(binom_mod_p(6, 2, F5).v == 0); // 15 mod 5
    CHECK(binom_mod_p(3, 2, F5).v == 3);
    CHECK(binom_mod_p(4, -1, F7).v == 0);
    CHECK(binom_mod_p(4, 5, F7).v == 0);
}

TEST_CASE("binomials match the Pascal recurrence up to n = 200") {
    for (u32 p : {2u, 3u, 5u, 7u, 13u}) {
        std::vector<u32> row{1};
        for (int n = 0; n <= 200; ++n) {
            for (int k = 0; k <= n; ++k)
                REQUIRE(binom_mod_p_raw(static_cast<u64>(n), static_cast<u64>(k), p) ==
                        row[static_cast<std::size_t>(k)]);
            std::vector<u32> next(static_cast<std::size_t>(n) + 2, 1);
            for (int k = 1; k <= n; ++k)
                next[static_cast<std::size_t>(k)] = fpdetail::add_mod(
                    row[static_cast<std::size_t>(k - 1)], row[static_cast<std::size_t>(k)], p);
            row = std::move(next);
        }
    }
}

TEST_CASE("rref on a Vandermonde matrix") {
    FpMatrix M(5, 3, 3);
    const u32 xs[3] = {1, 2, 3};
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            M.at(r, c) = fpdetail::pow_mod(xs[r], static_cast<u64>(c), 5);
    const RrefResult R = rref(M);
    CHECK(R.rank == 3);
    CHECK(R.nullspace.empty());
}

TEST_CASE("rref rank-deficient cases") {
    FpMatrix Z(5, 2, 2);
    const RrefResult RZ = rref(Z);
    CHECK(RZ.rank == 0);
    CHECK(RZ.nullspace.size() == 2);

    FpMatrix M(5, 2, 2);
    M.at(0, 0) = 1;
    M.at(0, 1) = 2;
    M.at(1, 0) = 2;
    M.at(1, 1) = 4;
    const RrefResult R = rref(M);
    CHECK(R.rank == 1);
    REQUIRE(R.nullspace.size() == 1);
    const auto& v = R.nullspace[0];
    // kernel direction (3, 1); normalized so the first nonzero entry is 1
    CHECK(fpdetail::add_mod(v[0], fpdetail::mul_mod(2, v[1], 5), 5) == 0);
    CHECK(v[0] == 1);
    CHECK(v[1] == 2);
}

TEST_CASE("solve") {
    FpMatrix I(3, 2, 2);
    I.at(0, 0) = I.at(1, 1) = 1;
    CHECK(solve(I, {1, 2}) == std::vector<u32>{1, 2});

    FpMatrix bad(5, 2, 1);
    bad.at(0, 0) = bad.at(1, 0) = 1;
    CHECK(!solve(bad, {1, 2}).has_value()); // x = 1 and x = 2

    FpMatrix underdet(3, 1, 2);
    underdet.at(0, 0) = underdet.at(0, 1) = 1;
    CHECK(solve(underdet, {1}) == std::vector<u32>{1, 0}); // free variable zeroed

    CHECK(fails_with("DimensionMismatch", [&] { (void)solve(I, {1, 2, 3}); }));
}

TEST_CASE("rank equals brute-force independent-row count on random 5x5 over F_3") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 40; ++trial) {
        FpMatrix M(3, 5, 5);
        for (std::size_t r = 0; r < 5; ++r)
            for (std::size_t c = 0; c < 5; ++c) M.at(r, c) = static_cast<u32>(rng() % 3);

        // Independence of a row subset by exhausting all coefficient vectors.
        auto independent = [&](unsigned mask) {
            std::vector<std::size_t> rows;
            for (std::size_t r = 0; r < 5; ++r)
                if (mask & (1u << r)) rows.push_back(r);
            std::vector<u32> coeff(rows.size(), 0);
            while (true) {
                std::size_t pos = coeff.size();
                while (pos > 0 && coeff[pos - 1] == 2) coeff[--pos] = 0;
                if (pos == 0) break;
                ++coeff[pos - 1];
                bool zero = true;
                for (std::size_t c = 0; c < 5 && zero; ++c) {
                    u32 acc = 0;
                    for (std::size_t i = 0; i < rows.size(); ++i)
                        acc = fpdetail::add_mod(acc, fpdetail::mul_mod(coeff[i], M.at(rows[i], c), 3),
                                                3);
                    if (acc != 0) zero = false;
                }
                if (zero) return false;
            }
            return true;
        };
        std::size_t best = 0;
        for (unsigned mask = 0; mask < 32; ++mask)
            if (independent(mask))
                best = std::max<std::size_t>(best,
                                             static_cast<std::size_t>(__builtin_popcount(mask)));
        CHECK(rref(M).rank == best);
    }
}

TEST_CASE("reduced matrix annihilates its nullspace") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        const u32 p = trial % 2 ? 3 : 7;
        FpMatrix M(p, 4, 6);
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 6; ++c) M.at(r, c) = static_cast<u32>(rng() % p);
        const RrefResult R = rref(M);
        CHECK(R.rank + R.nullspace.size() == 6);
        for (const auto& v : R.nullspace) {
            for (std::size_t r = 0; r < 4; ++r) {
                u32 acc = 0;
                for (std::size_t c = 0; c < 6; ++c)
                    acc = fpdetail::add_mod(acc, fpdetail::mul_mod(R.reduced.at(r, c), v[c], p), p);
                CHECK(acc == 0);
            }
        }
    }
}

TEST_CASE("row span basis matches rref rank and membership") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const u32 p = 5;
        FpMatrix M(p, 6, 4);
        RowSpanBasis basis(p, 4);
        for (std::size_t r = 0; r < 6; ++r) {
            std::vector<u32> row(4);
            for (std::size_t c = 0; c < 4; ++c) row[c] = M.at(r, c) = static_cast<u32>(rng() % p);
            basis.add(row);
        }
        CHECK(basis.rank() == rref(M).rank);
        for (std::size_t r = 0; r < 6; ++r) CHECK(basis.contains(M.row(r)));
    }
}
