#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "shiftcalc/poly.hpp"

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

Poly random_poly(std::mt19937_64& rng, u32 p, std::size_t n, u32 max_exp, int terms) {
    Poly f(p, n);
    for (int t = 0; t < terms; ++t) {
        MultiIndex e(n);
        for (auto& x : e) x = static_cast<u32>(rng() % (max_exp + 1));
        f.add_term(std::move(e), static_cast<i64>(rng() % p));
    }
    return f;
}

MultiIndex random_index(std::mt19937_64& rng, std::size_t n, u32 max_exp) {
    MultiIndex a(n);
    for (auto& x : a) x = static_cast<u32>(rng() % (max_exp + 1));
    return a;
}

} // namespace

TEST_CASE("arithmetic basics") {
    // (x+1)(x-1) = x^2 + 2 over F_3
    Poly xp1(3, 1), xm1(3, 1);
    xp1.add_term({1}, 1);
    xp1.add_term({0}, 1);
    xm1.add_term({1}, 1);
    xm1.add_term({0}, -1);
    Poly prod = xp1 * xm1;
    CHECK(prod.coeff({2}) == 1);
    CHECK(prod.coeff({0}) == 2);
    CHECK(prod.term_count() == 2);

    std::mt19937_64 rng(1);
    Poly f = random_poly(rng, 5, 2, 3, 4);
    CHECK(f + Poly::zero(5, 2) == f);

    Poly x2y = Poly::monomial(3, {2, 1}, 1);
    CHECK(x2y.scaled(3).is_zero());

    CHECK(fails_with("ArityMismatch", [&] { (void)(xp1 + x2y); }));
    CHECK(fails_with("CtxMismatch", [&] { (void)(xp1 + Poly::zero(5, 1)); }));
}

TEST_CASE("degree sentinel") {
    CHECK(Poly::zero(5, 2).degree() == Deg{});
    CHECK(Poly::constant(5, 2, 1).degree() == Deg{0});
    CHECK(deg_less(Deg{}, Deg{0}));
    CHECK(deg_less(Deg{}, Deg{-100}));
    CHECK(!deg_less(Deg{}, Deg{}));

    Poly f(5, 2); // x^2 y^2 + y^3
    f.add_term({2, 2}, 1);
    f.add_term({0, 3}, 1);
    CHECK(f.degree() == Deg{4});
    CHECK(f.deg_i(0) == 2);
    CHECK(f.deg_i(1) == 3);
}

TEST_CASE("evaluation") {
    Poly f(5, 1); // x^2 + 2x
    f.add_term({2}, 1);
    f.add_term({1}, 2);
    CHECK(eval(f, {3}).v == 0); // 9 + 6 = 15

    Poly g(5, 2);
    g.add_term({1, 2}, 3);
    g.add_term({0, 0}, 4);
    CHECK(eval(g, {0, 0}).v == 4); // constant term at the origin

    // prod_{c in F_5} (x - c) = x^5 - x vanishes everywhere
    Poly v = Poly::constant(5, 1, 1);
    for (u32 c = 0; c < 5; ++c) {
        Poly lin(5, 1);
        lin.add_term({1}, 1);
        lin.add_term({0}, -static_cast<i64>(c));
        v = v * lin;
    }
    for (u32 x = 0; x < 5; ++x) CHECK(eval(v, {x}).v == 0);
}

TEST_CASE("Hasse derivatives") {
    Poly x3 = Poly::monomial(5, {3}, 1);
    Poly h = hasse_derivative(x3, {2});
    CHECK(h.coeff({1}) == 3); // C(3,2) = 3

    Poly x2y = Poly::monomial(3, {2, 1}, 1);
    Poly h2 = hasse_derivative(x2y, {1, 1});
    CHECK(h2.coeff({1, 0}) == 2); // C(2,1) C(1,1) = 2

    CHECK(hasse_derivative(x2y, {0, 0}) == x2y);

    // H^(p)(x^p) = 1 while the ordinary p-th derivative dies
    Poly xp = Poly::monomial(3, {3}, 1);
    CHECK(hasse_derivative(xp, {3}) == Poly::constant(3, 1, 1));
    CHECK(ordinary_derivative(xp, {3}).is_zero());
}

TEST_CASE("ordinary derivatives and the alpha! bridge") {
    Poly x2 = Poly::monomial(5, {2}, 1);
    CHECK(ordinary_derivative(x2, {1}).coeff({1}) == 2);
    CHECK(ordinary_derivative(x2, {2}) == Poly::constant(5, 1, 2));
    // d^2(x^2) = 2! H^(2)(x^2)
    CHECK(ordinary_derivative(x2, {2}) == hasse_derivative(x2, {2}).scaled(2));

    Poly xp = Poly::monomial(5, {5}, 1);
    CHECK(ordinary_derivative(xp, {1}).is_zero()); // 5 x^4 = 0
}

TEST_CASE("shifts") {
    Poly x2 = Poly::monomial(3, {2}, 1);
    Poly s = shift_poly(x2, {1});
    CHECK(s.coeff({2}) == 1);
    CHECK(s.coeff({1}) == 2);
    CHECK(s.coeff({0}) == 1);

    Poly xy = Poly::monomial(5, {1, 1}, 1);
    Poly t = shift_poly(xy, {1, 2}); // (x+1)(y+2) = xy + 2x + y + 2
    CHECK(t.coeff({1, 1}) == 1);
    CHECK(t.coeff({1, 0}) == 2);
    CHECK(t.coeff({0, 1}) == 1);
    CHECK(t.coeff({0, 0}) == 2);

    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const u32 p = trial % 2 ? 3 : 5;
        Poly f = random_poly(rng, p, 2, 3, 4);
        Point h{static_cast<u32>(rng() % p), static_cast<u32>(rng() % p)};
        Point neg{h[0] ? p - h[0] : 0, h[1] ? p - h[1] : 0};
        CHECK(shift_poly(shift_poly(f, h), neg) == f); // T^h T^(-h) = id
        CHECK(shift_poly(f, {0, 0}) == f);
        if (!f.is_zero()) CHECK(shift_poly(f, h).degree() == f.degree());
    }
}

TEST_CASE("shift equals the Hasse expansion (duality)") {
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 50; ++trial) {
        const u32 p = trial % 2 ? 3 : 7;
        Poly f = random_poly(rng, p, 2, 3, 4);
        Point h{static_cast<u32>(rng() % p), static_cast<u32>(rng() % p)};
        Poly sum = Poly::zero(p, 2);
        const long df = f.is_zero() ? 0 : *f.degree();
        for (long d = 0; d <= df; ++d)
            for (long i = 0; i <= d; ++i) {
                const MultiIndex a{static_cast<u32>(i), static_cast<u32>(d - i)};
                u32 ha = fpdetail::mul_mod(fpdetail::pow_mod(h[0], a[0], p),
                                           fpdetail::pow_mod(h[1], a[1], p), p);
                sum = sum + hasse_derivative(f, a).scaled(ha);
            }
        CHECK(sum == shift_poly(f, h));
    }
}

TEST_CASE("Hasse composition identity") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const u32 p = trial % 2 ? 3 : 5;
        Poly f = random_poly(rng, p, 2, 4, 4);
        const MultiIndex a = random_index(rng, 2, 2), b = random_index(rng, 2, 2);
        u32 binom = 1;
        for (std::size_t i = 0; i < 2; ++i)
            binom = fpdetail::mul_mod(binom, binom_mod_p_raw(a[i] + b[i], a[i], p), p);
        CHECK(hasse_derivative(hasse_derivative(f, b), a) ==
              hasse_derivative(f, add(a, b)).scaled(binom));
    }
}

TEST_CASE("univariate division") {
    Poly f(5, 1); // x^2 - 1
    f.add_term({2}, 1);
    f.add_term({0}, -1);
    Poly g(5, 1); // x - 1
    g.add_term({1}, 1);
    g.add_term({0}, -1);
    auto [q, r] = divrem_univariate(f, g);
    CHECK(r.is_zero());
    CHECK(q.coeff({1}) == 1);
    CHECK(q.coeff({0}) == 1);

    auto [q2, r2] = divrem_univariate(Poly::monomial(5, {1}, 1), Poly::monomial(5, {2}, 1));
    CHECK(q2.is_zero());
    CHECK(r2 == Poly::monomial(5, {1}, 1));

    Poly h(3, 1); // x^3 + 2x + 1
    h.add_term({3}, 1);
    h.add_term({1}, 2);
    h.add_term({0}, 1);
    Poly lin(3, 1); // x + 1
    lin.add_term({1}, 1);
    lin.add_term({0}, 1);
    auto [q3, r3] = divrem_univariate(h, lin);
    CHECK(r3 == Poly::constant(3, 1, 1));
    CHECK(q3 * lin + r3 == h); // multiplication oracle

    CHECK(fails_with("DivisionByZeroPoly",
                     [&] { (void)divrem_univariate(f, Poly::zero(5, 1)); }));
}

TEST_CASE("division invariant on random pairs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const u32 p = trial % 3 == 0 ? 3 : (trial % 3 == 1 ? 5 : 7);
        Poly f = random_poly(rng, p, 1, 8, 5);
        Poly g = random_poly(rng, p, 1, 4, 3);
        if (g.is_zero()) g = Poly::constant(p, 1, 1 + static_cast<i64>(rng() % (p - 1)));
        auto [q, r] = divrem_univariate(f, g);
        CHECK(q * g + r == f);
        CHECK(deg_less(r.degree(), g.degree()));
    }
}

TEST_CASE("maximal monomials") {
    Poly f(5, 2); // xy + x^3
    f.add_term({1, 1}, 1);
    f.add_term({3, 0}, 1);
    CHECK(is_maximal_monomial(f, {1, 1}));

    Poly g(5, 2); // xy + x^2 y
    g.add_term({1, 1}, 1);
    g.add_term({2, 1}, 1);
    CHECK(!is_maximal_monomial(g, {1, 1}));

    CHECK(is_maximal_monomial(Poly::monomial(5, {3}, 1), {3}));
    CHECK(!is_maximal_monomial(Poly::monomial(5, {3}, 1), {2})); // zero coefficient
}

TEST_CASE("directional Hasse derivatives") {
    // f = x1 x2, v = (1,1): [Z] (x1+Z)(x2+Z) = x1 + x2
    Poly f = Poly::monomial(3, {1, 1}, 1);
    DirectionalFrame I(3, 2, {{1, 1}});
    Poly d = directional_hasse(f, I, {1});
    CHECK(d.coeff({1, 0}) == 1);
    CHECK(d.coeff({0, 1}) == 1);
    CHECK(d.term_count() == 2);

    // standard frame reduces to the plain Hasse derivative
    std::mt19937_64 rng(11);
    DirectionalFrame std2(5, 2, {{1, 0}, {0, 1}});
    for (int trial = 0; trial < 20; ++trial) {
        Poly g = random_poly(rng, 5, 2, 3, 4);
        const MultiIndex a = random_index(rng, 2, 2);
        CHECK(directional_hasse(g, std2, a) == hasse_derivative(g, a));
    }

    CHECK(fails_with("DependentFrame", [] { DirectionalFrame bad(3, 2, {{1, 2}, {2, 1}}); }));
    // (2,4) = 2 (1,2) over F_5
    CHECK(fails_with("DependentFrame", [] { DirectionalFrame bad(5, 2, {{1, 2}, {2, 4}}); }));
}

TEST_CASE("directional identity: H_{v^d} = sum_{|a|=d} v^a H^(a)") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 60; ++trial) {
        const u32 p = trial % 2 ? 3 : 5;
        const std::size_t n = 2 + trial % 2;
        Poly f = random_poly(rng, p, n, 3, 4);
        Point v(n, 0);
        while (std::all_of(v.begin(), v.end(), [](u32 x) { return x == 0; }))
            for (auto& x : v) x = static_cast<u32>(rng() % p);
        const u32 d = static_cast<u32>(rng() % 4);

        DirectionalFrame I(p, n, {v});
        const Poly lhs = directional_hasse(f, I, {d});

        Poly rhs = Poly::zero(p, n);
        const std::vector<u64> caps(n, d);
        for_each_composition(n, d, caps, [&](const MultiIndex& a) {
            u32 va = 1;
            for (std::size_t i = 0; i < n; ++i)
                if (a[i]) va = fpdetail::mul_mod(va, fpdetail::pow_mod(v[i], a[i], p), p);
            rhs = rhs + hasse_derivative(f, a).scaled(va);
            return true;
        });
        CHECK(lhs == rhs);
    }
}

TEST_CASE("directional identity: frame derivative factors through single directions") {
    std::mt19937_64 rng(555);
    for (int trial = 0; trial < 40; ++trial) {
        const u32 p = trial % 2 ? 3 : 5;
        Poly f = random_poly(rng, p, 2, 3, 3);
        // independent pair in F_p^2
        Point v1{1, static_cast<u32>(rng() % p)}, v2{0, 1};
        DirectionalFrame I(p, 2, {v1, v2});
        const MultiIndex a = random_index(rng, 2, 2);
        const Poly lhs = directional_hasse(f, I, a);
        DirectionalFrame I1(p, 2, {v1}), I2(p, 2, {v2});
        const Poly rhs = directional_hasse(directional_hasse(f, I2, {a[1]}), I1, {a[0]});
        CHECK(lhs == rhs);
    }
}

TEST_CASE("directional identity: linear combinations of frame vectors") {
    // H_{(c1 v1 + c2 v2)^d} = sum_{|a|=d} c^a H_I^(a)
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 40; ++trial) {
        const u32 p = trial % 2 ? 3 : 5;
        Poly f = random_poly(rng, p, 2, 3, 3);
        Point v1{1, static_cast<u32>(rng() % p)}, v2{0, 1};
        DirectionalFrame I(p, 2, {v1, v2});
        u32 c1 = static_cast<u32>(rng() % p), c2 = static_cast<u32>(rng() % p);
        if (c1 == 0 && c2 == 0) c1 = 1;
        const u32 d = 1 + static_cast<u32>(rng() % 3);

        Point w(2);
        for (std::size_t i = 0; i < 2; ++i)
            w[i] = fpdetail::add_mod(fpdetail::mul_mod(c1, v1[i], p),
                                     fpdetail::mul_mod(c2, v2[i], p), p);
        if (std::all_of(w.begin(), w.end(), [](u32 x) { return x == 0; })) continue;
        DirectionalFrame W(p, 2, {w});
        const Poly lhs = directional_hasse(f, W, {d});

        Poly rhs = Poly::zero(p, 2);
        for (u32 i = 0; i <= d; ++i) {
            const u32 ca = fpdetail::mul_mod(fpdetail::pow_mod(c1, i, p),
                                             fpdetail::pow_mod(c2, d - i, p), p);
            rhs = rhs + directional_hasse(f, I, {i, d - i}).scaled(ca);
        }
        CHECK(lhs == rhs);
    }
}
