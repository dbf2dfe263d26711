#include "doctest.h"

#include <random>
#include <set>

#include "zeroline/milnork.hpp"

using namespace zeroline;

namespace {

int64_t random_nonzero(std::mt19937_64& rng, int64_t bound) {
    int64_t v = 0;
    while (v == 0) v = static_cast<int64_t>(rng() % (2 * bound + 1)) - bound;
    return v;
}

// (-1)^{v(a)v(b)} a^{v(b)} / b^{v(a)} mod p, integers only
uint64_t tame_oracle(int64_t a, int64_t b, uint64_t p) {
    int64_t va = 0, vb = 0;
    int64_t ua = a, ub = b;
    while (ua % static_cast<int64_t>(p) == 0) {
        ua /= static_cast<int64_t>(p);
        ++va;
    }
    while (ub % static_cast<int64_t>(p) == 0) {
        ub /= static_cast<int64_t>(p);
        ++vb;
    }
    uint64_t ra = mod_of(ua, p), rb = mod_of(ub, p);
    uint64_t out = mulmod(powmod(ra, static_cast<uint64_t>(vb), p), invmod(powmod(rb, static_cast<uint64_t>(va), p), p), p);
    if ((va * vb) % 2) out = (p - out) % p;
    return out;
}

std::set<uint64_t> odd_primes_of(int64_t a, int64_t b) {
    std::set<uint64_t> s;
    for (int64_t v : {a, b})
        for (auto [p, e] : factor(static_cast<uint64_t>(v < 0 ? -v : v)))
            if (p != 2) s.insert(p);
    return s;
}

MilnorElt raw_symbol(const FieldSpec& F, std::vector<int64_t> entries) {
    std::vector<Unit> u;
    for (auto e : entries) u.push_back(make_unit(F, e));
    MilnorElt x = milnor_zero(F, static_cast<int>(u.size()));
    x.terms[Symbol{u}] = 1;
    return x;
}

} // namespace

TEST_CASE("K_2(Q) normal forms match tame symbols and the 2-adic Hilbert symbol") {
    const auto Q = FieldSpec::rationals();
    std::mt19937_64 rng(21);
    for (int i = 0; i < 500; ++i) {
        int64_t a = random_nonzero(rng, 300), b = random_nonzero(rng, 300);
        MilnorNF nf = km_normal_form(raw_symbol(Q, {a, b}));
        for (uint64_t p : odd_primes_of(a, b)) {
            uint64_t t = tame_oracle(a, b, p);
            auto it = nf.tame.find(p);
            CHECK((it == nf.tame.end() ? 1u : it->second) == t);
        }
        for (const auto& [p, t] : nf.tame) CHECK(odd_primes_of(a, b).count(p));
        CHECK(nf.two_adic == (hilbert_symbol(a, 1, b, 1, Place::at(2)) < 0 ? 1 : 0));
    }
}

TEST_CASE("K_2(Q) relations hold in normal form") {
    const auto Q = FieldSpec::rationals();
    std::mt19937_64 rng(23);
    for (int i = 0; i < 300; ++i) {
        int64_t a = random_nonzero(rng, 60), b = random_nonzero(rng, 60), c = random_nonzero(rng, 60);
        auto ab_c = raw_symbol(Q, {a * b, c});
        auto sum = raw_symbol(Q, {a, c}) + raw_symbol(Q, {b, c});
        CHECK(km_normal_form(ab_c) == km_normal_form(sum));
        CHECK(km_normal_form(raw_symbol(Q, {a, b}) + raw_symbol(Q, {b, a})).is_zero());
        CHECK(km_normal_form(raw_symbol(Q, {a, -a})).is_zero());
        if (a != 1) CHECK(km_normal_form(raw_symbol(Q, {a, 1 - a})).is_zero());
        CHECK(km_equal(raw_symbol(Q, {a, a}), raw_symbol(Q, {a, -1})));
    }
}

TEST_CASE("k^M_2(Q) vanishes exactly when all Hilbert symbols are trivial") {
    const auto Q = FieldSpec::rationals();
    std::mt19937_64 rng(29);
    for (int i = 0; i < 300; ++i) {
        int64_t a = random_nonzero(rng, 200), b = random_nonzero(rng, 200);
        bool split = true;
        std::set<Place> places{Place::real(), Place::at(2)};
        for (auto p : odd_primes_of(a, b)) places.insert(Place::at(p));
        for (const auto& v : places) split &= hilbert_symbol(a, 1, b, 1, v) == 1;
        CHECK(km_mod2(raw_symbol(Q, {a, b})).is_zero() == split);
    }
}

TEST_CASE("higher degrees over Q are detected by the real sign") {
    const auto Q = FieldSpec::rationals();
    CHECK(km_normal_form(raw_symbol(Q, {-1, -1, -1})).sign == 1);
    CHECK(km_normal_form(raw_symbol(Q, {-2, -3, 5})).is_zero());
    CHECK(km_normal_form(raw_symbol(Q, {-2, -3, -5})).sign == 1);
    CHECK(km_order(raw_symbol(Q, {-1, -1, -1})) == 2u);
    CHECK(km_order(raw_symbol(Q, {2})) == std::nullopt);
    CHECK(km_order(raw_symbol(Q, {-1})) == 2u);
    CHECK(km_order(raw_symbol(Q, {3, 5})) == 4u);
    CHECK(km_order(raw_symbol(Q, {-1, 5})) == 2u);
}

TEST_CASE("finite fields") {
    for (uint64_t q : {3ull, 5ull, 7ull, 9ull, 25ull, 27ull}) {
        const auto F = FieldSpec::finite(q);
        const GaloisField& G = galois_field(q);
        for (uint64_t a = 1; a < q; ++a) {
            auto x = milnor_symbol(F, {parse_unit(F, std::to_string(a))});
            // additive order of {a} is the multiplicative order of a
            uint64_t ord = 1, y = a;
            while (y != 1) {
                y = G.mul(y, a);
                ++ord;
            }
            CHECK(km_order(x) == ord);
            for (uint64_t b = 1; b < q; b += 3) {
                auto z = milnor_symbol(F, {parse_unit(F, std::to_string(a)), parse_unit(F, std::to_string(b))});
                CHECK(km_normal_form(z).is_zero());
            }
        }
        auto m = minus_one_power(F, 1);
        CHECK(km_mod2(m).is_zero() == minus_one_is_square(F));
    }
}

TEST_CASE("real and complex fields") {
    const auto R = FieldSpec::reals(), C = FieldSpec::complexes();
    for (int n = 1; n <= 32; ++n) {
        CHECK_FALSE(km_mod2(minus_one_power(R, n)).is_zero());
        CHECK(km_is_nilpotent(minus_one_power(R, n)).is_nilpotent == Tri::No);
    }
    CHECK(km_normal_form(raw_symbol(R, {2, 3})).is_zero());
    CHECK(km_normal_form(raw_symbol(R, {-2, -3})).sign == 1);
    CHECK(km_normal_form(raw_symbol(C, {-1})).is_zero() == false);
    CHECK(km_order(raw_symbol(C, {-1})) == 2u);
    CHECK(km_normal_form(raw_symbol(C, {-2, -3})).is_zero());
}

TEST_CASE("power forms of sums of symbols") {
    const auto Q = FieldSpec::rationals();
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        const int k = 1 + static_cast<int>(rng() % 3);
        MilnorElt alpha = milnor_zero(Q, 1);
        for (int j = 0; j < k; ++j) alpha = alpha + raw_symbol(Q, {random_nonzero(rng, 50)});
        alpha = reduce(alpha);
        if (alpha.terms.empty()) continue;
        PowerForm pf = lemma_power_form(alpha);
        CHECK(pf.m <= static_cast<int>(alpha.terms.size()) + 1);
        CHECK(pf.verified);
        // expanded directly, without any shortcut
        CHECK(km_normal_form(km_pow(alpha, pf.m)) == km_normal_form(km_mul(minus_one_power(Q, 1), pf.gamma)));
        NilpotenceVerdict v = km_is_nilpotent(alpha);
        if (v.is_nilpotent == Tri::No) {
            // a negative element: every power has a nonzero real sign
            CHECK(km_mod2(km_pow(alpha, 9)).sign == 1);
            continue;
        }
        REQUIRE(v.is_nilpotent == Tri::Yes);
        REQUIRE(v.constructed_exponent.has_value());
        CHECK(km_normal_form(km_pow(alpha, *v.constructed_exponent)).is_zero());
        CHECK(km_normal_form(km_pow(alpha, *v.witness_exponent)).is_zero());
        if (*v.witness_exponent > 1) CHECK_FALSE(km_normal_form(km_pow(alpha, *v.witness_exponent - 1)).is_zero());
    }
}

TEST_CASE("nilpotence verdicts") {
    const auto Q = FieldSpec::rationals();
    auto v = km_is_nilpotent(raw_symbol(Q, {-1, -1}));
    CHECK(v.is_nilpotent == Tri::No);
    CHECK(v.is_torsion);
    CHECK(km_is_nilpotent(raw_symbol(Q, {-5})).is_nilpotent == Tri::No);
    CHECK(km_is_nilpotent(raw_symbol(Q, {2})).witness_exponent == 2);
    CHECK(km_is_nilpotent(milnor_integer(Q, 3)).is_nilpotent == Tri::No);
    CHECK(km_is_nilpotent(milnor_integer(Q, 0)).is_nilpotent == Tri::Yes);
    const auto F7 = FieldSpec::finite(7);
    auto f = km_is_nilpotent(milnor_symbol(F7, {parse_unit(F7, "3")}));
    CHECK(f.is_nilpotent == Tri::Yes);
    CHECK(f.witness_exponent == 2);
    CHECK(f.torsion_order == 6u);
}

TEST_CASE("inhomogeneous elements") {
    const auto Q = FieldSpec::rationals();
    auto g = parse_graded_milnor(Q, "2*{-1} + {2,3}");
    CHECK(g.parts.size() == 1);
    auto h = parse_graded_milnor(Q, "{5} + {2,3} - 1");
    CHECK(h.parts.size() == 3);
    CHECK(parse_graded_milnor(Q, to_string(h)) == h);
    CHECK(km_is_nilpotent(h).is_nilpotent == Tri::No);
    auto n = parse_graded_milnor(Q, "{5} + {2,3}");
    auto v = km_is_nilpotent(n);
    CHECK(v.is_nilpotent == Tri::Yes);
    REQUIRE(v.witness_exponent.has_value());
    CHECK(km_is_zero(km_pow(n, *v.witness_exponent)));
    CHECK_FALSE(km_is_zero(km_pow(n, *v.witness_exponent - 1)));
    CHECK(km_is_nilpotent(parse_graded_milnor(Q, "{5} + {-1,-1,-1}")).is_nilpotent == Tri::No);
    CHECK_THROWS_AS(parse_milnor(Q, "{5} + {2,3}"), DomainError);
}

TEST_CASE("literals") {
    const auto Q = FieldSpec::rationals();
    for (auto t : {"{2,3}", "-{5}", "3*{2} - {7}", "{1/2,-3}", "4", "{-1,-1,-1}"}) {
        auto x = parse_milnor(Q, t);
        CHECK(parse_milnor(Q, to_string(x)) == x);
    }
    CHECK(to_string(parse_milnor(Q, "{2,3} + {2,3}")) == "2*{2,3}");
    CHECK_THROWS_AS(parse_milnor(Q, "{0}"), DomainError);
    CHECK_THROWS_AS(parse_milnor(Q, "{2,"), DomainError);
    CHECK_THROWS_AS(parse_milnor(Q, "{2} {3}"), DomainError);
    CHECK_THROWS_AS(parse_milnor(Q, ""), DomainError);
}
