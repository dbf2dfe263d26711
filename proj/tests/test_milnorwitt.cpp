#include "doctest.h"

#include <random>
#include <set>

#include "zeroline/milnorwitt.hpp"

using namespace zeroline;

namespace {

std::vector<FieldSpec> all_fields() {
    return {FieldSpec::rationals(), FieldSpec::reals(),     FieldSpec::complexes(), FieldSpec::finite(3),
            FieldSpec::finite(5),   FieldSpec::finite(7),   FieldSpec::finite(9),   FieldSpec::finite(13),
            FieldSpec::finite(27)};
}

// recheck the fiber product condition on a computed element
void check_compatible(const MWElt& x) {
    CHECK_NOTHROW(mw_make(x.degree, x.km, x.w));
}

} // namespace

TEST_CASE("construction and compatibility") {
    const auto Q = FieldSpec::rationals();
    CHECK(mw_equal(parse_mw("MW(Q, 0; <1>)"), mw_one(Q)));
    CHECK_NOTHROW(parse_mw("MW(Q, 1; {2} | <1,-2>)"));
    CHECK_THROWS_AS(parse_mw("MW(Q, 1; {2} | <1,-3>)"), IncompatiblePair);
    CHECK_THROWS_AS(parse_mw("MW(Q, 1; {2} | <1>)"), IncompatiblePair);
    CHECK_THROWS_AS(parse_mw("MW(Q, 2; {2,3} | <1,-2>)"), IncompatiblePair);
    CHECK_THROWS_AS(mw_make(0, milnor_integer(Q, 2), witt_one(Q)), IncompatiblePair);
    CHECK_THROWS_AS(parse_mw("MW(Q, 1; <1>)"), DomainError);
    CHECK_THROWS_AS(parse_mw("MW(Q; 1; <1>)"), DomainError);
    CHECK_THROWS_AS(parse_mw("MW(F4, -1; <1>)"), DomainError);
    std::mt19937_64 rng(41);
    const std::vector<int64_t> pool{-1, 2, -2, 3, -3, 5, 6, -7, 10, 11};
    for (int i = 0; i < 60; ++i) {
        const int n = 1 + static_cast<int>(rng() % 3);
        MilnorElt a = milnor_zero(Q, n);
        for (int t = 0; t < 2; ++t) {
            std::vector<Unit> e;
            for (int j = 0; j < n; ++j) e.push_back(make_unit(Q, pool[rng() % pool.size()]));
            a = a + milnor_symbol(Q, e);
        }
        MWElt x = mw_lift(a);
        check_compatible(x);
        MWElt y = mw_lift(milnor_symbol(Q, {make_unit(Q, pool[rng() % pool.size()])}));
        check_compatible(mw_mul(x, y));
        check_compatible(mw_mul(y, x));
        check_compatible(eta_mul(x));
        check_compatible(x + x);
    }
}

TEST_CASE("eta relations") {
    for (const auto& F : all_fields()) {
        CAPTURE(F.name());
        const MWElt eta = mw_eta(F);
        CHECK(mw_is_zero(mw_mul(mw_hyperbolic(F), eta)));
        CHECK(mw_is_zero(mw_mul(mw_one(F) - mw_epsilon(F), eta)));
        CHECK(mw_equal(mw_mul(mw_epsilon(F), mw_epsilon(F)), mw_one(F)));
        MWElt p = eta;
        for (int n = 1; n <= 64; ++n) {
            CHECK_FALSE(mw_is_zero(p));
            p = mw_mul(p, eta);
        }
        // 2 eta vanishes exactly when -1 is a square; otherwise eta has order 4
        // (non-real fields) or infinite order (formally real fields)
        const bool two_eta_zero = mw_is_zero(2 * eta);
        CHECK(two_eta_zero == minus_one_is_square(F));
        const auto t = mw_is_torsion(eta);
        if (is_formally_real(F)) CHECK(t.torsion == Tri::No);
        else CHECK(t.order == (minus_one_is_square(F) ? 2u : 4u));
    }
}

TEST_CASE("eta multiplication") {
    const auto F3 = FieldSpec::finite(3);
    auto x = mw_from_gw(parse_gw(F3, "<1,1>"));
    auto ex = eta_mul(x);
    CHECK(ex.degree == -1);
    CHECK(ex.w == witt_class(parse_form(F3, "<1,1>")));
    CHECK(eta_mul(ex).w == ex.w);
    CHECK(mw_is_zero(eta_mul(mw_zero(F3, 2))));
    const auto C = FieldSpec::complexes();
    auto ee = mw_mul(mw_eta(C), mw_eta(C));
    CHECK(ee.degree == -2);
    CHECK(ee.w == witt_one(C));
    // eta [a] = <a> - 1 in degree 0
    const auto Q = FieldSpec::rationals();
    auto ea = eta_mul(mw_unit(make_unit(Q, 5)));
    CHECK(mw_equal(ea, mw_from_gw(parse_gw(Q, "<5> - 1"))));
}

TEST_CASE("torsion and nilpotence") {
    const auto F3 = FieldSpec::finite(3), F5 = FieldSpec::finite(5), C = FieldSpec::complexes();
    auto t = mw_is_torsion(mw_eta(C));
    CHECK(t.order == 2u);
    CHECK(mw_is_torsion(mw_one(FieldSpec::rationals())).torsion == Tri::No);
    CHECK(mw_is_torsion(mw_eta(F3)).order == 4u);
    auto v = mw_is_nilpotent(mw_eta(F5));
    CHECK(v.is_torsion);
    CHECK(v.is_nilpotent == Tri::No);
    auto w = mw_is_nilpotent(parse_mw("MW(F3, -3; <1,1>)"));
    CHECK(w.is_nilpotent == Tri::Yes);
    CHECK(w.witness_exponent == 2);
    auto g = mw_is_nilpotent(parse_mw("MW(F3, 0; <1> - <-1>)"));
    CHECK(g.is_nilpotent == Tri::Yes);
    CHECK(g.witness_exponent == 2);
    auto z = mw_is_nilpotent(mw_zero(F3, 4));
    CHECK(z.torsion_order == 1u);
    CHECK(z.witness_exponent == 1);
    // positive degrees over Q: both components must be nilpotent
    auto p = mw_is_nilpotent(parse_mw("MW(Q, 1; {2} | <1,-2>)"));
    CHECK(p.is_nilpotent == Tri::Yes);
    CHECK_FALSE(p.is_torsion);
    auto m = mw_is_nilpotent(mw_unit(make_unit(FieldSpec::rationals(), -3)));
    CHECK(m.is_nilpotent == Tri::No);
}

TEST_CASE("every nilpotent verdict carries a verified witness") {
    for (const auto& F : {FieldSpec::finite(3), FieldSpec::finite(5), FieldSpec::finite(9), FieldSpec::reals(),
                          FieldSpec::complexes(), FieldSpec::rationals()}) {
        for (int n = -2; n <= 3; ++n) {
            ScanOptions o;
            o.samples = 60;
            ScanReport r = nishida_scan(F, n, o);
            CAPTURE(F.name());
            CAPTURE(n);
            CHECK(r.disagreements == 0);
            CHECK_FALSE(r.budget_exhausted);
            if (is_formally_real(F) || n >= 0) CHECK(r.counterexamples == 0);
            else CHECK(r.counterexamples > 0);
        }
    }
    ScanOptions tiny;
    tiny.budget = 3;
    CHECK(nishida_scan(FieldSpec::finite(13), 1, tiny).budget_exhausted);
}

TEST_CASE("degree zero is GW(F_q), exhaustively") {
    for (uint64_t q : {3ull, 5ull, 7ull, 9ull}) {
        const auto F = FieldSpec::finite(q);
        const GaloisField& G = galois_field(q);
        const uint64_t g = G.least_nonresidue();
        std::set<uint64_t> squares;
        for (uint64_t y = 1; y < q; ++y) squares.insert(G.mul(y, y));
        // forms <1,..,1,g,..,g> of rank <= 6, with their determinant computed in F_q
        struct F0 {
            DiagonalForm form;
            int rank;
            bool det_square;
        };
        std::vector<F0> forms;
        for (int r = 0; r <= 6; ++r)
            for (int k = 0; k <= r; ++k) {
                std::vector<SquareClass> e(static_cast<size_t>(r - k), trivial_class(F));
                uint64_t det = 1;
                for (int j = 0; j < k; ++j) {
                    e.push_back(square_class(parse_unit(F, std::to_string(g))));
                    det = G.mul(det, g);
                }
                forms.push_back({DiagonalForm{F, e}, r, squares.count(det) > 0});
            }
        std::map<std::pair<std::string, int64_t>, std::pair<size_t, size_t>> seen;
        for (size_t i = 0; i < forms.size(); ++i)
            for (size_t j = 0; j < forms.size(); ++j) {
                MWElt x = mw_from_gw(gw_class(forms[i].form) - gw_class(forms[j].form));
                GWClass back = mw_to_gw(x);
                auto key = std::make_pair(to_string(back.witt), back.rank);
                auto it = seen.find(key);
                if (it == seen.end()) {
                    seen[key] = {i, j};
                    continue;
                }
                // f_i - f_j = f_k - f_l iff f_i + f_l and f_k + f_j have equal rank and determinant
                auto [k, l] = it->second;
                CHECK(forms[i].rank + forms[l].rank == forms[k].rank + forms[j].rank);
                const bool d1 = forms[i].det_square == forms[l].det_square;
                const bool d2 = forms[k].det_square == forms[j].det_square;
                CHECK(d1 == d2);
            }
        // every (w, r) with matching parity and |r| <= 6 is hit
        size_t expected = 0;
        for (int r = -6; r <= 6; ++r) expected += 2;
        CHECK(seen.size() == expected);
    }
}

TEST_CASE("ring laws") {
    std::mt19937_64 rng(43);
    for (const auto& F : {FieldSpec::finite(3), FieldSpec::finite(5), FieldSpec::rationals()}) {
        std::vector<MWElt> xs;
        xs.push_back(mw_eta(F));
        xs.push_back(mw_epsilon(F));
        xs.push_back(mw_unit(make_unit(F, 2)));
        xs.push_back(mw_unit(make_unit(F, -1)));
        xs.push_back(mw_from_gw(gw_class(diagonal(F, {1, 2})) - gw_one(F)));
        for (const auto& a : xs)
            for (const auto& b : xs) {
                MWElt ab = mw_mul(a, b), ba = mw_mul(b, a);
                // graded commutativity twisted by epsilon: ab = eps^{|a||b|} ba
                MWElt twisted = ((a.degree * b.degree) % 2 != 0) ? mw_mul(mw_epsilon(F), ba) : ba;
                CHECK(mw_equal(ab, twisted));
                for (const auto& c : xs) {
                    CHECK(mw_equal(mw_mul(mw_mul(a, b), c), mw_mul(a, mw_mul(b, c))));
                    if (b.degree == c.degree) CHECK(mw_equal(mw_mul(a, b + c), mw_mul(a, b) + mw_mul(a, c)));
                }
            }
    }
}

TEST_CASE("literals round-trip") {
    for (auto t : {"MW(Q, 1; {2} | <1,-2>)", "MW(F3, -2; <1,1>)", "MW(Q, 0; <1,1> - 2)", "MW(R, 2; {-1,-1} | <1,1,1,1>)",
                   "MW(C, 1; {-1} | <>)", "MW(F9, 0; 3)", "MW(Q, -1; <1> - <3>)", "MW(Q, 2; 0 | 0)"}) {
        MWElt x = parse_mw(t);
        CHECK(mw_equal(parse_mw(to_string(x)), x));
    }
}
