#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "zeroline/etalocal.hpp"
#include "zeroline/milnorwitt.hpp"
#include "zeroline/powerops.hpp"

using namespace zeroline;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

void fail(Verdict& v, const std::string& why) {
    if (v.pass) v.detail.clear();
    v.pass = false;
    if (v.detail.size() < 400) v.detail += (v.detail.empty() ? "" : "; ") + why;
}

std::vector<uint64_t> acceptance_q() { return {3, 5, 7, 9, 11, 13}; }

std::vector<FieldSpec> supported_fields() {
    std::vector<FieldSpec> out{FieldSpec::rationals(), FieldSpec::reals(), FieldSpec::complexes()};
    for (uint64_t q = 3; q < 60; q += 2) {
        auto f = factor(q);
        if (f.size() == 1) out.push_back(FieldSpec::finite(q));
    }
    return out;
}

// the forms <1,..,1,g,..,g> of rank <= 8; over F_q every diagonal form is
// isometric to one of them
std::vector<std::pair<DiagonalForm, oracle::ElementForm>> small_forms(uint64_t q) {
    const auto F = FieldSpec::finite(q);
    const GaloisField& G = galois_field(q);
    const uint64_t g = G.least_nonresidue();
    std::vector<std::pair<DiagonalForm, oracle::ElementForm>> out;
    for (int r = 0; r <= 8; ++r)
        for (int k = 0; k <= r; ++k) {
            std::vector<SquareClass> e;
            oracle::ElementForm raw;
            for (int j = 0; j < r; ++j) {
                const uint64_t a = j < k ? g : 1;
                e.push_back(square_class(parse_unit(F, std::to_string(a))));
                raw[a]++;
            }
            out.push_back({DiagonalForm{F, e}, raw});
        }
    return out;
}

Verdict c1() {
    Verdict v;
    WindowReport r = verify_main2(-50, 50, -50, 50);
    if (r.rows.size() != 101u * 101u) fail(v, "window size");
    if (!r.surjective_everywhere) fail(v, "unit map not surjective somewhere");
    if (!r.shift_match) fail(v, "kernel_dim(d) != kt_dim(d-(7,4)) somewhere");
    for (const auto& row : r.rows)
        if (row.d == BiDeg{16, 9} && row.kernel_dim != 1) fail(v, "kernel at (16,9)");
    if (v.pass) v.detail = std::to_string(r.rows.size()) + " bidegrees";
    return v;
}

Verdict c2() {
    Verdict v;
    size_t n = 0;
    for (int64_t a = -50; a <= 50; ++a)
        for (int64_t b = -50; b <= 50; ++b, ++n) {
            const BiDeg d{a, b};
            if (r_dim(d, true) != kt_dim(d) + kt_dim(d - kSigmaDeg)) fail(v, "two copies fail at " + to_string(d));
        }
    for (bool inv : {false, true}) {
        auto sigma = parse_eta_local("sigma", inv), eta = parse_eta_local("eta", inv);
        if (!(sigma * sigma).is_zero()) fail(v, "sigma^2 != 0");
        if (!(eta * sigma * sigma).is_zero()) fail(v, "eta sigma^2 != 0");
        for (const char* t : {"1", "eta^3 * sigma + mu9", "sigma * mu9^2 + eta^-4"}) {
            auto x = parse_eta_local(t, inv);
            if (!(x + x).is_zero()) fail(v, std::string("2x != 0 for ") + t);
        }
    }
    if (v.pass) v.detail = std::to_string(n) + " bidegrees, relations hold";
    return v;
}

Verdict c3() {
    Verdict v;
    size_t checked = 0;
    for (uint64_t q : acceptance_q()) {
        const GaloisField& G = galois_field(q);
        std::set<std::string> classes;
        for (const auto& [form, raw] : small_forms(q)) {
            ++checked;
            const WittClass w = witt_class(form);
            classes.insert(to_string(w));
            const std::string tag = "F" + std::to_string(q) + ":" + to_string(form);
            // brute-force order: n copies, hyperbolic by rank and determinant
            std::optional<uint64_t> order;
            for (uint64_t n = 1; n <= 8 && !order; ++n)
                if (oracle::hyperbolic(G, oracle::scaled(raw, n))) order = n;
            const TorsionInfo t = is_torsion(w);
            if (t.torsion != order.has_value() || t.order != order) fail(v, "torsion order at " + tag);
            // brute-force nilpotence exponent from explicit tensor powers
            std::optional<int> exponent;
            oracle::ElementForm p = raw;
            for (int e = 1; e <= 8 && !exponent; ++e) {
                if (oracle::hyperbolic(G, p)) exponent = e;
                else p = oracle::tensor(G, p, raw);
            }
            const NilpotenceInfo ni = is_nilpotent(w);
            if (ni.nilpotent != exponent.has_value() || (exponent && ni.exponent != exponent))
                fail(v, "nilpotence exponent at " + tag);
            if (form.rank() % 2 == 0 && order && (!exponent || *exponent > 2))
                fail(v, "even-rank torsion class without exponent <= 2 at " + tag);
        }
        if (classes.size() != 4) fail(v, "W(F" + std::to_string(q) + ") does not have 4 classes");
        if (is_nilpotent(witt_one(FieldSpec::finite(q))).nilpotent) fail(v, "<1> nilpotent over F" + std::to_string(q));
    }
    if (v.pass) v.detail = std::to_string(checked) + " forms over 6 fields";
    return v;
}

Verdict c4() {
    Verdict v;
    const auto Q = FieldSpec::rationals();
    std::mt19937_64 rng(20240601);
    size_t torsion = 0;
    for (int i = 0; i < 200; ++i) {
        const int rank = 1 + static_cast<int>(rng() % 6);
        const auto entries = oracle::random_squarefree_entries(rng, rank, 50);
        const DiagonalForm f = diagonal(Q, entries);
        int64_t sig = 0;
        for (auto e : entries) sig += e > 0 ? 1 : -1;
        const bool t = is_torsion(witt_class(f)).torsion;
        const DiagonalForm four = orthogonal_sum(orthogonal_sum(f, f), orthogonal_sum(f, f));
        const bool h = oracle::hyperbolic_by_invariants(four);
        if (t != (sig == 0) || h != (sig == 0)) fail(v, "disagreement at " + to_string(f));
        torsion += t;
    }
    if (v.pass) v.detail = "200 forms, " + std::to_string(torsion) + " torsion";
    return v;
}

Verdict c5() {
    Verdict v;
    const auto Q = FieldSpec::rationals();
    std::mt19937_64 rng(5150);
    size_t even = 0;
    for (int i = 0; i < 50; ++i) {
        const int k = 1 + static_cast<int>(rng() % 3);
        MilnorElt alpha = milnor_zero(Q, 1);
        for (int j = 0; j < k; ++j) {
            int64_t a = 0;
            while (a == 0) a = static_cast<int64_t>(rng() % 101) - 50;
            alpha = alpha + milnor_symbol(Q, {make_unit(Q, a)});
        }
        const std::string tag = to_string(alpha);
        PowerForm pf = lemma_power_form(alpha);
        if (pf.m < 1 || pf.m > k + 1) fail(v, "m out of range for " + tag);
        const MilnorElt diff = km_pow(alpha, pf.m) - km_mul(minus_one_power(Q, 1), pf.gamma);
        if (!km_normal_form(diff).is_zero()) fail(v, "alpha^m - {-1}gamma != 0 for " + tag);
        if (km_mod2(km_pow(alpha, k)).is_zero()) {
            ++even;
            if (!km_normal_form(km_pow(alpha, pf.m + k)).is_zero()) fail(v, "alpha^(m+k) != 0 for " + tag);
        }
    }
    if (v.pass) v.detail = "50 elements, " + std::to_string(even) + " with even alpha^k";
    return v;
}

Verdict c6() {
    Verdict v;
    size_t n = 0;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull})
        for (unsigned i = 1; i <= 8; ++i)
            for (uint64_t u = 1; u <= 20; ++u) {
                if (u % p == 0) continue;
                ++n;
                if (!binom_valuation(p, i, u).satisfies_bound)
                    fail(v, "valuation bound at p=" + std::to_string(p) + " i=" + std::to_string(i));
            }
    if (nishida_exponent_bound(2, 1, 4).N != 13) fail(v, "bound(2,1,4) != 13");
    auto a = kp_bidegrees(2, 4, 1, 1, 1);
    if (a.map_bidegree != BiDeg{9, 3} || a.target_sphere != BiDeg{8, 2}) fail(v, "kp (9,3)/(8,2)");
    auto b = kp_bidegrees(2, 576, 320, 9, 5);
    if (b.map_bidegree != BiDeg{1161, 645} || b.target_sphere != BiDeg{1152, 640}) fail(v, "kp (1161,645)/(1152,640)");
    if (v.pass) v.detail = std::to_string(n) + " valuations, bound 13, both bidegree pairs";
    return v;
}

Verdict c7() {
    Verdict v;
    std::vector<std::string> two_eta_nonzero;
    for (const auto& F : supported_fields()) {
        const std::string name = F.name();
        const MWElt eta = mw_eta(F);
        if (!mw_is_zero(mw_mul(mw_one(F) - mw_epsilon(F), eta))) fail(v, "(1-eps)eta != 0 over " + name);
        if (gw_epsilon(F) * gw_epsilon(F) != gw_one(F)) fail(v, "eps^2 != 1 over " + name);
        MWElt p = eta;
        for (int n = 1; n <= 64; ++n) {
            if (mw_is_zero(p)) fail(v, "eta^" + std::to_string(n) + " = 0 over " + name);
            p = mw_mul(p, eta);
        }
        if (!is_formally_real(F) && !mw_is_zero(2 * eta)) two_eta_nonzero.push_back(name);
    }
    const auto R = FieldSpec::reals();
    for (int n = 1; n <= 32; ++n)
        if (km_mod2(minus_one_power(R, n)).is_zero()) fail(v, "{-1}^" + std::to_string(n) + " = 0 in k^M(R)");
    if (!two_eta_nonzero.empty()) {
        std::string list;
        for (const auto& s : two_eta_nonzero) list += (list.empty() ? "" : ",") + s;
        const auto F3 = FieldSpec::finite(3);
        fail(v, "2eta != 0 over " + list + " (e.g. F3: 2eta = " + to_string(mw_mul(mw_from_gw(2 * gw_one(F3)), mw_eta(F3))) +
                    ", W(F3) = Z/4; 2eta = 0 holds exactly when -1 is a square)");
    }
    if (v.pass) v.detail = std::to_string(supported_fields().size()) + " fields";
    return v;
}

Verdict c8() {
    Verdict v;
    for (uint64_t q : acceptance_q()) {
        const GaloisField& G = galois_field(q);
        const auto forms = small_forms(q);
        // (witt, rank) -> one preimage (i, j) meaning forms[i] - forms[j]
        std::map<std::pair<std::string, int64_t>, std::pair<size_t, size_t>> image;
        for (size_t i = 0; i < forms.size(); ++i)
            for (size_t j = 0; j < forms.size(); ++j) {
                const GWClass x = gw_class(forms[i].first) - gw_class(forms[j].first);
                if (x.rank < -8 || x.rank > 8) continue;
                if ((static_cast<int64_t>(x.witt.aniso.rank()) - x.rank) % 2 != 0)
                    fail(v, "rank parity mismatch over F" + std::to_string(q));
                auto key = std::make_pair(to_string(x.witt), x.rank);
                auto it = image.find(key);
                if (it == image.end()) {
                    image[key] = {i, j};
                    continue;
                }
                // fi - fj = fk - fl in GW iff fi + fl and fk + fj agree in rank and determinant
                auto [k, l] = it->second;
                oracle::ElementForm s1 = forms[i].second, s2 = forms[k].second;
                for (auto [a, c] : forms[l].second) s1[a] += c;
                for (auto [a, c] : forms[j].second) s2[a] += c;
                const bool same = oracle::form_rank(s1) == oracle::form_rank(s2) &&
                                  oracle::is_square(G, G.mul(oracle::form_det(G, s1), G.inv(oracle::form_det(G, s2))));
                if (!same) fail(v, "two GW classes share (witt, rank) over F" + std::to_string(q));
            }
        // W x_{Z/2} Z with |rank| <= 8: two Witt classes per rank parity, 17 ranks
        if (image.size() != 34) fail(v, "image has " + std::to_string(image.size()) + " points over F" + std::to_string(q));
    }
    if (v.pass) v.detail = "34 points per field, 6 fields";
    return v;
}

} // namespace

int main(int argc, char** argv) {
    // --only N runs a single criterion
    size_t only = 0;
    if (argc == 3 && std::string(argv[1]) == "--only") only = std::stoul(argv[2]);
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"eta-local window [-50,50]^2: surjective, kernel = KT shifted by (7,4), < 5s", c1},
        {"two copies of KT and relations sigma^2 = eta sigma^2 = 2x = 0", c2},
        {"W(F_q) exhaustive torsion orders and nilpotence exponents, < 30s", c3},
        {"Pfister criterion over Q on 200 random forms", c4},
        {"power forms of sums of symbols in K^M_1(Q)", c5},
        {"valuations, exponent bound and extended power bidegrees", c6},
        {"eta dossier", c7},
        {"GW(F_q) = W x_{Z/2} Z for |rank| <= 8", c8},
    };
    const double limits[] = {5.0, 0, 30.0, 0, 0, 0, 0, 0};
    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        if (only && only != i + 1) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (limits[i] > 0 && secs >= limits[i]) fail(v, "too slow");
        failures += !v.pass;
        std::printf("%s criterion %zu: %s [%s] (%.2fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    v.detail.c_str(), secs);
    }
    return failures == 0 ? 0 : 1;
}
