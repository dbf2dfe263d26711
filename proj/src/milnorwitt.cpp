#include "zeroline/milnorwitt.hpp"

#include <algorithm>
#include <cstdlib>
#include <cctype>
#include <random>
#include <sstream>

namespace zeroline {

namespace {

void require_same(const FieldSpec& a, const FieldSpec& b) {
    if (a != b) throw DomainError("field mismatch: " + a.name() + " vs " + b.name());
}

int64_t integer_part(const MilnorElt& x) { return km_normal_form(x).integer; }

WittClass bracket(const Unit& a) {
    return witt_class(DiagonalForm{a.field, {square_class(a)}}) - witt_one(a.field);
}

} // namespace

MWElt mw_make(int degree, const MilnorElt& alpha, const WittClass& phi) {
    const FieldSpec& F = phi.field;
    require_same(F, alpha.field);
    MilnorElt a = alpha;
    if (a.terms.empty()) a = milnor_zero(F, degree);
    if (a.degree != degree)
        throw IncompatiblePair("Milnor part has degree " + std::to_string(a.degree) + ", expected " +
                               std::to_string(degree));
    if (degree < 0) {
        if (!km_normal_form(a).is_zero()) throw IncompatiblePair("K^M vanishes in negative degrees");
        return MWElt{F, degree, milnor_zero(F, degree), phi};
    }
    if (degree == 0) {
        const int64_t rank = integer_part(a);
        if (((rank % 2) + 2) % 2 != static_cast<int64_t>(phi.rank() % 2))
            throw IncompatiblePair("rank " + std::to_string(rank) + " and Witt class " + to_string(phi) +
                                   " have different parity");
        return MWElt{F, 0, milnor_integer(F, rank), phi};
    }
    if (!in_fundamental_power(phi, degree))
        throw IncompatiblePair(to_string(phi) + " is not in I^" + std::to_string(degree));
    const MilnorNF lhs = km_mod2(a);
    const MilnorNF rhs = en_invariant(phi, degree);
    if (!(lhs == rhs))
        throw IncompatiblePair("images in k^M_" + std::to_string(degree) + " differ: " + to_string(lhs) + " vs " +
                               to_string(rhs));
    return MWElt{F, degree, reduce(a), phi};
}

MWElt mw_negative(int degree, const WittClass& phi) {
    if (degree >= 0) throw DomainError("mw_negative: degree must be negative");
    return MWElt{phi.field, degree, milnor_zero(phi.field, degree), phi};
}

MWElt mw_from_gw(const GWClass& x) { return MWElt{x.field(), 0, milnor_integer(x.field(), x.rank), x.witt}; }

GWClass mw_to_gw(const MWElt& x) {
    if (x.degree != 0) throw DomainError("mw_to_gw: element is not in degree 0");
    return gw_make(x.w, integer_part(x.km));
}

MWElt mw_zero(const FieldSpec& field, int degree) {
    return MWElt{field, degree, milnor_zero(field, degree), witt_zero(field)};
}

MWElt mw_one(const FieldSpec& field) { return mw_from_gw(gw_one(field)); }

MWElt mw_eta(const FieldSpec& field) { return mw_negative(-1, witt_one(field)); }

MWElt mw_epsilon(const FieldSpec& field) { return mw_from_gw(gw_epsilon(field)); }

MWElt mw_hyperbolic(const FieldSpec& field) { return mw_from_gw(gw_hyperbolic(field)); }

MWElt mw_unit(const Unit& a) { return mw_make(1, milnor_symbol(a.field, {a}), bracket(a)); }

MWElt mw_lift(const MilnorElt& alpha) {
    const FieldSpec& F = alpha.field;
    if (alpha.degree < 0) return mw_zero(F, alpha.degree);
    WittClass phi = witt_zero(F);
    for (const auto& [sym, c] : alpha.terms) {
        WittClass term = witt_one(F);
        for (const auto& u : sym.entries) term = term * bracket(u);
        phi = phi + c * term;
    }
    return mw_make(alpha.degree, alpha, phi);
}

bool mw_is_zero(const MWElt& x) { return x.w.is_zero() && km_normal_form(x.km).is_zero(); }

bool mw_equal(const MWElt& x, const MWElt& y) {
    return x.field == y.field && x.degree == y.degree && x.w == y.w && km_equal(x.km, y.km);
}

MWElt operator+(const MWElt& x, const MWElt& y) {
    require_same(x.field, y.field);
    if (x.degree != y.degree) throw DomainError("cannot add elements of different degrees");
    return MWElt{x.field, x.degree, x.km + y.km, x.w + y.w};
}

MWElt operator-(const MWElt& x) { return MWElt{x.field, x.degree, -x.km, -x.w}; }

MWElt operator-(const MWElt& x, const MWElt& y) { return x + (-y); }

MWElt operator*(int64_t k, const MWElt& x) { return MWElt{x.field, x.degree, k * x.km, k * x.w}; }

MWElt mw_mul(const MWElt& x, const MWElt& y) {
    require_same(x.field, y.field);
    const int d = x.degree + y.degree;
    MilnorElt km = (x.degree < 0 || y.degree < 0) ? milnor_zero(x.field, d) : km_mul(x.km, y.km);
    return MWElt{x.field, d, km, x.w * y.w};
}

MWElt mw_pow(const MWElt& x, int e) {
    if (e < 1) throw DomainError("mw_pow: exponent must be positive");
    MWElt out = x;
    for (int i = 1; i < e; ++i) out = mw_mul(out, x);
    return out;
}

MWElt eta_mul(const MWElt& x) { return mw_mul(mw_eta(x.field), x); }

// ---------------------------------------------------------------------------
// Torsion and nilpotence

MWTorsion mw_is_torsion(const MWElt& x, int cap) {
    MWTorsion out;
    const TorsionInfo wt = is_torsion(x.w, cap);
    std::optional<uint64_t> kt;
    if (x.degree < 0) kt = 1;
    else if (x.degree == 0) kt = integer_part(x.km) == 0 ? std::optional<uint64_t>(1) : std::nullopt;
    else kt = km_order(x.km);
    if (!wt.torsion || !kt) {
        out.torsion = Tri::No;
        return out;
    }
    out.torsion = Tri::Yes;
    out.order = lcm_u64(*wt.order, *kt);
    return out;
}

NilpotenceVerdict mw_is_nilpotent(const MWElt& x, int cap) {
    NilpotenceVerdict v;
    v.cap = cap;
    const MWTorsion t = mw_is_torsion(x, cap);
    v.is_torsion = t.torsion == Tri::Yes;
    v.torsion_order = t.order;

    auto finish_witness = [&](int e) {
        if (!mw_is_zero(mw_pow(x, e))) throw std::logic_error("mw_is_nilpotent: witness failed verification");
        v.witness_exponent = e;
        v.rule_chain.push_back("witness-verified:exponent=" + std::to_string(e));
    };

    if (x.degree < 0) {
        v.rule_chain.push_back("negative-degree-is-witt-class-times-eta-power");
        NilpotenceInfo info = is_nilpotent(x.w, cap);
        v.rule_chain.insert(v.rule_chain.end(), info.rules.begin(), info.rules.end());
        v.is_nilpotent = info.nilpotent ? Tri::Yes : Tri::No;
        if (info.nilpotent) finish_witness(*info.exponent);
        return v;
    }
    if (x.degree == 0) {
        v.rule_chain.push_back("degree-zero-is-grothendieck-witt-ring");
        NilpotenceInfo info = is_nilpotent(mw_to_gw(x), cap);
        v.rule_chain.insert(v.rule_chain.end(), info.rules.begin(), info.rules.end());
        v.is_nilpotent = info.nilpotent ? Tri::Yes : Tri::No;
        if (info.nilpotent) finish_witness(*info.exponent);
        return v;
    }

    if (v.is_torsion) v.rule_chain.push_back("torsion-pair-has-even-rank-torsion-witt-part");
    NilpotenceInfo wi = is_nilpotent(x.w, cap);
    for (const auto& r : wi.rules) v.rule_chain.push_back("witt-part: " + r);
    NilpotenceVerdict ki = km_is_nilpotent(x.km, cap);
    for (const auto& r : ki.rule_chain) v.rule_chain.push_back("milnor-part: " + r);
    if (!wi.nilpotent || ki.is_nilpotent == Tri::No) {
        v.is_nilpotent = Tri::No;
        v.rule_chain.push_back("pair-nilpotent-iff-both-parts-are");
        return v;
    }
    if (ki.is_nilpotent == Tri::Unknown) {
        v.is_nilpotent = Tri::Unknown;
        v.rule_chain.push_back("milnor-part-undecided");
        return v;
    }
    v.is_nilpotent = Tri::Yes;
    v.rule_chain.push_back("pair-nilpotent-iff-both-parts-are");
    finish_witness(std::max(*wi.exponent, *ki.witness_exponent));
    return v;
}

// ---------------------------------------------------------------------------
// Scans

namespace {

std::vector<WittClass> witt_elements_finite(const FieldSpec& F) {
    const auto g = representative(SquareClass{F, 1, {}, true});
    std::vector<WittClass> out;
    for (const auto& f : {DiagonalForm{F, {}}, DiagonalForm{F, {trivial_class(F)}},
                          DiagonalForm{F, {square_class(g)}},
                          DiagonalForm{F, {trivial_class(F), square_class(g)}},
                          DiagonalForm{F, {trivial_class(F), trivial_class(F)}}}) {
        WittClass w = witt_class(f);
        if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
    }
    return out;
}

std::vector<MWElt> compatible_pairs(int degree, const std::vector<MilnorElt>& alphas,
                                    const std::vector<WittClass>& phis) {
    std::vector<MWElt> out;
    for (const auto& a : alphas)
        for (const auto& p : phis) {
            try {
                out.push_back(mw_make(degree, a, p));
            } catch (const IncompatiblePair&) {
            }
        }
    return out;
}

std::vector<MWElt> enumerate_elements(const FieldSpec& F, int n, const ScanOptions& o, std::string& how) {
    std::vector<MWElt> out;
    const int B = o.rank_bound;
    std::vector<WittClass> ws;
    if (F.kind == FieldKind::FiniteField) {
        ws = witt_elements_finite(F);
        how = "all of W(F_q)";
    } else if (F.kind == FieldKind::Complexes) {
        ws = {witt_zero(F), witt_one(F)};
        how = "all of W(C)";
    } else {
        for (int s = -B; s <= B; ++s) ws.push_back(s * witt_one(F));
        how = "signatures in [-" + std::to_string(B) + "," + std::to_string(B) + "]";
    }
    if (n < 0) {
        for (const auto& w : ws) out.push_back(mw_negative(n, w));
        return out;
    }
    if (n == 0) {
        for (const auto& w : ws)
            for (int r = -B; r <= B; ++r)
                if (((r % 2) + 2) % 2 == static_cast<int>(w.rank() % 2))
                    out.push_back(mw_from_gw(gw_make(w, r)));
        how += ", ranks in [-" + std::to_string(B) + "," + std::to_string(B) + "]";
        return out;
    }
    std::vector<MilnorElt> alphas{milnor_zero(F, n)};
    if (F.kind == FieldKind::FiniteField) {
        if (n == 1) {
            const GaloisField& G = galois_field(F.q);
            uint64_t x = 1;
            for (uint64_t i = 0; i + 1 < F.q; ++i) {
                if (x != 1) alphas.push_back(milnor_symbol(F, {parse_unit(F, std::to_string(x))}));
                x = G.mul(x, G.primitive());
            }
            how = "all of K^MW_1(F_q)";
        } else {
            how = "K^MW_n(F_q) = 0";
        }
    } else {
        if (n == 1) {
            for (int64_t a : {-1, 2, -2, 3, -3, 6, -6})
                alphas.push_back(milnor_symbol(F, {make_unit(F, a)}));
            how += ", symbols {a} with a in {-1,+-2,+-3,+-6}";
        } else {
            alphas.push_back(minus_one_power(F, n));
            alphas.push_back(milnor_symbol(F, std::vector<Unit>(static_cast<size_t>(n), make_unit(F, -2))));
            how += ", Milnor parts 0, {-1}^n, {-2}^n";
        }
    }
    std::vector<WittClass> phis;
    for (const auto& w : ws)
        if (in_fundamental_power(w, n)) phis.push_back(w);
    if (F.kind == FieldKind::Reals) {
        phis.clear();
        const int64_t step = int64_t{1} << std::min(n, 40);
        for (int k = -2; k <= 2; ++k) phis.push_back((k * step) * witt_one(F));
        how += ", Witt parts 2^n k with |k| <= 2";
    }
    return compatible_pairs(n, alphas, phis);
}

std::vector<MWElt> sample_rationals(int n, const ScanOptions& o, std::string& how) {
    const auto Q = FieldSpec::rationals();
    std::mt19937_64 rng(o.seed);
    const std::vector<int64_t> pool{-1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10};
    auto pick = [&]() { return pool[rng() % pool.size()]; };
    std::vector<MWElt> out;
    for (size_t i = 0; i < o.samples; ++i) {
        if (n < 0 || n == 0) {
            std::vector<int64_t> e;
            const size_t rank = 1 + rng() % 4;
            for (size_t j = 0; j < rank; ++j) e.push_back(pick());
            GWClass g = gw_class(diagonal(Q, e));
            if (rng() % 2) g = g - static_cast<int64_t>(rank) * gw_one(Q);
            if (n < 0) out.push_back(mw_negative(n, g.witt));
            else out.push_back(mw_from_gw(g));
        } else {
            std::vector<Unit> entries;
            for (int j = 0; j < n; ++j) entries.push_back(make_unit(Q, pick()));
            out.push_back(mw_lift(milnor_symbol(Q, entries)));
        }
    }
    how = n > 0 ? "random lifts of symbols with entries in {-1,+-2,...,+-10}"
                : "random diagonal forms of rank <= 4, optionally minus their rank";
    return out;
}

// Iterates stop once the anisotropic part outgrows kSizeLimit: such an
// iterate is nonzero, and so are its successors.
constexpr size_t kSizeLimit = 64;

std::optional<uint64_t> brute_order(const MWElt& x, uint64_t limit) {
    MWElt y = x;
    for (uint64_t k = 1; k <= limit; ++k) {
        if (mw_is_zero(y)) return k;
        if (y.w.rank() > kSizeLimit) break;
        y = y + x;
    }
    return std::nullopt;
}

std::optional<int> brute_nilpotence(const MWElt& x, int limit) {
    MWElt y = x;
    for (int e = 1; e <= limit; ++e) {
        if (mw_is_zero(y)) return e;
        if (y.w.rank() * std::max<size_t>(x.w.rank(), 1) > kSizeLimit || y.km.terms.size() > kSizeLimit) break;
        if (y.degree == 0 && std::abs(integer_part(y.km)) > (int64_t{1} << 24)) break;
        if (e < limit) y = mw_mul(y, x);
    }
    return std::nullopt;
}

} // namespace

ScanReport nishida_scan(const FieldSpec& field, int degree, const ScanOptions& options) {
    ScanReport rep;
    rep.field = field;
    rep.degree = degree;
    rep.sampled = field.kind == FieldKind::Rationals;
    std::vector<MWElt> elements = rep.sampled ? sample_rationals(degree, options, rep.enumeration)
                                              : enumerate_elements(field, degree, options, rep.enumeration);
    if (elements.size() > options.budget) {
        elements.resize(options.budget);
        rep.budget_exhausted = true;
    }
    const uint64_t order_limit = 4 * static_cast<uint64_t>(options.cap) +
                                 (field.is_finite() ? std::min<uint64_t>(field.q, 1u << 12) : 0);
    // symbol powers over Q grow with the exponent; their brute check stops early
    const int nil_limit = (rep.sampled && degree > 0) ? std::min(options.cap, 8) : options.cap;
    constexpr size_t kExamples = 16;
    for (const auto& x : elements) {
        ++rep.checked;
        const MWTorsion t = mw_is_torsion(x, options.cap);
        const NilpotenceVerdict v = mw_is_nilpotent(x, options.cap);
        const auto bo = brute_order(x, order_limit);
        const auto bn = brute_nilpotence(x, nil_limit);
        bool agree = true;
        if (t.torsion == Tri::Yes) agree &= bo.has_value() && *bo == *t.order;
        else if (t.torsion == Tri::No) agree &= !bo.has_value();
        if (v.is_nilpotent == Tri::Yes) agree &= bn.has_value() && *bn == *v.witness_exponent;
        else if (v.is_nilpotent == Tri::No) agree &= !bn.has_value();
        if (!agree) {
            ++rep.disagreements;
            if (rep.disagreement_examples.size() < kExamples) rep.disagreement_examples.push_back(to_string(x));
        }
        if (t.torsion == Tri::Yes) ++rep.torsion;
        if (v.is_nilpotent == Tri::Yes) ++rep.nilpotent;
        if (t.torsion == Tri::Yes && v.is_nilpotent == Tri::No) {
            ++rep.counterexamples;
            if (rep.counterexample_examples.size() < kExamples) rep.counterexample_examples.push_back(to_string(x));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Literals

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

MWElt parse_mw(std::string_view text) {
    text = trim(text);
    if (text.substr(0, 3) != "MW(" || text.back() != ')')
        throw DomainError("MW literal must look like MW(<field>, <degree>; ...)");
    std::string_view body = text.substr(3, text.size() - 4);
    const size_t comma = body.find(',');
    const size_t semi = body.find(';');
    if (comma == std::string_view::npos || semi == std::string_view::npos || comma > semi)
        throw DomainError("MW literal must look like MW(<field>, <degree>; ...)");
    const FieldSpec F = parse_field(trim(body.substr(0, comma)));
    const std::string deg_text(trim(body.substr(comma + 1, semi - comma - 1)));
    int degree = 0;
    try {
        size_t used = 0;
        degree = std::stoi(deg_text, &used);
        if (used != deg_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw DomainError("bad MW degree '" + deg_text + "'");
    }
    if (degree < -4096 || degree > 4096) throw Unsupported("MW degree out of range");
    std::string_view payload = trim(body.substr(semi + 1));
    if (degree > 0) {
        const size_t bar = payload.find('|');
        if (bar == std::string_view::npos) throw DomainError("positive-degree MW literal needs '<milnor> | <witt>'");
        MilnorElt a = parse_milnor(F, trim(payload.substr(0, bar)));
        WittClass w = parse_gw(F, trim(payload.substr(bar + 1))).witt;
        return mw_make(degree, a, w);
    }
    if (payload.find('|') != std::string_view::npos)
        throw DomainError("MW literals of degree <= 0 take a single W or GW class");
    GWClass g = parse_gw(F, payload);
    if (degree == 0) return mw_from_gw(g);
    return mw_negative(degree, g.witt);
}

std::string to_string(const MWElt& x) {
    std::ostringstream os;
    os << "MW(" << x.field.name() << ", " << x.degree << "; ";
    if (x.degree > 0) os << to_string(x.km) << " | " << to_string(x.w);
    else if (x.degree == 0) os << to_string(mw_to_gw(x));
    else os << to_string(x.w);
    os << ")";
    return os.str();
}

} // namespace zeroline
