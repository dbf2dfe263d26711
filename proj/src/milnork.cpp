#include "zeroline/milnork.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace zeroline {

namespace {

void require_same(const FieldSpec& a, const FieldSpec& b) {
    if (a != b) throw DomainError("field mismatch: " + a.name() + " vs " + b.name());
}

int64_t mod_floor(int64_t a, int64_t m) {
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

bool contains_minus_one(const Symbol& s) {
    return std::any_of(s.entries.begin(), s.entries.end(), [](const Unit& u) { return is_minus_one(u); });
}

// Rewrites one symbol; nullopt when it vanishes.
std::optional<Symbol> rewrite(Symbol s) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& a : s.entries)
            if (is_one(a)) return std::nullopt;
        const size_t n = s.entries.size();
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                const Unit& a = s.entries[i];
                const Unit& b = s.entries[j];
                if (!sum(a, b)) return std::nullopt; // {a, -a}
                auto c = one_minus(a);
                if (c && *c == b) return std::nullopt; // {a, 1-a}
            }
        }
        for (size_t i = 0; i < n && !changed; ++i) {
            if (is_minus_one(s.entries[i])) continue;
            for (size_t j = i + 1; j < n; ++j) {
                if (s.entries[j] == s.entries[i]) {
                    s.entries[j] = minus_one(s.entries[i].field);
                    changed = true;
                    break;
                }
            }
        }
    }
    if (contains_minus_one(s)) {
        std::stable_partition(s.entries.begin(), s.entries.end(), [](const Unit& u) { return is_minus_one(u); });
    }
    return s;
}

} // namespace

MilnorElt milnor_zero(const FieldSpec& field, int degree) { return MilnorElt{field, degree, {}}; }

MilnorElt milnor_integer(const FieldSpec& field, int64_t n) {
    MilnorElt x = milnor_zero(field, 0);
    if (n != 0) x.terms[Symbol{}] = n;
    return x;
}

MilnorElt milnor_symbol(const FieldSpec& field, const std::vector<Unit>& entries, int64_t coeff) {
    for (const auto& u : entries) require_same(field, u.field);
    MilnorElt x = milnor_zero(field, static_cast<int>(entries.size()));
    if (coeff != 0) x.terms[Symbol{entries}] = coeff;
    return reduce(x);
}

MilnorElt minus_one_power(const FieldSpec& field, int n) {
    return milnor_symbol(field, std::vector<Unit>(static_cast<size_t>(n), minus_one(field)));
}

MilnorElt reduce(const MilnorElt& x) {
    MilnorElt out = milnor_zero(x.field, x.degree);
    if (x.degree < 0) return out;
    for (const auto& [sym, c] : x.terms) {
        if (c == 0) continue;
        auto r = rewrite(sym);
        if (r) out.terms[*r] += c;
    }
    for (auto it = out.terms.begin(); it != out.terms.end();) {
        if (contains_minus_one(it->first)) it->second = mod_floor(it->second, 2);
        if (it->second == 0) it = out.terms.erase(it);
        else ++it;
    }
    return out;
}

MilnorElt operator+(const MilnorElt& x, const MilnorElt& y) {
    require_same(x.field, y.field);
    if (x.degree != y.degree) throw DomainError("cannot add Milnor elements of different degrees");
    MilnorElt out = x;
    for (const auto& [s, c] : y.terms) out.terms[s] += c;
    return reduce(out);
}

MilnorElt operator-(const MilnorElt& x) { return (-1) * x; }

MilnorElt operator-(const MilnorElt& x, const MilnorElt& y) { return x + (-y); }

MilnorElt operator*(int64_t k, const MilnorElt& x) {
    MilnorElt out = x;
    for (auto& [s, c] : out.terms) c *= k;
    return reduce(out);
}

MilnorElt km_mul(const MilnorElt& x, const MilnorElt& y) {
    require_same(x.field, y.field);
    MilnorElt out = milnor_zero(x.field, x.degree + y.degree);
    if (x.degree < 0 || y.degree < 0) return out;
    for (const auto& [sx, cx] : x.terms) {
        for (const auto& [sy, cy] : y.terms) {
            Symbol s = sx;
            s.entries.insert(s.entries.end(), sy.entries.begin(), sy.entries.end());
            out.terms[s] += cx * cy;
        }
    }
    return reduce(out);
}

MilnorElt km_pow(const MilnorElt& x, int e) {
    if (e < 1) throw DomainError("km_pow: exponent must be positive");
    MilnorElt out = x;
    for (int i = 1; i < e; ++i) out = km_mul(out, x);
    return out;
}

// ---------------------------------------------------------------------------
// Normal forms

namespace {

struct LocalUnit {
    int64_t valuation = 0;
    uint64_t residue = 1; // unit part modulo p
};

LocalUnit localize(const Unit& a, uint64_t p) {
    LocalUnit out;
    uint64_t r = a.sign < 0 ? p - 1 : 1;
    for (const auto& f : a.factors) {
        if (f.prime == p) {
            out.valuation = f.exp;
            continue;
        }
        uint64_t base = f.prime % p;
        if (f.exp < 0) base = invmod(base, p);
        r = mulmod(r, powmod(base, static_cast<uint64_t>(f.exp < 0 ? -f.exp : f.exp), p), p);
    }
    out.residue = r;
    return out;
}

uint64_t pow_signed(uint64_t base, int64_t e, uint64_t p) {
    if (e < 0) {
        base = invmod(base, p);
        e = -e;
    }
    return powmod(base, static_cast<uint64_t>(e), p);
}

// tame symbol at an odd prime
uint64_t tame_symbol(const Unit& a, const Unit& b, uint64_t p) {
    LocalUnit la = localize(a, p), lb = localize(b, p);
    uint64_t r = mulmod(pow_signed(la.residue, lb.valuation, p), pow_signed(lb.residue, -la.valuation, p), p);
    if ((la.valuation * lb.valuation) % 2 != 0) r = (p - r) % p;
    return r;
}

int negative_product(const Symbol& s) {
    int bit = 1;
    for (const auto& u : s.entries)
        if (u.sign > 0) bit = 0;
    return bit;
}

void add_exponents(MilnorNF& nf, const Unit& u, int64_t c) {
    for (const auto& f : u.factors) nf.exponents[f.prime] += c * f.exp;
}

void prune(MilnorNF& nf) {
    for (auto it = nf.exponents.begin(); it != nf.exponents.end();) {
        if (it->second == 0) it = nf.exponents.erase(it);
        else ++it;
    }
    for (auto it = nf.tame.begin(); it != nf.tame.end();) {
        if (it->second == 1 && !nf.mod2) it = nf.tame.erase(it);
        else if (it->second == 0 && nf.mod2) it = nf.tame.erase(it);
        else ++it;
    }
    nf.sign = static_cast<int>(mod_floor(nf.sign, 2));
    nf.two_adic = static_cast<int>(mod_floor(nf.two_adic, 2));
}

} // namespace

bool MilnorNF::is_zero() const {
    return integer == 0 && sign == 0 && two_adic == 0 && residue == 0 && exponents.empty() && tame.empty();
}

MilnorNF zero_nf(const FieldSpec& field, int degree, bool mod2) {
    MilnorNF nf;
    nf.field = field;
    nf.degree = degree;
    nf.mod2 = mod2;
    return nf;
}

MilnorNF km_normal_form(const MilnorElt& x) {
    MilnorNF nf = zero_nf(x.field, x.degree, false);
    const int n = x.degree;
    if (n < 0) return nf;
    if (n == 0) {
        for (const auto& [s, c] : x.terms) nf.integer += c;
        return nf;
    }
    const auto& F = x.field;
    switch (F.kind) {
    case FieldKind::Rationals:
        if (n == 1) {
            for (const auto& [s, c] : x.terms) {
                if (s.entries[0].sign < 0) nf.sign += static_cast<int>(mod_floor(c, 2));
                add_exponents(nf, s.entries[0], c);
            }
        } else if (n == 2) {
            for (const auto& [s, c] : x.terms) {
                const Unit& a = s.entries[0];
                const Unit& b = s.entries[1];
                if (hilbert_symbol(square_class(a), square_class(b), Place::at(2)) < 0)
                    nf.two_adic += static_cast<int>(mod_floor(c, 2));
                std::vector<uint64_t> primes;
                for (const auto& f : a.factors) primes.push_back(f.prime);
                for (const auto& f : b.factors) primes.push_back(f.prime);
                std::sort(primes.begin(), primes.end());
                primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
                for (uint64_t p : primes) {
                    if (p == 2) continue;
                    uint64_t t = pow_signed(tame_symbol(a, b, p), c, p);
                    auto [it, fresh] = nf.tame.emplace(p, 1);
                    it->second = mulmod(it->second, t, p);
                }
            }
        } else {
            for (const auto& [s, c] : x.terms) nf.sign += negative_product(s) * static_cast<int>(mod_floor(c, 2));
        }
        break;
    case FieldKind::Reals:
    case FieldKind::Complexes:
        if (n == 1) {
            for (const auto& [s, c] : x.terms) {
                if (s.entries[0].sign < 0) nf.sign += static_cast<int>(mod_floor(c, 2));
                add_exponents(nf, s.entries[0], c);
            }
        } else if (F.kind == FieldKind::Reals) {
            for (const auto& [s, c] : x.terms) nf.sign += negative_product(s) * static_cast<int>(mod_floor(c, 2));
        }
        break;
    case FieldKind::FiniteField:
        if (n == 1) {
            const auto& gf = galois_field(F.q);
            const int64_t m = static_cast<int64_t>(F.q - 1);
            int64_t r = 0;
            for (const auto& [s, c] : x.terms)
                r = mod_floor(r + mod_floor(c, m) * static_cast<int64_t>(gf.log(s.entries[0].rep)), m);
            nf.residue = static_cast<uint64_t>(r);
        }
        break;
    }
    prune(nf);
    return nf;
}

MilnorNF reduce_mod2(const MilnorNF& in) {
    if (in.mod2) return in;
    MilnorNF nf = zero_nf(in.field, in.degree, true);
    const int n = in.degree;
    if (n < 0) return nf;
    if (n == 0) {
        nf.integer = mod_floor(in.integer, 2);
        return nf;
    }
    switch (in.field.kind) {
    case FieldKind::Rationals:
        nf.sign = in.sign;
        nf.two_adic = in.two_adic;
        for (auto [p, e] : in.exponents)
            if (mod_floor(e, 2) == 1) nf.exponents[p] = 1;
        for (auto [p, r] : in.tame)
            if (legendre(r, p) < 0) nf.tame[p] = 1;
        break;
    case FieldKind::Reals: nf.sign = in.sign; break;
    case FieldKind::Complexes: break;
    case FieldKind::FiniteField: nf.residue = in.residue % 2; break;
    }
    prune(nf);
    return nf;
}

MilnorNF km_mod2(const MilnorElt& x) { return reduce_mod2(km_normal_form(x)); }

bool km_equal(const MilnorElt& x, const MilnorElt& y) { return km_normal_form(x - y).is_zero(); }

std::optional<uint64_t> km_order(const MilnorElt& x) {
    MilnorNF nf = km_normal_form(x);
    if (nf.is_zero()) return 1;
    if (nf.degree == 0 || !nf.exponents.empty()) return std::nullopt;
    uint64_t order = 1;
    if (nf.sign || nf.two_adic) order = 2;
    if (nf.field.is_finite() && nf.residue != 0) {
        const uint64_t m = nf.field.q - 1;
        order = lcm_u64(order, m / gcd_u64(nf.residue, m));
    }
    for (auto [p, r] : nf.tame) order = lcm_u64(order, multiplicative_order(r, p));
    return order;
}

// ---------------------------------------------------------------------------
// Power procedures

namespace {

// Sign bit of x under K^M_*(F) -> K^M_*(R) -> Z/2[t] (formally real fields).
int real_sign_bit(const MilnorElt& x) {
    int bit = 0;
    for (const auto& [s, c] : x.terms) bit += negative_product(s) * static_cast<int>(mod_floor(c, 2));
    return bit % 2;
}

// Normal form of x^e. Past the degrees where the group is detected by the
// real sign (Q: >= 3, R: >= 2) or vanishes (F_q, C: >= 2), the sign
// homomorphism gives the answer without expanding the power.
MilnorNF power_nf(const MilnorElt& x, int e) {
    const int deg = x.degree * e;
    const auto& F = x.field;
    if (x.degree >= 1) {
        if ((F.kind == FieldKind::FiniteField || F.kind == FieldKind::Complexes) && deg >= 2)
            return zero_nf(F, deg, false);
        if ((F.kind == FieldKind::Rationals && deg >= 3) || (F.kind == FieldKind::Reals && deg >= 2)) {
            MilnorNF nf = zero_nf(F, deg, false);
            nf.sign = real_sign_bit(x);
            return nf;
        }
    }
    return km_normal_form(km_pow(x, e));
}

} // namespace

PowerForm lemma_power_form(const MilnorElt& alpha) {
    if (alpha.degree < 1) throw DomainError("lemma_power_form: degree must be positive");
    const auto& F = alpha.field;
    const int n = alpha.degree;
    PowerForm out;
    out.square_sign = (n % 2 == 0) ? 1 : -1;
    std::vector<std::pair<Symbol, int64_t>> gens(alpha.terms.begin(), alpha.terms.end());
    const size_t k = gens.size();
    MilnorElt gamma = milnor_zero(F, n - 1);

    std::ostringstream head;
    head << "alpha presented as a sum of " << k << " distinct generator(s) of degree " << n;
    out.trace.push_back(head.str());

    const bool all_have_minus_one = std::all_of(gens.begin(), gens.end(), [](const auto& g) {
        return contains_minus_one(g.first);
    });
    if (all_have_minus_one) {
        out.m = 1;
        for (const auto& [s, c] : gens) {
            auto pos = std::find_if(s.entries.begin(), s.entries.end(), [](const Unit& u) { return is_minus_one(u); });
            const int64_t sign = ((pos - s.entries.begin()) % 2 == 0) ? 1 : -1;
            Symbol rest = s;
            rest.entries.erase(rest.entries.begin() + (pos - s.entries.begin()));
            gamma.terms[rest] += sign * c;
        }
        out.trace.push_back("every generator contains {-1}: m = 1");
    } else {
        out.m = static_cast<int>(k) + 1;
        const int m = out.m;
        gamma = milnor_zero(F, n * m - 1);
        std::vector<size_t> seq(static_cast<size_t>(m), 0);
        const auto minus = minus_one(F);
        while (true) {
            int64_t coeff = 1;
            for (size_t idx : seq) coeff *= gens[idx].second;
            size_t p = 0, q = 0;
            bool found = false;
            for (size_t b = 1; b < seq.size() && !found; ++b) {
                for (size_t a = 0; a < b; ++a) {
                    if (seq[a] == seq[b]) {
                        p = a;
                        q = b;
                        found = true;
                        break;
                    }
                }
            }
            if (!found) throw std::logic_error("lemma_power_form: pigeonhole failed");
            // move factor q next to p, square it, pull one {-1} to the front
            int64_t sign = out.square_sign;
            if ((static_cast<int64_t>(n) * n * static_cast<int64_t>(q - p - 1)) % 2 != 0) sign = -sign;
            if ((static_cast<int64_t>(n) * static_cast<int64_t>(p)) % 2 != 0) sign = -sign;
            Symbol term;
            for (size_t a = 0; a < p; ++a)
                term.entries.insert(term.entries.end(), gens[seq[a]].first.entries.begin(), gens[seq[a]].first.entries.end());
            for (int j = 0; j < n - 1; ++j) term.entries.push_back(minus);
            const auto& rep = gens[seq[p]].first.entries;
            term.entries.insert(term.entries.end(), rep.begin(), rep.end());
            for (size_t a = p + 1; a < seq.size(); ++a) {
                if (a == q) continue;
                term.entries.insert(term.entries.end(), gens[seq[a]].first.entries.begin(), gens[seq[a]].first.entries.end());
            }
            gamma.terms[term] += sign * coeff;

            size_t i = 0;
            while (i < seq.size() && ++seq[i] == k) seq[i++] = 0;
            if (i == seq.size()) break;
        }
        std::ostringstream s;
        s << "every monomial of alpha^" << m << " repeats a generator; a^2 = "
          << (out.square_sign > 0 ? "+" : "-") << "{-1}^" << n << " a";
        out.trace.push_back(s.str());
    }
    // {-1} * gamma only depends on gamma mod 2
    gamma = reduce(gamma);
    for (auto it = gamma.terms.begin(); it != gamma.terms.end();) {
        it->second = mod_floor(it->second, 2);
        if (it->second == 0) it = gamma.terms.erase(it);
        else ++it;
    }
    out.gamma = gamma;
    const MilnorNF lhs = power_nf(alpha, out.m);
    const MilnorNF rhs = km_normal_form(km_mul(minus_one_power(F, 1), gamma));
    out.verified = lhs == rhs;
    out.trace.push_back(std::string("normal forms of alpha^m and {-1}*gamma ") + (out.verified ? "agree" : "DIFFER"));
    return out;
}

std::string to_string(Tri t) {
    switch (t) {
    case Tri::No: return "false";
    case Tri::Yes: return "true";
    case Tri::Unknown: return "unknown";
    }
    return "unknown";
}

NilpotenceVerdict km_is_nilpotent(const MilnorElt& alpha, int cap) {
    NilpotenceVerdict v;
    v.cap = cap;
    v.torsion_order = km_order(alpha);
    v.is_torsion = v.torsion_order.has_value();
    const auto& F = alpha.field;

    if (alpha.degree <= 0) {
        const bool zero = km_normal_form(alpha).is_zero();
        v.is_nilpotent = zero ? Tri::Yes : Tri::No;
        if (zero) v.witness_exponent = 1;
        v.rule_chain.push_back(alpha.degree == 0 ? "integers-are-reduced" : "negative-milnor-degree-vanishes");
        return v;
    }

    for (int e = 1; e <= cap; ++e) {
        if (power_nf(alpha, e).is_zero()) {
            v.witness_exponent = e;
            break;
        }
    }
    std::optional<int> mod2_exp;
    for (int e = 1; e <= cap; ++e) {
        if (reduce_mod2(power_nf(alpha, e)).is_zero()) {
            mod2_exp = e;
            break;
        }
    }
    if (mod2_exp) {
        v.rule_chain.push_back("mod2-power-vanishes:k=" + std::to_string(*mod2_exp));
        PowerForm pf = lemma_power_form(alpha);
        v.rule_chain.push_back("power-has-minus-one-factor:m=" + std::to_string(pf.m));
        const int constructed = pf.m + *mod2_exp;
        if (pf.verified && power_nf(alpha, constructed).is_zero()) {
            v.constructed_exponent = constructed;
            v.rule_chain.push_back("two-times-minus-one-vanishes:exponent=" + std::to_string(constructed));
        }
    }
    if (v.witness_exponent) {
        v.is_nilpotent = Tri::Yes;
        v.rule_chain.push_back("witness-verified:exponent=" + std::to_string(*v.witness_exponent));
    } else if (is_formally_real(F) && real_sign_bit(alpha) == 1) {
        v.is_nilpotent = Tri::No;
        v.rule_chain.push_back("real-sign-epimorphism-detects-all-powers");
    } else {
        v.is_nilpotent = Tri::Unknown;
        v.rule_chain.push_back("witness-cap-reached");
    }
    return v;
}

// ---------------------------------------------------------------------------
// Literals

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

int64_t parse_coefficient(std::string_view s) {
    s = trim(s);
    if (s.empty()) throw DomainError("missing coefficient");
    int64_t v = 0;
    for (char ch : s) {
        if (ch < '0' || ch > '9') throw DomainError("bad coefficient '" + std::string(s) + "'");
        v = v * 10 + (ch - '0');
        if (v > (int64_t{1} << 50)) throw Unsupported("coefficient too large");
    }
    return v;
}

} // namespace

GradedMilnor parse_graded_milnor(const FieldSpec& field, std::string_view text) {
    text = trim(text);
    if (text.empty()) throw DomainError("empty Milnor literal");
    GradedMilnor acc{field, {}};
    bool any = false;
    size_t i = 0;
    int64_t sign = 1;
    bool expect_term = true;
    auto add = [&](MilnorElt t) {
        any = true;
        acc = acc + graded(t);
    };
    while (i < text.size()) {
        char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        if (ch == '+' || ch == '-') {
            if (ch == '-') sign = -sign;
            ++i;
            expect_term = true;
            continue;
        }
        if (!expect_term) throw DomainError("expected '+' or '-' in Milnor literal");
        // [coeff *] {entries}  |  integer
        size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        int64_t coeff = 1;
        size_t k = j;
        while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
        if (j > i && (k >= text.size() || text[k] != '*')) {
            add(milnor_integer(field, sign * parse_coefficient(text.substr(i, j - i))));
            i = j;
        } else {
            if (j > i) {
                coeff = parse_coefficient(text.substr(i, j - i));
                i = k + 1;
                while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            }
            if (i >= text.size() || text[i] != '{') throw DomainError("expected '{' in Milnor literal");
            size_t close = text.find('}', i);
            if (close == std::string_view::npos) throw DomainError("unterminated symbol in Milnor literal");
            std::string_view body = trim(text.substr(i + 1, close - i - 1));
            std::vector<Unit> entries;
            if (!body.empty()) {
                size_t start = 0;
                while (true) {
                    size_t comma = body.find(',', start);
                    entries.push_back(parse_unit(field, body.substr(start, comma - start)));
                    if (comma == std::string_view::npos) break;
                    start = comma + 1;
                }
            }
            MilnorElt t = milnor_zero(field, static_cast<int>(entries.size()));
            t.terms[Symbol{entries}] = sign * coeff;
            add(reduce(t));
            i = close + 1;
        }
        sign = 1;
        expect_term = false;
    }
    if (!any || expect_term) throw DomainError("incomplete Milnor literal");
    return acc;
}

MilnorElt parse_milnor(const FieldSpec& field, std::string_view text) {
    GradedMilnor g = parse_graded_milnor(field, text);
    if (g.parts.size() > 1) throw DomainError("Milnor literal mixes degrees");
    if (g.parts.empty()) return milnor_zero(field, 0);
    return g.parts.begin()->second;
}

std::string to_string(const MilnorElt& x) {
    if (x.terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [s, c] : x.terms) {
        int64_t a = c < 0 ? -c : c;
        if (first) os << (c < 0 ? "-" : "");
        else os << (c < 0 ? " - " : " + ");
        first = false;
        if (s.entries.empty()) {
            os << a;
            continue;
        }
        if (a != 1) os << a << "*";
        os << "{";
        for (size_t i = 0; i < s.entries.size(); ++i) os << (i ? "," : "") << to_string(s.entries[i]);
        os << "}";
    }
    return os.str();
}

std::string to_string(const MilnorNF& nf) {
    std::ostringstream os;
    os << (nf.mod2 ? "k^M_" : "K^M_") << nf.degree << "(" << nf.field.name() << ")";
    if (nf.is_zero()) {
        os << " 0";
        return os.str();
    }
    if (nf.degree == 0) os << " integer=" << nf.integer;
    if (nf.sign) os << " sign=1";
    if (nf.two_adic) os << " two_adic=1";
    if (nf.residue) os << " residue=" << nf.residue;
    if (!nf.exponents.empty()) {
        os << " exponents={";
        bool first = true;
        for (auto [p, e] : nf.exponents) {
            os << (first ? "" : ",") << p << ":" << e;
            first = false;
        }
        os << "}";
    }
    if (!nf.tame.empty()) {
        os << " tame={";
        bool first = true;
        for (auto [p, r] : nf.tame) {
            os << (first ? "" : ",") << p << ":" << r;
            first = false;
        }
        os << "}";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Inhomogeneous elements

GradedMilnor graded(const MilnorElt& x) {
    GradedMilnor g{x.field, {}};
    if (!x.terms.empty()) g.parts.emplace(x.degree, x);
    return g;
}

GradedMilnor operator+(const GradedMilnor& x, const GradedMilnor& y) {
    require_same(x.field, y.field);
    GradedMilnor out = x;
    for (const auto& [d, part] : y.parts) {
        auto it = out.parts.find(d);
        if (it == out.parts.end()) out.parts.emplace(d, part);
        else {
            it->second = it->second + part;
            if (it->second.terms.empty()) out.parts.erase(it);
        }
    }
    return out;
}

GradedMilnor operator-(const GradedMilnor& x) {
    GradedMilnor out{x.field, {}};
    for (const auto& [d, part] : x.parts) out.parts.emplace(d, -part);
    return out;
}

GradedMilnor km_mul(const GradedMilnor& x, const GradedMilnor& y) {
    require_same(x.field, y.field);
    GradedMilnor out{x.field, {}};
    for (const auto& [d1, a] : x.parts)
        for (const auto& [d2, b] : y.parts) out = out + graded(km_mul(a, b));
    return out;
}

GradedMilnor km_pow(const GradedMilnor& x, int e) {
    if (e < 1) throw DomainError("km_pow: exponent must be positive");
    GradedMilnor out = x;
    for (int i = 1; i < e; ++i) out = km_mul(out, x);
    return out;
}

std::map<int, MilnorNF> km_normal_form(const GradedMilnor& x) {
    std::map<int, MilnorNF> out;
    for (const auto& [d, part] : x.parts) {
        MilnorNF nf = km_normal_form(part);
        if (!nf.is_zero()) out.emplace(d, nf);
    }
    return out;
}

bool km_is_zero(const GradedMilnor& x) { return km_normal_form(x).empty(); }

std::optional<uint64_t> km_order(const GradedMilnor& x) {
    uint64_t order = 1;
    for (const auto& [d, part] : x.parts) {
        auto o = km_order(part);
        if (!o) return std::nullopt;
        order = lcm_u64(order, *o);
    }
    return order;
}

NilpotenceVerdict km_is_nilpotent(const GradedMilnor& alpha, int cap) {
    if (alpha.parts.empty()) return km_is_nilpotent(milnor_zero(alpha.field, 0), cap);
    if (alpha.parts.size() == 1) return km_is_nilpotent(alpha.parts.begin()->second, cap);
    NilpotenceVerdict v;
    v.cap = cap;
    v.torsion_order = km_order(alpha);
    v.is_torsion = v.torsion_order.has_value();
    bool all_yes = true, any_no = false;
    for (const auto& [d, part] : alpha.parts) {
        NilpotenceVerdict c = km_is_nilpotent(part, cap);
        for (const auto& r : c.rule_chain) v.rule_chain.push_back("degree " + std::to_string(d) + ": " + r);
        all_yes &= c.is_nilpotent == Tri::Yes;
        any_no |= c.is_nilpotent == Tri::No;
    }
    if (any_no) {
        v.is_nilpotent = Tri::No;
        v.rule_chain.push_back("non-nilpotent-component");
        return v;
    }
    if (!all_yes) {
        v.is_nilpotent = Tri::Unknown;
        v.rule_chain.push_back("component-undecided");
        return v;
    }
    v.is_nilpotent = Tri::Yes;
    v.rule_chain.push_back("nilpotent-components-generate-nilpotent-ideal");
    constexpr size_t kTermLimit = 4000;
    GradedMilnor power = alpha;
    for (int e = 1; e <= cap; ++e) {
        if (km_is_zero(power)) {
            v.witness_exponent = e;
            v.rule_chain.push_back("witness-verified:exponent=" + std::to_string(e));
            break;
        }
        size_t terms = 0;
        for (const auto& [d, part] : power.parts) terms += part.terms.size();
        if (terms > kTermLimit) break;
        power = km_mul(power, alpha);
    }
    return v;
}

std::string to_string(const GradedMilnor& x) {
    if (x.parts.empty()) return "0";
    std::string out;
    for (const auto& [d, part] : x.parts) {
        std::string s = to_string(part);
        if (out.empty()) out = s;
        else if (s.front() == '-') out += " - " + s.substr(1);
        else out += " + " + s;
    }
    return out;
}

} // namespace zeroline
