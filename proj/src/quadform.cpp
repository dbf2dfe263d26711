#include "zeroline/quadform.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace zeroline {

namespace {

void require_same(const FieldSpec& a, const FieldSpec& b) {
    if (a != b) throw DomainError("field mismatch: " + a.name() + " vs " + b.name());
}

SquareClass class_of(const FieldSpec& field, int64_t v) { return square_class(field, BigInt(v)); }

SquareClass minus_class(const FieldSpec& field) { return class_of(field, -1); }

// ---------------------------------------------------------------------------
// Local-global data of a form over Q: rank, determinant, number of negative
// entries and the Hasse invariants eps_v = prod_{i<j} (a_i, a_j)_v.

struct RationalData {
    size_t n = 0;
    SquareClass d;
    int64_t negatives = 0;
    std::map<Place, int> eps; // only places with eps_v = -1
};

std::set<Place> base_places(const SquareClass& d) {
    std::set<Place> s{Place::real(), Place::at(2)};
    for (uint64_t p : d.primes) s.insert(Place::at(p));
    return s;
}

int eps_at(const std::map<Place, int>& eps, const Place& v) {
    auto it = eps.find(v);
    return it == eps.end() ? 1 : it->second;
}

void set_eps(std::map<Place, int>& eps, const Place& v, int value) {
    if (value == 1) eps.erase(v);
    else eps[v] = -1;
}

RationalData rational_data(const DiagonalForm& form) {
    const auto Q = FieldSpec::rationals();
    RationalData out;
    out.n = form.rank();
    out.d = trivial_class(Q);
    std::set<Place> places{Place::real(), Place::at(2)};
    for (const auto& a : form.entries)
        for (uint64_t p : a.primes) places.insert(Place::at(p));
    std::map<Place, int> eps;
    for (const auto& a : form.entries) {
        for (const auto& v : places) {
            if (hilbert_symbol(out.d, a, v) < 0) eps[v] = -eps_at(eps, v);
        }
        for (auto it = eps.begin(); it != eps.end();) {
            if (it->second == 1) it = eps.erase(it);
            else ++it;
        }
        out.d = out.d * a;
        if (a.sign < 0) ++out.negatives;
    }
    out.eps = eps;
    return out;
}

bool is_local_square(const SquareClass& c, const Place& v) {
    if (v.infinite) return c.sign > 0;
    if (std::binary_search(c.primes.begin(), c.primes.end(), v.prime)) return false;
    if (v.prime == 2) return mod_of(rep_value(c), 8) == 1;
    return legendre(rep_value(c), v.prime) == 1;
}

// Existence of a rational form with the given rank, determinant, Hasse
// invariants and number of negative entries.
bool realizable(size_t n, const SquareClass& d, const std::map<Place, int>& eps, int64_t r) {
    if (r < 0 || r > static_cast<int64_t>(n)) return false;
    if ((d.sign < 0) != (r % 2 == 1)) return false;
    const int eps_inf = ((r * (r - 1) / 2) % 2 == 0) ? 1 : -1;
    if (eps_at(eps, Place::real()) != eps_inf) return false;
    if (eps.size() % 2 != 0) return false; // product formula
    if (n == 0) return is_trivial(d) && eps.empty() && r == 0;
    if (n == 1) return eps.empty();
    if (n == 2) {
        const SquareClass minus_d = minus_class(d.field) * d;
        for (const auto& [v, e] : eps)
            if (is_local_square(minus_d, v)) return false;
    }
    return true;
}

constexpr uint64_t kSearchLimit = 2000000;

std::vector<SquareClass> synthesize(size_t n, const SquareClass& d, std::map<Place, int> eps, int64_t r) {
    const auto Q = FieldSpec::rationals();
    if (n == 0) return {};
    if (n == 1) return {d};
    const bool allow_pos = static_cast<int64_t>(n) - r > 0;
    const bool allow_neg = r > 0;
    for (uint64_t m = 1; m < kSearchLimit; ++m) {
        auto f = factor(m);
        if (std::any_of(f.begin(), f.end(), [](const auto& pe) { return pe.second > 1; })) continue;
        for (int sgn : {1, -1}) {
            if ((sgn > 0 && !allow_pos) || (sgn < 0 && !allow_neg)) continue;
            const SquareClass a = square_class(Q, BigInt(sgn) * m);
            const SquareClass d2 = d * a;
            std::set<Place> places = base_places(d2);
            for (uint64_t p : a.primes) places.insert(Place::at(p));
            for (const auto& [v, e] : eps) places.insert(v);
            std::map<Place, int> eps2 = eps;
            for (const auto& v : places) set_eps(eps2, v, eps_at(eps, v) * hilbert_symbol(a, d2, v));
            const int64_t r2 = r - (sgn < 0 ? 1 : 0);
            if (realizable(n - 1, d2, eps2, r2)) {
                auto rest = synthesize(n - 1, d2, eps2, r2);
                rest.insert(rest.begin(), a);
                return rest;
            }
        }
    }
    throw Unsupported("witt_class: representative search exceeded its bound");
}

void sort_entries(std::vector<SquareClass>& entries) {
    std::sort(entries.begin(), entries.end(), [](const SquareClass& a, const SquareClass& b) {
        BigInt va = rep_value(a), vb = rep_value(b);
        if (va != vb) return va < vb;
        return a < b;
    });
}

WittClass rational_witt_class(const DiagonalForm& form) {
    const auto Q = FieldSpec::rationals();
    const RationalData data = rational_data(form);
    const int64_t n = static_cast<int64_t>(data.n);
    const int64_t s = n - 2 * data.negatives;
    for (int64_t n0 = s < 0 ? -s : s; n0 <= n; n0 += 2) {
        const int64_t k = (n - n0) / 2;
        SquareClass d0 = data.d;
        if (k % 2 == 1) d0 = d0 * minus_class(Q);
        std::map<Place, int> eps0 = data.eps;
        std::set<Place> places = base_places(d0);
        for (const auto& [v, e] : data.eps) places.insert(v);
        const SquareClass minus = minus_class(Q);
        for (int64_t j = 0; j < k; ++j) {
            SquareClass dj = (j % 2 == 0) ? d0 : d0 * minus;
            for (const auto& v : places)
                if (hilbert_symbol(dj, minus, v) < 0) set_eps(eps0, v, -eps_at(eps0, v));
        }
        const int64_t r0 = data.negatives - k;
        if (realizable(static_cast<size_t>(n0), d0, eps0, r0)) {
            auto entries = synthesize(static_cast<size_t>(n0), d0, eps0, r0);
            sort_entries(entries);
            return WittClass{Q, DiagonalForm{Q, entries}};
        }
    }
    throw std::logic_error("witt_class: no anisotropic dimension found");
}

WittClass closed_form_witt_class(const DiagonalForm& form) {
    const auto& F = form.field;
    std::vector<SquareClass> out;
    switch (F.kind) {
    case FieldKind::Complexes:
        if (form.rank() % 2 == 1) out.push_back(trivial_class(F));
        break;
    case FieldKind::Reals: {
        int64_t s = 0;
        for (const auto& a : form.entries) s += a.sign;
        for (int64_t i = 0; i < (s < 0 ? -s : s); ++i) out.push_back(class_of(F, s < 0 ? -1 : 1));
        break;
    }
    case FieldKind::FiniteField: {
        const FormInvariants inv = invariants(form);
        if (form.rank() % 2 == 1) {
            out.push_back(inv.signed_disc);
        } else if (!is_trivial(inv.signed_disc)) {
            out.push_back(trivial_class(F));
            out.push_back(minus_class(F) * inv.signed_disc);
        }
        sort_entries(out);
        break;
    }
    case FieldKind::Rationals: break;
    }
    return WittClass{F, DiagonalForm{F, out}};
}

} // namespace

// ---------------------------------------------------------------------------
// Forms

DiagonalForm diagonal(const FieldSpec& field, const std::vector<int64_t>& entries) {
    DiagonalForm f{field, {}};
    for (int64_t a : entries) f.entries.push_back(class_of(field, a));
    return f;
}

DiagonalForm orthogonal_sum(const DiagonalForm& a, const DiagonalForm& b) {
    require_same(a.field, b.field);
    DiagonalForm out = a;
    out.entries.insert(out.entries.end(), b.entries.begin(), b.entries.end());
    return out;
}

DiagonalForm tensor(const DiagonalForm& a, const DiagonalForm& b) {
    require_same(a.field, b.field);
    DiagonalForm out{a.field, {}};
    for (const auto& x : a.entries)
        for (const auto& y : b.entries) out.entries.push_back(x * y);
    return out;
}

DiagonalForm pfister(const FieldSpec& field, const std::vector<Unit>& entries) {
    DiagonalForm out{field, {trivial_class(field)}};
    for (const auto& a : entries) {
        require_same(field, a.field);
        out = tensor(out, DiagonalForm{field, {trivial_class(field), square_class(-a)}});
    }
    return out;
}

FormInvariants invariants(const DiagonalForm& form) {
    const auto& F = form.field;
    FormInvariants inv;
    inv.rank = form.rank();
    inv.det_class = trivial_class(F);
    for (const auto& a : form.entries) inv.det_class = inv.det_class * a;
    inv.signed_disc = inv.det_class;
    if ((inv.rank * (inv.rank - (inv.rank ? 1 : 0)) / 2) % 2 == 1) inv.signed_disc = inv.signed_disc * minus_class(F);
    if (F.kind == FieldKind::Rationals) {
        RationalData data = rational_data(form);
        for (const auto& v : base_places(inv.det_class)) inv.hasse[v] = 1;
        for (const auto& a : form.entries)
            for (uint64_t p : a.primes) inv.hasse[Place::at(p)] = 1;
        for (const auto& [v, e] : data.eps) inv.hasse[v] = e;
    }
    for (const auto& o : orderings(F)) {
        int64_t s = 0;
        for (const auto& a : form.entries) s += sign_at(a, o);
        inv.signatures.push_back(s);
    }
    return inv;
}

// ---------------------------------------------------------------------------
// W(F)

WittClass witt_class(const DiagonalForm& form) {
    if (form.field.kind == FieldKind::Rationals) return rational_witt_class(form);
    return closed_form_witt_class(form);
}

WittClass witt_zero(const FieldSpec& field) { return WittClass{field, DiagonalForm{field, {}}}; }

WittClass witt_one(const FieldSpec& field) { return WittClass{field, DiagonalForm{field, {trivial_class(field)}}}; }

WittClass operator+(const WittClass& x, const WittClass& y) {
    require_same(x.field, y.field);
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    return witt_class(orthogonal_sum(x.aniso, y.aniso));
}

WittClass operator-(const WittClass& x) {
    DiagonalForm f = x.aniso;
    const SquareClass minus = minus_class(x.field);
    for (auto& a : f.entries) a = a * minus;
    return witt_class(f);
}

WittClass operator-(const WittClass& x, const WittClass& y) { return x + (-y); }

WittClass operator*(const WittClass& x, const WittClass& y) {
    require_same(x.field, y.field);
    if (x.is_zero() || y.is_zero()) return witt_zero(x.field);
    return witt_class(tensor(x.aniso, y.aniso));
}

WittClass operator*(int64_t k, const WittClass& x) {
    WittClass base = k < 0 ? -x : x;
    uint64_t m = static_cast<uint64_t>(k < 0 ? -k : k);
    WittClass acc = witt_zero(x.field);
    while (m > 0) {
        if (m & 1) acc = acc + base;
        base = base + base;
        m >>= 1;
    }
    return acc;
}

WittClass w_pow(const WittClass& x, int e) {
    if (e < 1) throw DomainError("w_pow: exponent must be positive");
    WittClass out = x;
    for (int i = 1; i < e; ++i) out = out * x;
    return out;
}

// ---------------------------------------------------------------------------
// GW(F)

GWClass gw_class(const DiagonalForm& form) {
    return GWClass{witt_class(form), static_cast<int64_t>(form.rank())};
}

GWClass gw_make(const WittClass& witt, int64_t rank) {
    if ((rank - static_cast<int64_t>(witt.rank())) % 2 != 0)
        throw DomainError("GW class: rank parity disagrees with the Witt class");
    return GWClass{witt, rank};
}

GWClass gw_one(const FieldSpec& field) { return GWClass{witt_one(field), 1}; }

GWClass gw_epsilon(const FieldSpec& field) {
    return -gw_class(DiagonalForm{field, {minus_class(field)}});
}

GWClass gw_hyperbolic(const FieldSpec& field) {
    return gw_class(DiagonalForm{field, {trivial_class(field), minus_class(field)}});
}

GWClass operator+(const GWClass& x, const GWClass& y) { return GWClass{x.witt + y.witt, x.rank + y.rank}; }

GWClass operator-(const GWClass& x) { return GWClass{-x.witt, -x.rank}; }

GWClass operator-(const GWClass& x, const GWClass& y) { return x + (-y); }

GWClass operator*(const GWClass& x, const GWClass& y) { return GWClass{x.witt * y.witt, x.rank * y.rank}; }

GWClass operator*(int64_t k, const GWClass& x) { return GWClass{k * x.witt, k * x.rank}; }

GWClass gw_pow(const GWClass& x, int e) {
    if (e < 1) throw DomainError("gw_pow: exponent must be positive");
    GWClass out = x;
    for (int i = 1; i < e; ++i) out = out * x;
    return out;
}

// ---------------------------------------------------------------------------
// Torsion and nilpotence

std::vector<int64_t> signatures(const WittClass& x) { return invariants(x.aniso).signatures; }

TorsionInfo is_torsion(const WittClass& x, int cap) {
    for (int64_t s : signatures(x))
        if (s != 0) return {false, std::nullopt};
    WittClass y = x;
    uint64_t order = 1;
    for (int i = 0; i <= cap; ++i) {
        if (y.is_zero()) return {true, order};
        y = y + y;
        order *= 2;
    }
    throw std::logic_error("is_torsion: doubling did not terminate within the cap");
}

TorsionInfo is_torsion(const GWClass& x, int cap) {
    if (x.rank != 0) return {false, std::nullopt};
    return is_torsion(x.witt, cap);
}

NilpotenceInfo is_nilpotent(const WittClass& x, int cap) {
    NilpotenceInfo out;
    const TorsionInfo t = is_torsion(x, cap);
    out.rules.push_back(is_formally_real(x.field) ? "pfister-torsion-criterion" : "non-real-witt-ring-is-torsion");
    if (!t.torsion) {
        out.rules.push_back("nonzero-signature-survives-all-powers");
        return out;
    }
    if (x.rank() % 2 == 1) {
        out.rules.push_back("odd-rank-survives-all-powers");
        return out;
    }
    out.rules.push_back("even-rank-torsion-is-nilpotent");
    WittClass y = x;
    for (int e = 1; e <= cap; ++e) {
        if (y.is_zero()) {
            out.nilpotent = true;
            out.exponent = e;
            return out;
        }
        y = y * x;
    }
    throw std::logic_error("is_nilpotent: witness search exceeded the cap");
}

NilpotenceInfo is_nilpotent(const GWClass& x, int cap) {
    NilpotenceInfo out;
    out.rules.push_back("gw-nilpotent-iff-torsion");
    const TorsionInfo t = is_torsion(x, cap);
    if (!t.torsion) {
        out.rules.push_back(x.rank != 0 ? "nonzero-rank-survives-all-powers" : "nonzero-signature-survives-all-powers");
        return out;
    }
    GWClass y = x;
    for (int e = 1; e <= cap; ++e) {
        if (y.is_zero()) {
            out.nilpotent = true;
            out.exponent = e;
            return out;
        }
        y = y * x;
    }
    throw std::logic_error("is_nilpotent: witness search exceeded the cap");
}

// ---------------------------------------------------------------------------
// Fundamental ideal

namespace {

// Hasse invariant of m hyperbolic planes: (-1,-1)^{m(m-1)/2}
int hyperbolic_eps(size_t m, const Place& v) {
    if ((m * (m - (m ? 1 : 0)) / 2) % 2 == 0) return 1;
    return (v.infinite || v.prime == 2) ? -1 : 1;
}

// Places where the Clifford invariant of an I^2 element of Q is nontrivial.
std::map<Place, int> clifford_defects(const WittClass& x) {
    const RationalData data = rational_data(x.aniso);
    const size_t m = x.rank() / 2;
    std::set<Place> places{Place::real(), Place::at(2)};
    for (const auto& [v, e] : data.eps) places.insert(v);
    std::map<Place, int> out;
    for (const auto& v : places) {
        if (eps_at(data.eps, v) * hyperbolic_eps(m, v) < 0) out[v] = -1;
    }
    return out;
}

int64_t total_signature(const WittClass& x) {
    auto s = signatures(x);
    return s.empty() ? 0 : s.front();
}

bool signature_divisible(const WittClass& x, int n) {
    const int64_t s = total_signature(x);
    const int64_t m = n >= 62 ? 0 : (int64_t{1} << n);
    return m == 0 ? s == 0 : s % m == 0;
}

} // namespace

bool in_fundamental_power(const WittClass& x, int n) {
    if (n <= 0 || x.is_zero()) return true;
    if (x.rank() % 2 != 0) return false;
    switch (x.field.kind) {
    case FieldKind::Complexes: return true;
    case FieldKind::Reals: return signature_divisible(x, n);
    case FieldKind::FiniteField: return n == 1;
    case FieldKind::Rationals: {
        if (n == 1) return true;
        if (!is_trivial(invariants(x.aniso).signed_disc)) return false;
        if (n == 2) return true;
        if (!clifford_defects(x).empty()) return false;
        // I^n(Q) embeds in I^n(R) = 2^n Z for n >= 3
        return signature_divisible(x, n);
    }
    }
    return false;
}

MilnorNF en_invariant(const WittClass& x, int n) {
    const auto& F = x.field;
    MilnorNF nf = zero_nf(F, n, true);
    if (n < 0) return nf;
    if (!in_fundamental_power(x, n))
        throw DomainError("en_invariant: class is not in I^" + std::to_string(n));
    if (n == 0) {
        nf.integer = static_cast<int64_t>(x.rank() % 2);
        return nf;
    }
    const int64_t s = total_signature(x);
    switch (F.kind) {
    case FieldKind::Complexes: break;
    case FieldKind::FiniteField:
        if (n == 1) nf.residue = invariants(x.aniso).signed_disc.nonsquare ? 1 : 0;
        break;
    case FieldKind::Reals: nf.sign = static_cast<int>(((s >> n) % 2 + 2) % 2); break;
    case FieldKind::Rationals:
        if (n == 1) {
            const SquareClass sd = invariants(x.aniso).signed_disc;
            nf.sign = sd.sign < 0 ? 1 : 0;
            for (uint64_t p : sd.primes) nf.exponents[p] = 1;
        } else if (n == 2) {
            for (const auto& [v, e] : clifford_defects(x)) {
                if (v.infinite) continue;
                if (v.prime == 2) nf.two_adic = 1;
                else nf.tame[v.prime] = 1;
            }
        } else {
            nf.sign = static_cast<int>(((s >> n) % 2 + 2) % 2);
        }
        break;
    }
    return nf;
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

DiagonalForm parse_form(const FieldSpec& field, std::string_view text) {
    text = trim(text);
    if (text.size() < 2 || text.front() != '<' || text.back() != '>')
        throw DomainError("form literal must look like <a1,a2,...>: '" + std::string(text) + "'");
    std::string_view body = trim(text.substr(1, text.size() - 2));
    DiagonalForm form{field, {}};
    if (body.empty()) return form;
    size_t start = 0;
    while (true) {
        size_t comma = body.find(',', start);
        form.entries.push_back(square_class(parse_unit(field, body.substr(start, comma - start))));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return form;
}

GWClass parse_gw(const FieldSpec& field, std::string_view text) {
    text = trim(text);
    if (text.empty()) throw DomainError("empty GW literal");
    GWClass acc{witt_zero(field), 0};
    size_t i = 0;
    int64_t sign = 1;
    bool expect_term = true;
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
        if (!expect_term) throw DomainError("expected '+' or '-' in GW literal");
        size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        int64_t coeff = 1;
        size_t k = j;
        while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
        if (j > i) {
            if (j - i > 12) throw Unsupported("GW literal coefficient too large");
            coeff = std::stoll(std::string(text.substr(i, j - i)));
        }
        if (j > i && (k >= text.size() || text[k] != '*')) {
            acc = acc + (sign * coeff) * gw_one(field);
            i = j;
        } else {
            if (j > i) i = k + 1;
            while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            if (i >= text.size() || text[i] != '<') throw DomainError("expected '<' in GW literal");
            size_t close = text.find('>', i);
            if (close == std::string_view::npos) throw DomainError("unterminated form in GW literal");
            acc = acc + (sign * coeff) * gw_class(parse_form(field, text.substr(i, close - i + 1)));
            i = close + 1;
        }
        sign = 1;
        expect_term = false;
    }
    if (expect_term) throw DomainError("incomplete GW literal");
    return acc;
}

std::string to_string(const DiagonalForm& form) {
    std::ostringstream os;
    os << "<";
    for (size_t i = 0; i < form.entries.size(); ++i) os << (i ? "," : "") << to_string(form.entries[i]);
    os << ">";
    return os.str();
}

std::string to_string(const WittClass& x) { return to_string(x.aniso); }

std::string to_string(const GWClass& x) {
    const int64_t k = (x.rank - static_cast<int64_t>(x.witt.rank())) / 2;
    const std::string h = to_string(DiagonalForm{x.field(), {trivial_class(x.field()), minus_class(x.field())}});
    std::ostringstream os;
    const bool aniso = !x.witt.is_zero();
    if (aniso || k == 0) os << to_string(x.witt);
    if (k != 0) {
        const int64_t a = k < 0 ? -k : k;
        if (aniso) os << (k < 0 ? " - " : " + ");
        else if (k < 0) os << "-";
        if (a != 1) os << a << "*";
        os << h;
    }
    return os.str();
}

} // namespace zeroline
