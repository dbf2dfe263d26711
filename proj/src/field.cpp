#include "zeroline/field.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <memory>
#include <mutex>

namespace zeroline {

FieldSpec FieldSpec::finite(uint64_t q) {
    auto [p, k] = prime_power(q);
    if (p == 0) throw DomainError("F" + std::to_string(q) + ": order is not a prime power");
    if (p == 2) throw DomainError("F" + std::to_string(q) + ": characteristic 2 is not supported");
    if (q > kMaxFiniteFieldOrder) throw Unsupported("F" + std::to_string(q) + ": field order too large");
    return {FieldKind::FiniteField, q};
}

uint64_t FieldSpec::characteristic() const {
    return is_finite() ? prime_power(q).first : 0;
}

std::string FieldSpec::name() const {
    switch (kind) {
    case FieldKind::Rationals: return "Q";
    case FieldKind::Reals: return "R";
    case FieldKind::Complexes: return "C";
    case FieldKind::FiniteField: return "F" + std::to_string(q);
    }
    return "?";
}

FieldSpec parse_field(std::string_view text) {
    if (text == "Q") return FieldSpec::rationals();
    if (text == "R") return FieldSpec::reals();
    if (text == "C") return FieldSpec::complexes();
    if (text.size() >= 2 && text[0] == 'F') {
        uint64_t q = 0;
        auto [ptr, ec] = std::from_chars(text.data() + 1, text.data() + text.size(), q);
        if (ec == std::errc() && ptr == text.data() + text.size()) return FieldSpec::finite(q);
    }
    throw DomainError("unknown field literal '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Finite fields

namespace {

using Poly = std::vector<uint64_t>; // coefficients, constant term first

Poly digits(uint64_t n, uint64_t p, unsigned k) {
    Poly out(k);
    for (unsigned i = 0; i < k; ++i) {
        out[i] = n % p;
        n /= p;
    }
    return out;
}

uint64_t undigits(const Poly& d, uint64_t p) {
    uint64_t n = 0;
    for (auto it = d.rbegin(); it != d.rend(); ++it) n = n * p + *it;
    return n;
}

// remainder of a modulo monic b
Poly poly_mod(Poly a, const Poly& b, uint64_t p) {
    const size_t db = b.size() - 1;
    while (a.size() > db) {
        uint64_t lead = a.back();
        size_t shift = a.size() - 1 - db;
        if (lead != 0) {
            for (size_t i = 0; i <= db; ++i) a[shift + i] = (a[shift + i] + (p - lead) * b[i]) % p;
        }
        a.pop_back();
    }
    return a;
}

bool is_zero_poly(const Poly& a) {
    return std::all_of(a.begin(), a.end(), [](uint64_t c) { return c == 0; });
}

bool is_irreducible(const Poly& f, uint64_t p) {
    const unsigned k = static_cast<unsigned>(f.size() - 1);
    for (unsigned d = 1; d <= k / 2; ++d) {
        uint64_t count = 1;
        for (unsigned i = 0; i < d; ++i) count *= p;
        for (uint64_t n = 0; n < count; ++n) {
            Poly g = digits(n, p, d);
            g.push_back(1);
            if (is_zero_poly(poly_mod(f, g, p))) return false;
        }
    }
    return true;
}

} // namespace

GaloisField::GaloisField(uint64_t q) : q_(q) {
    auto [p, k] = prime_power(q);
    if (p == 0 || p == 2) throw DomainError("GaloisField: order must be an odd prime power");
    p_ = p;
    k_ = k;

    uint64_t count = q;
    for (uint64_t n = 0; n < count; ++n) {
        Poly f = digits(n, p_, k_);
        f.push_back(1);
        if (is_irreducible(f, p_)) {
            modulus_ = f;
            break;
        }
    }

    auto poly_mul = [&](uint64_t a, uint64_t b) {
        Poly x = digits(a, p_, k_), y = digits(b, p_, k_);
        Poly prod(2 * k_, 0);
        for (unsigned i = 0; i < k_; ++i)
            for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p_;
        Poly r = poly_mod(prod, modulus_, p_);
        r.resize(k_, 0);
        return undigits(r, p_);
    };

    for (uint64_t g = 2 % q; g < q; ++g) {
        if (g == 0) continue;
        std::vector<uint64_t> powers{1};
        uint64_t x = g;
        while (x != 1) {
            powers.push_back(x);
            x = poly_mul(x, g);
        }
        if (powers.size() == q - 1) {
            exp_ = std::move(powers);
            break;
        }
    }
    if (q == 3 && exp_.empty()) exp_ = {1, 2};
    log_.assign(q, 0);
    for (uint64_t i = 0; i < exp_.size(); ++i) log_[exp_[i]] = i;
    for (uint64_t a = 1; a < q; ++a) {
        if (log_[a] % 2 == 1) {
            nonresidue_ = a;
            break;
        }
    }
}

uint64_t GaloisField::add(uint64_t a, uint64_t b) const {
    uint64_t out = 0, scale = 1;
    for (unsigned i = 0; i < k_; ++i) {
        out += ((a % p_ + b % p_) % p_) * scale;
        a /= p_;
        b /= p_;
        scale *= p_;
    }
    return out;
}

uint64_t GaloisField::neg(uint64_t a) const {
    uint64_t out = 0, scale = 1;
    for (unsigned i = 0; i < k_; ++i) {
        out += ((p_ - a % p_) % p_) * scale;
        a /= p_;
        scale *= p_;
    }
    return out;
}

uint64_t GaloisField::mul(uint64_t a, uint64_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
}

uint64_t GaloisField::inv(uint64_t a) const {
    if (a == 0) throw DomainError("GaloisField: inverse of zero");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

uint64_t GaloisField::pow(uint64_t a, int64_t e) const {
    if (a == 0) {
        if (e <= 0) throw DomainError("GaloisField: nonpositive power of zero");
        return 0;
    }
    const int64_t n = static_cast<int64_t>(q_ - 1);
    int64_t l = static_cast<int64_t>(log_[a]) * (e % n) % n;
    if (l < 0) l += n;
    return exp_[static_cast<uint64_t>(l)];
}

uint64_t GaloisField::log(uint64_t a) const {
    if (a == 0 || a >= q_) throw DomainError("GaloisField: logarithm of zero");
    return log_[a];
}

uint64_t GaloisField::from_integer(const BigInt& n) const { return mod_of(n, p_); }

const GaloisField& galois_field(uint64_t q) {
    static std::mutex mutex;
    static std::map<uint64_t, std::unique_ptr<GaloisField>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[q];
    if (!slot) slot = std::make_unique<GaloisField>(q);
    return *slot;
}

// ---------------------------------------------------------------------------
// Units

namespace {

std::vector<PrimePower> merge(const std::vector<PrimePower>& a, const std::vector<PrimePower>& b, int64_t sb) {
    std::map<uint64_t, int64_t> acc;
    for (const auto& f : a) acc[f.prime] += f.exp;
    for (const auto& f : b) acc[f.prime] += sb * f.exp;
    std::vector<PrimePower> out;
    for (auto [p, e] : acc)
        if (e != 0) out.push_back({p, e});
    return out;
}

void require_same(const FieldSpec& a, const FieldSpec& b) {
    if (a != b) throw DomainError("field mismatch: " + a.name() + " vs " + b.name());
}

} // namespace

Unit make_unit(const FieldSpec& field, const BigInt& num, const BigInt& den) {
    if (num == 0) throw DomainError("zero is not a unit");
    if (den == 0) throw DomainError("zero denominator");
    Unit u;
    u.field = field;
    if (field.is_finite()) {
        const auto& gf = galois_field(field.q);
        uint64_t n = gf.from_integer(num), d = gf.from_integer(den);
        if (d == 0) throw DomainError("denominator vanishes in " + field.name());
        if (n == 0) throw DomainError("zero is not a unit");
        u.rep = gf.mul(n, gf.inv(d));
        return u;
    }
    u.sign = ((num < 0) != (den < 0)) ? -1 : 1;
    std::vector<PrimePower> nf, df;
    for (auto [p, e] : factor(num)) nf.push_back({p, e});
    for (auto [p, e] : factor(den)) df.push_back({p, e});
    u.factors = merge(nf, df, -1);
    return u;
}

Unit one(const FieldSpec& field) { return make_unit(field, 1); }
Unit minus_one(const FieldSpec& field) { return make_unit(field, -1); }

bool is_one(const Unit& u) {
    if (u.field.is_finite()) return u.rep == 1;
    return u.sign == 1 && u.factors.empty();
}

bool is_minus_one(const Unit& u) {
    if (u.field.is_finite()) return u.rep == galois_field(u.field.q).neg(1);
    return u.sign == -1 && u.factors.empty();
}

Unit operator*(const Unit& a, const Unit& b) {
    require_same(a.field, b.field);
    Unit out;
    out.field = a.field;
    if (a.field.is_finite()) {
        out.rep = galois_field(a.field.q).mul(a.rep, b.rep);
        return out;
    }
    out.sign = a.sign * b.sign;
    out.factors = merge(a.factors, b.factors, 1);
    return out;
}

Unit inverse(const Unit& a) {
    Unit out = a;
    if (a.field.is_finite()) {
        out.rep = galois_field(a.field.q).inv(a.rep);
        return out;
    }
    for (auto& f : out.factors) f.exp = -f.exp;
    return out;
}

Unit operator-(const Unit& a) { return a * minus_one(a.field); }

Unit power(const Unit& a, int64_t e) {
    Unit out = a;
    if (a.field.is_finite()) {
        out.rep = galois_field(a.field.q).pow(a.rep, e);
        return out;
    }
    if (e % 2 == 0) out.sign = 1;
    for (auto& f : out.factors) f.exp *= e;
    out.factors.erase(std::remove_if(out.factors.begin(), out.factors.end(),
                                     [](const PrimePower& f) { return f.exp == 0; }),
                      out.factors.end());
    return out;
}

std::pair<BigInt, BigInt> rational_value(const Unit& a) {
    if (a.field.is_finite()) throw DomainError("rational_value: finite field element");
    BigInt num = a.sign, den = 1;
    for (const auto& f : a.factors) {
        BigInt pp = boost::multiprecision::pow(BigInt(f.prime), static_cast<unsigned>(f.exp < 0 ? -f.exp : f.exp));
        if (f.exp > 0) num *= pp;
        else den *= pp;
    }
    return {num, den};
}

std::optional<Unit> sum(const Unit& a, const Unit& b) {
    require_same(a.field, b.field);
    if (a.field.is_finite()) {
        uint64_t s = galois_field(a.field.q).add(a.rep, b.rep);
        if (s == 0) return std::nullopt;
        Unit u = a;
        u.rep = s;
        return u;
    }
    auto [an, ad] = rational_value(a);
    auto [bn, bd] = rational_value(b);
    BigInt num = an * bd + bn * ad, den = ad * bd;
    if (num == 0) return std::nullopt;
    BigInt g = boost::multiprecision::gcd(num, den);
    return make_unit(a.field, num / g, den / g);
}

std::optional<Unit> one_minus(const Unit& a) { return sum(one(a.field), -a); }

namespace {

std::optional<BigInt> parse_integer(std::string_view s) {
    if (s.empty()) return std::nullopt;
    size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return std::nullopt;
    for (size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') return std::nullopt;
    if (s.size() - i > 19) throw Unsupported("integer literal exceeds the 64-bit input range: " + std::string(s));
    BigInt v(std::string(s.substr(i)));
    return s[0] == '-' ? BigInt(-v) : v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

} // namespace

Unit parse_unit(const FieldSpec& field, std::string_view text) {
    text = trim(text);
    auto bad = [&] { return DomainError("element '" + std::string(text) + "' is not a literal of " + field.name()); };
    const auto slash = text.find('/');
    if (field.is_finite()) {
        const auto& gf = galois_field(field.q);
        if (gf.degree() == 1) {
            auto num = parse_integer(text.substr(0, slash));
            auto den = slash == std::string_view::npos ? std::optional<BigInt>(1) : parse_integer(text.substr(slash + 1));
            if (!num || !den) throw bad();
            return make_unit(field, *num, *den);
        }
        auto n = parse_integer(text);
        if (!n || slash != std::string_view::npos) throw bad();
        BigInt m = abs(*n);
        if (m >= field.q) throw bad();
        if (m == 0) throw DomainError("zero is not a unit");
        Unit u;
        u.field = field;
        u.rep = m.convert_to<uint64_t>();
        if (*n < 0) u.rep = gf.neg(u.rep);
        return u;
    }
    auto num = parse_integer(text.substr(0, slash));
    auto den = slash == std::string_view::npos ? std::optional<BigInt>(1) : parse_integer(text.substr(slash + 1));
    if (!num || !den) throw bad();
    return make_unit(field, *num, *den);
}

std::string to_string(const Unit& u) {
    if (u.field.is_finite()) return std::to_string(u.rep);
    auto [num, den] = rational_value(u);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// ---------------------------------------------------------------------------
// Square classes

SquareClass square_class(const Unit& a) {
    SquareClass c;
    c.field = a.field;
    switch (a.field.kind) {
    case FieldKind::Rationals:
        c.sign = a.sign;
        for (const auto& f : a.factors)
            if (f.exp % 2 != 0) c.primes.push_back(f.prime);
        break;
    case FieldKind::Reals: c.sign = a.sign; break;
    case FieldKind::Complexes: break;
    case FieldKind::FiniteField: c.nonsquare = !galois_field(a.field.q).is_square(a.rep); break;
    }
    return c;
}

SquareClass square_class(const FieldSpec& field, const BigInt& num, const BigInt& den) {
    return square_class(make_unit(field, num, den));
}

SquareClass trivial_class(const FieldSpec& field) {
    SquareClass c;
    c.field = field;
    return c;
}

SquareClass operator*(const SquareClass& a, const SquareClass& b) {
    require_same(a.field, b.field);
    SquareClass c;
    c.field = a.field;
    c.sign = a.sign * b.sign;
    std::set_symmetric_difference(a.primes.begin(), a.primes.end(), b.primes.begin(), b.primes.end(),
                                  std::back_inserter(c.primes));
    c.nonsquare = a.nonsquare != b.nonsquare;
    return c;
}

bool is_trivial(const SquareClass& a) { return a.sign == 1 && a.primes.empty() && !a.nonsquare; }

Unit representative(const SquareClass& a) {
    if (a.field.is_finite()) {
        Unit u;
        u.field = a.field;
        u.rep = a.nonsquare ? galois_field(a.field.q).least_nonresidue() : 1;
        return u;
    }
    Unit u;
    u.field = a.field;
    u.sign = a.sign;
    for (uint64_t p : a.primes) u.factors.push_back({p, 1});
    return u;
}

BigInt rep_value(const SquareClass& a) {
    if (a.field.is_finite()) return a.nonsquare ? galois_field(a.field.q).least_nonresidue() : 1;
    BigInt v = a.sign;
    for (uint64_t p : a.primes) v *= p;
    return v;
}

std::string to_string(const SquareClass& a) { return rep_value(a).str(); }

// ---------------------------------------------------------------------------
// Places and Hilbert symbols

Place Place::at(uint64_t p) {
    if (!is_prime(p)) throw DomainError("place: " + std::to_string(p) + " is not prime");
    return {false, p};
}

std::string Place::to_string() const { return infinite ? "inf" : std::to_string(prime); }

namespace {

// unit part of a squarefree class at p, reduced modulo m
uint64_t unit_part_mod(const SquareClass& a, uint64_t p, uint64_t m) {
    uint64_t r = a.sign < 0 ? m - 1 : 1 % m;
    for (uint64_t l : a.primes)
        if (l != p) r = mulmod(r, l % m, m);
    return r;
}

bool divides(const SquareClass& a, uint64_t p) {
    return std::binary_search(a.primes.begin(), a.primes.end(), p);
}

} // namespace

int hilbert_symbol(const SquareClass& a, const SquareClass& b, const Place& v) {
    require_same(a.field, b.field);
    if (a.field.kind == FieldKind::Reals) {
        if (!v.infinite) throw DomainError("hilbert_symbol: R has only the real place");
        return (a.sign < 0 && b.sign < 0) ? -1 : 1;
    }
    if (a.field.kind != FieldKind::Rationals) throw DomainError("hilbert_symbol: places are defined for Q and R only");
    if (v.infinite) return (a.sign < 0 && b.sign < 0) ? -1 : 1;
    const uint64_t p = v.prime;
    const int alpha = divides(a, p) ? 1 : 0;
    const int beta = divides(b, p) ? 1 : 0;
    if (p == 2) {
        const uint64_t u = unit_part_mod(a, 2, 8), w = unit_part_mod(b, 2, 8);
        auto eps = [](uint64_t x) { return static_cast<int>(((x - 1) / 2) % 2); };
        auto omega = [](uint64_t x) { return static_cast<int>(((x * x - 1) / 8) % 2); };
        int e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u);
        return e % 2 == 0 ? 1 : -1;
    }
    const uint64_t u = unit_part_mod(a, p, p), w = unit_part_mod(b, p, p);
    int result = 1;
    if (alpha * beta == 1 && (p - 1) / 2 % 2 == 1) result = -result;
    if (beta == 1) result *= legendre(u, p);
    if (alpha == 1) result *= legendre(w, p);
    return result;
}

int hilbert_symbol(const BigInt& a_num, const BigInt& a_den, const BigInt& b_num, const BigInt& b_den,
                   const Place& v) {
    const auto Q = FieldSpec::rationals();
    return hilbert_symbol(square_class(Q, a_num, a_den), square_class(Q, b_num, b_den), v);
}

bool is_formally_real(const FieldSpec& field) {
    return field.kind == FieldKind::Rationals || field.kind == FieldKind::Reals;
}

std::vector<Ordering> orderings(const FieldSpec& field) {
    if (is_formally_real(field)) return {Ordering{0}};
    return {};
}

int sign_at(const SquareClass& a, const Ordering&) {
    if (!is_formally_real(a.field)) throw DomainError("sign_at: " + a.field.name() + " has no orderings");
    return a.sign;
}

bool minus_one_is_square(const FieldSpec& field) {
    switch (field.kind) {
    case FieldKind::Rationals:
    case FieldKind::Reals: return false;
    case FieldKind::Complexes: return true;
    case FieldKind::FiniteField: return field.q % 4 == 1;
    }
    return false;
}

} // namespace zeroline
