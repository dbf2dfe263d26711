#pragma once

#include <compare>
#include <optional>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zeroline/arith.hpp"

namespace zeroline {

enum class FieldKind { Rationals, Reals, Complexes, FiniteField };

/// One of the supported base fields. Finite fields carry their odd order q.
struct FieldSpec {
    FieldKind kind = FieldKind::Rationals;
    uint64_t q = 0;

    static FieldSpec rationals() { return {FieldKind::Rationals, 0}; }
    static FieldSpec reals() { return {FieldKind::Reals, 0}; }
    static FieldSpec complexes() { return {FieldKind::Complexes, 0}; }
    /// Throws DomainError unless q is an odd prime power.
    static FieldSpec finite(uint64_t q);

    bool is_finite() const { return kind == FieldKind::FiniteField; }
    /// Q, R and C elements are written as rationals.
    bool has_rational_literals() const { return !is_finite(); }
    uint64_t characteristic() const;
    std::string name() const;

    friend auto operator<=>(const FieldSpec&, const FieldSpec&) = default;
};

/// Parses `Q`, `R`, `C`, `F<q>`.
FieldSpec parse_field(std::string_view text);

/// Largest finite field order accepted (log tables are built eagerly).
inline constexpr uint64_t kMaxFiniteFieldOrder = 1u << 20;

/// Arithmetic in F_q = F_p[x]/(f) with f the lexicographically least monic
/// irreducible of degree k. Elements are the integers 0..q-1 whose base-p
/// digits are the coefficients (constant term first).
class GaloisField {
public:
    explicit GaloisField(uint64_t q);

    uint64_t order() const { return q_; }
    uint64_t characteristic() const { return p_; }
    unsigned degree() const { return k_; }
    const std::vector<uint64_t>& modulus() const { return modulus_; }

    uint64_t add(uint64_t a, uint64_t b) const;
    uint64_t neg(uint64_t a) const;
    uint64_t sub(uint64_t a, uint64_t b) const { return add(a, neg(b)); }
    uint64_t mul(uint64_t a, uint64_t b) const;
    uint64_t inv(uint64_t a) const;
    uint64_t pow(uint64_t a, int64_t e) const;

    /// Discrete logarithm to the fixed primitive element, in [0, q-1).
    uint64_t log(uint64_t a) const;
    uint64_t primitive() const { return exp_[1]; }
    bool is_square(uint64_t a) const { return log(a) % 2 == 0; }
    /// Least (by representation) nonsquare.
    uint64_t least_nonresidue() const { return nonresidue_; }
    /// Image of an integer under Z -> F_p -> F_q.
    uint64_t from_integer(const BigInt& n) const;

private:
    uint64_t q_, p_;
    unsigned k_;
    std::vector<uint64_t> modulus_;
    std::vector<uint64_t> exp_;
    std::vector<uint64_t> log_;
    uint64_t nonresidue_ = 0;
};

/// Shared, lazily built instance for F_q (thread-safe).
const GaloisField& galois_field(uint64_t q);

struct PrimePower {
    uint64_t prime;
    int64_t exp;
    friend auto operator<=>(const PrimePower&, const PrimePower&) = default;
};

/// A nonzero field element. Rational fields (Q, and the rational points of R
/// and C) store sign and prime factorization; finite fields store the basis
/// representation.
struct Unit {
    FieldSpec field;
    int sign = 1;
    std::vector<PrimePower> factors;
    uint64_t rep = 1;

    friend auto operator<=>(const Unit&, const Unit&) = default;
};

Unit make_unit(const FieldSpec& field, const BigInt& num, const BigInt& den = 1);
Unit one(const FieldSpec& field);
Unit minus_one(const FieldSpec& field);
bool is_one(const Unit& u);
bool is_minus_one(const Unit& u);
Unit operator*(const Unit& a, const Unit& b);
Unit inverse(const Unit& a);
Unit operator-(const Unit& a);
Unit power(const Unit& a, int64_t e);
/// Numerator and denominator (rational fields only).
std::pair<BigInt, BigInt> rational_value(const Unit& a);
/// 1 - a, or nothing when a = 1.
std::optional<Unit> one_minus(const Unit& a);
/// a + b, or nothing when the sum vanishes.
std::optional<Unit> sum(const Unit& a, const Unit& b);

/// Element literal: `p/q` or an integer for rational fields; an integer
/// basis representation for F_q (negative values denote additive inverses,
/// any integer is reduced mod p for prime fields).
Unit parse_unit(const FieldSpec& field, std::string_view text);
std::string to_string(const Unit& u);

/// Canonical representative of F*/F*^2.
struct SquareClass {
    FieldSpec field;
    int sign = 1;                  // Q, R
    std::vector<uint64_t> primes;  // Q: odd-exponent primes
    bool nonsquare = false;        // F_q

    friend auto operator<=>(const SquareClass&, const SquareClass&) = default;
};

SquareClass square_class(const Unit& a);
SquareClass square_class(const FieldSpec& field, const BigInt& num, const BigInt& den = 1);
SquareClass trivial_class(const FieldSpec& field);
SquareClass operator*(const SquareClass& a, const SquareClass& b);
bool is_trivial(const SquareClass& a);
/// The canonical unit representing the class (squarefree integer, +-1, 1 or g).
Unit representative(const SquareClass& a);
/// Signed integer value of the representative (F_q: the basis rep).
BigInt rep_value(const SquareClass& a);
std::string to_string(const SquareClass& a);

/// Places of Q: the real place or a prime (2 allowed).
struct Place {
    bool infinite = true;
    uint64_t prime = 0;

    static Place real() { return {true, 0}; }
    static Place at(uint64_t p);
    std::string to_string() const;
    friend auto operator<=>(const Place&, const Place&) = default;
};

/// Hilbert symbol (a,b)_v over Q (also accepts R at the real place).
int hilbert_symbol(const SquareClass& a, const SquareClass& b, const Place& v);
int hilbert_symbol(const BigInt& a_num, const BigInt& a_den, const BigInt& b_num, const BigInt& b_den,
                   const Place& v);

/// Orderings are indexed; the supported formally real fields have exactly one.
struct Ordering {
    int index = 0;
    friend auto operator<=>(const Ordering&, const Ordering&) = default;
};

bool is_formally_real(const FieldSpec& field);
std::vector<Ordering> orderings(const FieldSpec& field);
int sign_at(const SquareClass& a, const Ordering& ordering);

/// True when -1 is a square in the field.
bool minus_one_is_square(const FieldSpec& field);

} // namespace zeroline
