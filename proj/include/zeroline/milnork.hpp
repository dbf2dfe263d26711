#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zeroline/field.hpp"

namespace zeroline {

/// A Milnor symbol {a_1, ..., a_n}; the empty symbol is the ring unit.
struct Symbol {
    std::vector<Unit> entries;
    size_t degree() const { return entries.size(); }
    friend auto operator<=>(const Symbol&, const Symbol&) = default;
};

/// Formal integer combination of degree-n symbols in K^M_n(F). Negative
/// degrees are allowed and always hold zero.
struct MilnorElt {
    FieldSpec field;
    int degree = 0;
    std::map<Symbol, int64_t> terms;

    bool formally_zero() const { return terms.empty(); }
    friend bool operator==(const MilnorElt&, const MilnorElt&) = default;
};

MilnorElt milnor_zero(const FieldSpec& field, int degree);
MilnorElt milnor_integer(const FieldSpec& field, int64_t n);
MilnorElt milnor_symbol(const FieldSpec& field, const std::vector<Unit>& entries, int64_t coeff = 1);
/// {-1}^n
MilnorElt minus_one_power(const FieldSpec& field, int n);

MilnorElt operator+(const MilnorElt& x, const MilnorElt& y);
MilnorElt operator-(const MilnorElt& x);
MilnorElt operator-(const MilnorElt& x, const MilnorElt& y);
MilnorElt operator*(int64_t k, const MilnorElt& x);
/// Graded product by concatenation and bilinearity, followed by rewriting.
MilnorElt km_mul(const MilnorElt& x, const MilnorElt& y);
MilnorElt km_pow(const MilnorElt& x, int e);

/// Sound local rewriting of a formal sum: symbols with an entry 1, a pair
/// {a, 1-a} or a pair {a, -a} vanish; a repeated entry {.., a, .., a, ..}
/// becomes {.., a, .., -1, ..}; symbols containing -1 are 2-torsion, so their
/// coefficients are reduced mod 2 and the -1 entries moved to the front.
MilnorElt reduce(const MilnorElt& x);

/// Canonical coordinates of an element of K^M_n(F), or of k^M_n(F) when mod2.
///
/// Q:   n = 0 integer; n = 1 sign bit + prime exponents; n = 2 the 2-adic
///      Hilbert bit + tame symbols at odd primes (residues in F_p^*);
///      n >= 3 the sign bit at the real place.
/// F_q: n = 0 integer; n = 1 discrete log in Z/(q-1); n >= 2 zero.
/// R:   n = 0 integer; n = 1 sign bit + exponents of the positive part
///      (the uniquely divisible residue, exact for rational entries);
///      n >= 2 sign bit (the divisible residue of a rational symbol is torsion,
///      hence zero).
/// C:   n = 0 integer; n = 1 sign bit + exponents (rational points of C^*);
///      n >= 2 zero.
/// mod2 keeps the coordinates of k^M: integers and exponents mod 2, the tame
/// residues replaced by their Legendre bit (entry 1 marks a nonresidue).
struct MilnorNF {
    FieldSpec field;
    int degree = 0;
    bool mod2 = false;
    int64_t integer = 0;
    int sign = 0;
    int two_adic = 0;
    uint64_t residue = 0;
    std::map<uint64_t, int64_t> exponents;
    std::map<uint64_t, uint64_t> tame;

    bool is_zero() const;
    friend bool operator==(const MilnorNF&, const MilnorNF&) = default;
};

MilnorNF km_normal_form(const MilnorElt& x);
MilnorNF km_mod2(const MilnorElt& x);
MilnorNF reduce_mod2(const MilnorNF& nf);
MilnorNF zero_nf(const FieldSpec& field, int degree, bool mod2);
bool km_equal(const MilnorElt& x, const MilnorElt& y);

/// Additive order of an element (nullopt = infinite).
std::optional<uint64_t> km_order(const MilnorElt& x);

/// alpha^m = {-1} * gamma with m <= (number of distinct symbols) + 1.
struct PowerForm {
    int m = 0;
    MilnorElt gamma;
    /// Sign s with a^2 = s {-1}^n a for a single generator of degree n.
    int square_sign = 1;
    bool verified = false;
    std::vector<std::string> trace;
};

PowerForm lemma_power_form(const MilnorElt& alpha);

enum class Tri { No, Yes, Unknown };
std::string to_string(Tri t);

struct NilpotenceVerdict {
    bool is_torsion = false;
    std::optional<uint64_t> torsion_order; // nullopt = infinite
    Tri is_nilpotent = Tri::Unknown;
    std::optional<int> witness_exponent;
    /// Exponent produced by combining the mod-2 vanishing power with the
    /// {-1}-factor power; verified alongside the minimal witness.
    std::optional<int> constructed_exponent;
    int cap = 64;
    std::vector<std::string> rule_chain;
};

/// Default iteration cap for witness searches.
inline constexpr int kDefaultWitnessCap = 64;

NilpotenceVerdict km_is_nilpotent(const MilnorElt& alpha, int cap = kDefaultWitnessCap);

/// Inhomogeneous element of K^M_*(F): homogeneous components keyed by degree.
/// Components that are formally zero are dropped.
struct GradedMilnor {
    FieldSpec field;
    std::map<int, MilnorElt> parts;

    bool formally_zero() const { return parts.empty(); }
    friend bool operator==(const GradedMilnor&, const GradedMilnor&) = default;
};

GradedMilnor graded(const MilnorElt& x);
GradedMilnor operator+(const GradedMilnor& x, const GradedMilnor& y);
GradedMilnor operator-(const GradedMilnor& x);
GradedMilnor km_mul(const GradedMilnor& x, const GradedMilnor& y);
GradedMilnor km_pow(const GradedMilnor& x, int e);
/// Normal forms of the components that are nonzero.
std::map<int, MilnorNF> km_normal_form(const GradedMilnor& x);
bool km_is_zero(const GradedMilnor& x);
std::optional<uint64_t> km_order(const GradedMilnor& x);
/// Homogeneous nilpotents form an ideal and the lowest-degree component of a
/// power is the power of the lowest-degree component, so a sum is nilpotent
/// iff each component is.
NilpotenceVerdict km_is_nilpotent(const GradedMilnor& alpha, int cap = kDefaultWitnessCap);

/// `{a,b}`, `2*{-1} + {2,3}`, `-{5}`, or a bare integer for degree 0. The
/// field prefix (`Q:`) is handled by callers.
/// Throws DomainError when the literal mixes degrees.
MilnorElt parse_milnor(const FieldSpec& field, std::string_view text);
GradedMilnor parse_graded_milnor(const FieldSpec& field, std::string_view text);
std::string to_string(const MilnorElt& x);
std::string to_string(const GradedMilnor& x);
std::string to_string(const MilnorNF& nf);

} // namespace zeroline
