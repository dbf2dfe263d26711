#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zeroline/field.hpp"
#include "zeroline/milnork.hpp"

namespace zeroline {

/// <a_1, ..., a_n> with entries taken up to squares. The empty form is zero.
struct DiagonalForm {
    FieldSpec field;
    std::vector<SquareClass> entries;

    size_t rank() const { return entries.size(); }
    friend bool operator==(const DiagonalForm&, const DiagonalForm&) = default;
};

DiagonalForm diagonal(const FieldSpec& field, const std::vector<int64_t>& entries);
DiagonalForm orthogonal_sum(const DiagonalForm& a, const DiagonalForm& b);
DiagonalForm tensor(const DiagonalForm& a, const DiagonalForm& b);
/// <<a_1,...,a_n>> = <1,-a_1> x ... x <1,-a_n>
DiagonalForm pfister(const FieldSpec& field, const std::vector<Unit>& entries);

struct FormInvariants {
    size_t rank = 0;
    SquareClass det_class;
    SquareClass signed_disc;
    /// Product of Hilbert symbols (a_i, a_j)_v over i < j; places not listed are +1 (Q only).
    std::map<Place, int> hasse;
    /// One signature per ordering.
    std::vector<int64_t> signatures;
};

FormInvariants invariants(const DiagonalForm& form);

/// Witt class with its canonical anisotropic representative.
struct WittClass {
    FieldSpec field;
    DiagonalForm aniso;

    size_t rank() const { return aniso.rank(); }
    bool is_zero() const { return aniso.entries.empty(); }
    friend bool operator==(const WittClass&, const WittClass&) = default;
};

WittClass witt_class(const DiagonalForm& form);
WittClass witt_zero(const FieldSpec& field);
WittClass witt_one(const FieldSpec& field);
WittClass operator+(const WittClass& x, const WittClass& y);
WittClass operator-(const WittClass& x);
WittClass operator-(const WittClass& x, const WittClass& y);
WittClass operator*(const WittClass& x, const WittClass& y);
WittClass operator*(int64_t k, const WittClass& x);
WittClass w_pow(const WittClass& x, int e);

/// GW(F) = W(F) x_{Z/2} Z: a Witt class together with a virtual rank of the same parity.
struct GWClass {
    WittClass witt;
    int64_t rank = 0;

    const FieldSpec& field() const { return witt.field; }
    bool is_zero() const { return rank == 0 && witt.is_zero(); }
    friend bool operator==(const GWClass&, const GWClass&) = default;
};

GWClass gw_class(const DiagonalForm& form);
/// Throws DomainError if the parities disagree.
GWClass gw_make(const WittClass& witt, int64_t rank);
GWClass gw_one(const FieldSpec& field);
/// epsilon = -<-1>
GWClass gw_epsilon(const FieldSpec& field);
/// h = <1> + <-1>
GWClass gw_hyperbolic(const FieldSpec& field);
GWClass operator+(const GWClass& x, const GWClass& y);
GWClass operator-(const GWClass& x);
GWClass operator-(const GWClass& x, const GWClass& y);
GWClass operator*(const GWClass& x, const GWClass& y);
GWClass operator*(int64_t k, const GWClass& x);
GWClass gw_pow(const GWClass& x, int e);

struct TorsionInfo {
    bool torsion = false;
    std::optional<uint64_t> order; // set iff torsion
};

struct NilpotenceInfo {
    bool nilpotent = false;
    std::optional<int> exponent;
    std::vector<std::string> rules;
};

/// Signature of the class at each ordering.
std::vector<int64_t> signatures(const WittClass& x);

/// Torsion iff every signature vanishes (non-real fields: always); the order
/// is found by doubling and is a power of two.
TorsionInfo is_torsion(const WittClass& x, int cap = kDefaultWitnessCap);
TorsionInfo is_torsion(const GWClass& x, int cap = kDefaultWitnessCap);

/// Nilpotent iff torsion of even rank; the least exponent is found by iteration.
NilpotenceInfo is_nilpotent(const WittClass& x, int cap = kDefaultWitnessCap);
/// Nilpotent iff torsion (rank 0, torsion Witt part).
NilpotenceInfo is_nilpotent(const GWClass& x, int cap = kDefaultWitnessCap);

/// Membership in I^n(F).
bool in_fundamental_power(const WittClass& x, int n);

/// The class of x in I^n/I^{n+1} = k^M_n(F) as a mod-2 normal form.
/// Throws DomainError when x is not in I^n. Negative n maps to k^M_n = 0.
MilnorNF en_invariant(const WittClass& x, int n);

/// Witt and GW literals: `<1,-1,2>`, `<1> - <-1>`, `2*<1,1> + 3`, where a bare
/// integer k stands for k<1>. The field prefix is handled by callers.
DiagonalForm parse_form(const FieldSpec& field, std::string_view text);
GWClass parse_gw(const FieldSpec& field, std::string_view text);
std::string to_string(const DiagonalForm& form);
std::string to_string(const WittClass& x);
/// `<aniso> + k*<1,-1>`, re-parseable by parse_gw.
std::string to_string(const GWClass& x);

} // namespace zeroline
