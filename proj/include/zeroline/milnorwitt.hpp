#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zeroline/milnork.hpp"
#include "zeroline/quadform.hpp"

namespace zeroline {

/// Raised when a pair (alpha, phi) does not lie in the fiber product
/// I^n x_{k^M_n} K^M_n.
class IncompatiblePair : public DomainError {
public:
    using DomainError::DomainError;
};

/// An element of K^MW_n(F) = I^n x_{I^n/I^{n+1}} K^M_n, with I^n = W for
/// n <= 0 and K^M_n = 0 for n < 0. In degree 0 the pair is a GW class
/// (km holds the rank).
struct MWElt {
    FieldSpec field;
    int degree = 0;
    MilnorElt km;
    WittClass w;

    friend bool operator==(const MWElt&, const MWElt&) = default;
};

/// Checks compatibility; throws IncompatiblePair otherwise.
MWElt mw_make(int degree, const MilnorElt& alpha, const WittClass& phi);
/// phi * eta^{-n} for n < 0.
MWElt mw_negative(int degree, const WittClass& phi);
MWElt mw_from_gw(const GWClass& x);
GWClass mw_to_gw(const MWElt& x);

MWElt mw_zero(const FieldSpec& field, int degree);
MWElt mw_one(const FieldSpec& field);
MWElt mw_eta(const FieldSpec& field);
MWElt mw_epsilon(const FieldSpec& field);
MWElt mw_hyperbolic(const FieldSpec& field);
/// [a] = ({a}, <a> - <1>) in degree 1.
MWElt mw_unit(const Unit& a);
/// Lift of a symbol sum: {a_1..a_n} -> ({a_1..a_n}, prod (<a_i> - <1>)).
MWElt mw_lift(const MilnorElt& alpha);

bool mw_is_zero(const MWElt& x);
bool mw_equal(const MWElt& x, const MWElt& y);

MWElt operator+(const MWElt& x, const MWElt& y);
MWElt operator-(const MWElt& x);
MWElt operator-(const MWElt& x, const MWElt& y);
MWElt operator*(int64_t k, const MWElt& x);
/// Componentwise product in the fiber product ring; exact in every degree.
MWElt mw_mul(const MWElt& x, const MWElt& y);
MWElt mw_pow(const MWElt& x, int e);
MWElt eta_mul(const MWElt& x);

struct MWTorsion {
    Tri torsion = Tri::Unknown;
    std::optional<uint64_t> order; // set iff torsion is Yes
};

MWTorsion mw_is_torsion(const MWElt& x, int cap = kDefaultWitnessCap);
NilpotenceVerdict mw_is_nilpotent(const MWElt& x, int cap = kDefaultWitnessCap);

struct ScanOptions {
    size_t budget = 4096;
    int rank_bound = 8;
    size_t samples = 200;
    uint64_t seed = 1;
    int cap = kDefaultWitnessCap;
};

struct ScanReport {
    FieldSpec field;
    int degree = 0;
    bool sampled = false;
    bool budget_exhausted = false;
    std::string enumeration;
    size_t checked = 0;
    size_t torsion = 0;
    size_t nilpotent = 0;
    size_t disagreements = 0;
    std::vector<std::string> disagreement_examples;
    size_t counterexamples = 0;
    std::vector<std::string> counterexample_examples;
};

/// Enumerates (F_q, R, C) or samples (Q) elements of K^MW_n, cross-checks the
/// torsion and nilpotence decisions against brute-force iteration, and
/// collects torsion elements that are not nilpotent.
ScanReport nishida_scan(const FieldSpec& field, int degree, const ScanOptions& options = {});

/// `MW(Q, 1; {2} | <1,-2>)`, `MW(F3, -2; <1,1>)`, `MW(Q, 0; <1,1> - 2)`.
MWElt parse_mw(std::string_view text);
std::string to_string(const MWElt& x);

} // namespace zeroline
