#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "zeroline/arith.hpp"

namespace zeroline {

/// Bidegree (stem, weight).
struct BiDeg {
    int64_t a = 0;
    int64_t b = 0;

    friend BiDeg operator+(BiDeg x, BiDeg y) { return {x.a + y.a, x.b + y.b}; }
    friend BiDeg operator-(BiDeg x, BiDeg y) { return {x.a - y.a, x.b - y.b}; }
    friend auto operator<=>(const BiDeg&, const BiDeg&) = default;
};

inline constexpr BiDeg kEtaDeg{1, 1};
inline constexpr BiDeg kSigmaDeg{7, 4};
inline constexpr BiDeg kMu9Deg{9, 5};

/// eta^eta * sigma^sigma * mu9^mu
struct Monomial {
    int64_t eta = 0;
    int64_t sigma = 0;
    int64_t mu = 0;

    BiDeg bidegree() const;
    friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

/// Element of F_2[eta^{+-1}, sigma, mu9]/(eta sigma^2), or of its
/// localization at mu9: a set of distinct monomials.
struct EtaLocalElt {
    bool mu_inverted = false;
    std::set<Monomial> terms;

    bool is_zero() const { return terms.empty(); }
    friend bool operator==(const EtaLocalElt&, const EtaLocalElt&) = default;
};

EtaLocalElt eta_local(const std::vector<Monomial>& monomials, bool mu_inverted);
/// Drops monomials with sigma^2, cancels pairs; throws DomainError on a
/// negative mu9 exponent without localization.
EtaLocalElt r_normal_form(const EtaLocalElt& x);
EtaLocalElt operator+(const EtaLocalElt& x, const EtaLocalElt& y);
EtaLocalElt operator*(const EtaLocalElt& x, const EtaLocalElt& y);

/// Basis monomials of the ring in bidegree d.
std::vector<Monomial> r_basis(BiDeg d, bool invert_mu9);
int r_dim(BiDeg d, bool invert_mu9);

/// Z/2 in bidegrees with a = b (mod 4), zero elsewhere.
int kt_dim(BiDeg d);

/// Element of pi_{**} KT over C: the set of bidegrees with coefficient 1.
struct KTElt {
    std::set<BiDeg> support;
    bool is_zero() const { return support.empty(); }
    friend bool operator==(const KTElt&, const KTElt&) = default;
};

/// Throws DomainError when some bidegree is outside the support lattice.
KTElt kt_element(const std::vector<BiDeg>& degrees);
KTElt operator+(const KTElt& x, const KTElt& y);
KTElt operator*(const KTElt& x, const KTElt& y);

/// eta and mu9 go to generators, sigma to zero.
KTElt unit_map(const EtaLocalElt& x);

struct WindowRow {
    BiDeg d;
    int r_dim = 0;
    int kt_dim = 0;
    int rank = 0;
    int kernel_dim = 0;
    int kt_shifted = 0; // kt_dim(d - (7,4))
};

struct WindowReport {
    int64_t a0 = 0, a1 = -1, b0 = 0, b1 = -1;
    bool surjective_everywhere = true;
    bool shift_match = true;
    bool two_copies = true; // r_dim = kt_dim(d) + kt_dim(d - (7,4))
    std::vector<WindowRow> rows;
};

/// Per-bidegree F_2 linear algebra of the unit map on [a0,a1] x [b0,b1]; an
/// empty window passes vacuously.
WindowReport verify_main2(int64_t a0, int64_t a1, int64_t b0, int64_t b1);

/// Rows are stems, columns weights; each cell is `r_dim/rank/kernel`.
std::string window_chart_tsv(const WindowReport& report);

/// `eta^a * sigma^e * mu9^b`, sums with '+', `1` and `0`.
EtaLocalElt parse_eta_local(std::string_view text, bool mu_inverted);
std::string to_string(const Monomial& m);
std::string to_string(const EtaLocalElt& x);
std::string to_string(const BiDeg& d);
std::string to_string(const KTElt& x);

} // namespace zeroline
