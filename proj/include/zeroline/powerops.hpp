#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zeroline/arith.hpp"
#include "zeroline/etalocal.hpp"

namespace zeroline {

struct BinomValuation {
    uint64_t p = 0;
    unsigned i = 0;
    uint64_t v = 0;
    BigInt r;        // p^i v
    BigInt binomial; // C(r, p)
    int64_t valuation = 0;
    int64_t bound = 0; // i - 1
    bool satisfies_bound = false;
};

/// nu_p(C(p^i v, p)) computed exactly; throws DomainError unless p is prime,
/// i >= 1, v >= 1 and gcd(v, p) = 1.
BinomValuation binom_valuation(uint64_t p, unsigned i, uint64_t v);

struct ExponentBound {
    uint64_t p = 0;
    unsigned i = 0;
    uint64_t m = 0;
    /// (1 + m(p+1))^i: an upper bound delivered by the inductive argument, not
    /// claimed minimal.
    BigInt N;
    std::vector<std::string> trace;
};

/// If p^i x = 0 and x^{1+m(p+1)} lowers the p-torsion exponent by one, then
/// x^N = 0 for the returned N.
ExponentBound nishida_exponent_bound(uint64_t p, unsigned i, uint64_t m);

struct KPBidegrees {
    BiDeg source_total;  // the sphere S^{q,w}
    BiDeg target_sphere; // S^{pq,pw}
    BiDeg map_bidegree;  // p(q,w) + (s,t)
};

KPBidegrees kp_bidegrees(uint64_t p, int64_t q, int64_t w, int64_t s, int64_t t);

} // namespace zeroline
