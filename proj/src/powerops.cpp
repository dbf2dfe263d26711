#include "zeroline/powerops.hpp"

#include <sstream>

namespace zeroline {

BinomValuation binom_valuation(uint64_t p, unsigned i, uint64_t v) {
    if (!is_prime(p)) throw DomainError("p must be prime");
    if (i < 1) throw DomainError("i must be at least 1");
    if (i > 4096) throw Unsupported("i too large");
    if (v < 1) throw DomainError("v must be positive");
    if (v % p == 0) throw DomainError("v must be coprime to p");
    BinomValuation out;
    out.p = p;
    out.i = i;
    out.v = v;
    out.r = BigInt(v);
    for (unsigned k = 0; k < i; ++k) out.r *= p;
    out.binomial = binomial(out.r, p);
    out.valuation = valuation(out.binomial, p);
    out.bound = static_cast<int64_t>(i) - 1;
    out.satisfies_bound = out.valuation >= out.bound;
    return out;
}

ExponentBound nishida_exponent_bound(uint64_t p, unsigned i, uint64_t m) {
    if (!is_prime(p)) throw DomainError("p must be prime");
    if (i < 1) throw DomainError("i must be at least 1");
    if (m < 1) throw DomainError("m must be at least 1");
    if (i > 4096) throw Unsupported("i too large");
    ExponentBound out;
    out.p = p;
    out.i = i;
    out.m = m;
    const BigInt step = BigInt(1) + BigInt(m) * (p + 1);
    BigInt N = 1;
    {
        std::ostringstream s;
        s << "start: " << p << "^" << i << " x = 0";
        out.trace.push_back(s.str());
    }
    for (unsigned k = 1; k <= i; ++k) {
        N *= step;
        std::ostringstream s;
        s << "step " << k << ": " << p << "^" << (i - k) << " x^" << to_string(N) << " = 0 (raising to the power "
          << to_string(step) << " = 1 + " << m << "*(" << p << "+1))";
        out.trace.push_back(s.str());
    }
    out.N = N;
    out.trace.push_back("x^" + to_string(N) + " = 0; upper bound, not claimed minimal");
    return out;
}

KPBidegrees kp_bidegrees(uint64_t p, int64_t q, int64_t w, int64_t s, int64_t t) {
    if (!is_prime(p)) throw DomainError("p must be prime");
    const int64_t P = static_cast<int64_t>(p);
    KPBidegrees out;
    out.source_total = {q, w};
    out.target_sphere = {P * q, P * w};
    out.map_bidegree = {P * q + s, P * w + t};
    return out;
}

} // namespace zeroline
