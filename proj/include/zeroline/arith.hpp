#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace zeroline {

using BigInt = boost::multiprecision::cpp_int;

/// Raised when an input is outside the domain an operation is defined on.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a query is well posed but not covered by the supported tables.
class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m);
uint64_t invmod(uint64_t a, uint64_t m);
uint64_t mod_of(const BigInt& a, uint64_t m);

/// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(uint64_t n);

/// Prime factorization (Pollard-Brent), sorted by prime.
std::vector<std::pair<uint64_t, int>> factor(uint64_t n);

/// Factorization of |n| for n that fits in 64 bits; throws Unsupported otherwise.
std::vector<std::pair<uint64_t, int>> factor(const BigInt& n);

/// Quadratic residue symbol (a/p) for an odd prime p.
int legendre(const BigInt& a, uint64_t p);

/// Multiplicative order of a modulo the prime p (a coprime to p).
uint64_t multiplicative_order(uint64_t a, uint64_t p);

/// p-adic valuation of a nonzero integer.
int64_t valuation(BigInt n, uint64_t p);

/// Exact binomial coefficient.
BigInt binomial(const BigInt& n, uint64_t k);

/// Prime power decomposition q = p^k, or nullopt-style {0,0} when q is not a prime power.
std::pair<uint64_t, unsigned> prime_power(uint64_t q);

uint64_t gcd_u64(uint64_t a, uint64_t b);
uint64_t lcm_u64(uint64_t a, uint64_t b);

std::string to_string(const BigInt& n);

} // namespace zeroline
