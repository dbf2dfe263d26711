#include "zeroline/arith.hpp"

#include <algorithm>
#include <limits>
#include <tuple>
#include <map>
#include <numeric>

namespace zeroline {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

uint64_t invmod(uint64_t a, uint64_t m) {
    // extended Euclid on signed 128-bit values
    __int128 t = 0, new_t = 1;
    __int128 r = m, new_r = a % m;
    while (new_r != 0) {
        __int128 q = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
    }
    if (r != 1) throw DomainError("invmod: argument not invertible");
    if (t < 0) t += m;
    return static_cast<uint64_t>(t);
}

uint64_t mod_of(const BigInt& a, uint64_t m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r.convert_to<uint64_t>();
}

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

uint64_t pollard_brent(uint64_t n) {
    if (n % 2 == 0) return 2;
    for (uint64_t c = 1;; ++c) {
        uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
        const uint64_t m = 128;
        uint64_t r = 1;
        auto f = [&](uint64_t v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (uint64_t i = 0; i < r; ++i) y = f(y);
            uint64_t k = 0;
            do {
                ys = y;
                for (uint64_t i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(uint64_t n, std::map<uint64_t, int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    for (uint64_t p = 2; p < 1000 && p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) {
                ++out[p];
                n /= p;
            }
            factor_into(n, out);
            return;
        }
    }
    uint64_t d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace

std::vector<std::pair<uint64_t, int>> factor(uint64_t n) {
    if (n == 0) throw DomainError("factor: zero has no factorization");
    std::map<uint64_t, int> acc;
    factor_into(n, acc);
    return {acc.begin(), acc.end()};
}

std::vector<std::pair<uint64_t, int>> factor(const BigInt& n) {
    BigInt m = abs(n);
    if (m == 0) throw DomainError("factor: zero has no factorization");
    if (m > BigInt(std::numeric_limits<uint64_t>::max()))
        throw Unsupported("factor: integer exceeds the 64-bit factorization range");
    return factor(m.convert_to<uint64_t>());
}

int legendre(const BigInt& a, uint64_t p) {
    if (p < 3 || p % 2 == 0 || !is_prime(p)) throw DomainError("legendre: modulus must be an odd prime");
    uint64_t r = mod_of(a, p);
    if (r == 0) return 0;
    return powmod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

uint64_t multiplicative_order(uint64_t a, uint64_t p) {
    a %= p;
    if (a == 0) throw DomainError("multiplicative_order: zero residue");
    uint64_t order = p - 1;
    for (auto [l, e] : factor(p - 1)) {
        for (int i = 0; i < e; ++i) {
            if (powmod(a, order / l, p) == 1) order /= l;
            else break;
        }
    }
    return order;
}

int64_t valuation(BigInt n, uint64_t p) {
    if (n == 0) throw DomainError("valuation: zero");
    int64_t v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

BigInt binomial(const BigInt& n, uint64_t k) {
    if (k > n) return 0;
    BigInt result = 1;
    for (uint64_t i = 0; i < k; ++i) {
        result *= (n - i);
        result /= (i + 1);
    }
    return result;
}

std::pair<uint64_t, unsigned> prime_power(uint64_t q) {
    if (q < 2) return {0, 0};
    auto f = factor(q);
    if (f.size() != 1) return {0, 0};
    return {f[0].first, static_cast<unsigned>(f[0].second)};
}

uint64_t gcd_u64(uint64_t a, uint64_t b) { return std::gcd(a, b); }

uint64_t lcm_u64(uint64_t a, uint64_t b) { return a / std::gcd(a, b) * b; }

std::string to_string(const BigInt& n) { return n.str(); }

} // namespace zeroline
