#pragma once

// Elementary integer arithmetic shared by every module: big numbers,
// modular powers, primality, Legendre and Hilbert symbols.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <tuple>
#include <utility>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace quatrep {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Error raised for violated preconditions and invalid input.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline int64_t mod(int64_t a, int64_t m) {
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
    uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

inline int64_t ipow(int64_t base, int exp) {
    int64_t r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

/// Inverse of a modulo m; throws if gcd(a, m) != 1.
inline int64_t invmod(int64_t a, int64_t m) {
    int64_t g = m, x = 0, x1 = 1, a1 = mod(a, m);
    while (a1) {
        int64_t q = g / a1;
        std::tie(g, a1) = std::make_pair(a1, g - q * a1);
        std::tie(x, x1) = std::make_pair(x1, x - q * x1);
    }
    if (g != 1) throw Error("invmod: not invertible");
    return mod(x, m);
}

inline bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<int64_t> prime_factors(int64_t n) {
    std::vector<int64_t> out;
    for (int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline int valuation(int64_t n, int64_t p) {
    if (n == 0) throw Error("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

inline int valuation(const BigInt& n, int64_t p) {
    if (n == 0) throw Error("valuation of zero");
    int v = 0;
    BigInt m = n;
    while (m % p == 0) {
        m /= p;
        ++v;
    }
    return v;
}

/// Legendre symbol (a | p) for an odd prime p.
inline int legendre(int64_t a, int64_t p) {
    int64_t r = mod(a, p);
    if (r == 0) return 0;
    return powmod(static_cast<uint64_t>(r), static_cast<uint64_t>((p - 1) / 2),
                  static_cast<uint64_t>(p)) == 1
               ? 1
               : -1;
}

inline int legendre(const BigInt& a, int64_t p) {
    BigInt r = a % p;
    if (r < 0) r += p;
    return legendre(r.convert_to<int64_t>(), p);
}

/// Smallest positive quadratic non-residue modulo the odd prime p.
inline int64_t smallest_nonresidue(int64_t p) {
    for (int64_t u = 2; u < p; ++u)
        if (legendre(u, p) == -1) return u;
    throw Error("no non-residue");
}

/// Hilbert symbol (a, b)_l over Q_l for non-zero integers; l prime or l = 0 for the real place.
inline int hilbert_symbol(int64_t a, int64_t b, int64_t l) {
    if (a == 0 || b == 0) throw Error("hilbert_symbol: zero argument");
    if (l == 0) return (a < 0 && b < 0) ? -1 : 1;
    int alpha = valuation(a, l), beta = valuation(b, l);
    int64_t u = a, v = b;
    for (int i = 0; i < alpha; ++i) u /= l;
    for (int i = 0; i < beta; ++i) v /= l;
    if (l != 2) {
        int s = ((alpha * beta) % 2 && (l % 4 == 3)) ? -1 : 1;
        int lu = legendre(u, l), lv = legendre(v, l);
        int r = s;
        if (beta % 2) r *= lu;
        if (alpha % 2) r *= lv;
        return r;
    }
    auto eps = [](int64_t x) { return static_cast<int>(mod((mod(x, 8) - 1) / 2, 2)); };
    auto omega = [](int64_t x) {
        int64_t y = mod(x, 8);
        return static_cast<int>(((y * y - 1) / 8) % 2);
    };
    int e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
    return (e % 2) ? -1 : 1;
}

/// Integer square root of n >= 0 (floor).
inline BigInt isqrt(const BigInt& n) {
    if (n < 0) throw Error("isqrt of negative");
    return boost::multiprecision::sqrt(n);
}

inline int64_t isqrt64(int64_t n) {
    int64_t r = static_cast<int64_t>(std::sqrt(static_cast<long double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

/// Rational -> "num/den" or "num".
inline std::string to_string(const Rational& r) {
    auto n = boost::multiprecision::numerator(r);
    auto d = boost::multiprecision::denominator(r);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

/// Square root of a modulo an odd prime (Tonelli-Shanks); a must be a residue.
inline uint64_t sqrtmod(uint64_t a, uint64_t p) {
    a %= p;
    if (a == 0) return 0;
    if (powmod(a, (p - 1) / 2, p) != 1) throw Error("sqrtmod: non-residue");
    uint64_t q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    uint64_t z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    uint64_t m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        uint64_t i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        uint64_t b = c;
        for (uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    return r;
}

/// Primitive root-of-unity search: an element of exact order n modulo prime l (n | l-1).
inline uint64_t root_of_unity(uint64_t n, uint64_t l) {
    if ((l - 1) % n) throw Error("root_of_unity: order does not divide l-1");
    auto fac = prime_factors(static_cast<int64_t>(n));
    for (uint64_t g = 2; g < l; ++g) {
        uint64_t z = powmod(g, (l - 1) / n, l);
        bool ok = true;
        for (auto q : fac)
            if (powmod(z, n / static_cast<uint64_t>(q), l) == 1) ok = false;
        if (ok) return z;
    }
    throw Error("root_of_unity: not found");
}

inline void require_odd_prime(int64_t p) {
    if (p == 2) throw Error("p = 2 is not supported: the norm-image lemma fails for dyadic fields");
    if (!is_prime(p)) throw Error("p = " + std::to_string(p) + " is not an odd prime");
}

}  // namespace quatrep
