#pragma once

// Polynomials over F_l (l < 2^31) and over Z. Root finding and factoring
// modulo a prime (Cantor-Zassenhaus), and factorization over Q by Hensel
// lifting and recombination.

#include "quatrep/arith.hpp"

#include <algorithm>
#include <random>

namespace quatrep {

// ---------------------------------------------------------------------------
// F_l[x], coefficients low degree first, no trailing zeros (zero = empty).

using ModPoly = std::vector<uint64_t>;

namespace fp {

inline void trim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}
inline int deg(const ModPoly& a) { return static_cast<int>(a.size()) - 1; }

inline ModPoly add(const ModPoly& a, const ModPoly& b, uint64_t l) {
    ModPoly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] = (c[i] + b[i]) % l;
    trim(c);
    return c;
}
inline ModPoly sub(const ModPoly& a, const ModPoly& b, uint64_t l) {
    ModPoly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] = (c[i] + l - b[i]) % l;
    trim(c);
    return c;
}
inline ModPoly scale(const ModPoly& a, uint64_t s, uint64_t l) {
    ModPoly c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = mulmod(a[i], s, l);
    trim(c);
    return c;
}
inline ModPoly mul(const ModPoly& a, const ModPoly& b, uint64_t l) {
    if (a.empty() || b.empty()) return {};
    std::vector<unsigned __int128> acc(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) acc[i + j] += static_cast<unsigned __int128>(a[i]) * b[j];
    }
    ModPoly c(acc.size());
    for (size_t i = 0; i < acc.size(); ++i) c[i] = static_cast<uint64_t>(acc[i] % l);
    trim(c);
    return c;
}
/// Quotient and remainder; b non-zero.
inline std::pair<ModPoly, ModPoly> divmod(ModPoly a, const ModPoly& b, uint64_t l) {
    if (b.empty()) throw Error("polynomial division by zero");
    if (a.size() < b.size()) return {{}, a};
    uint64_t inv = static_cast<uint64_t>(invmod(static_cast<int64_t>(b.back()), static_cast<int64_t>(l)));
    ModPoly q(a.size() - b.size() + 1, 0);
    for (size_t i = a.size(); i-- >= b.size();) {
        uint64_t c = mulmod(a[i], inv, l);
        q[i - b.size() + 1] = c;
        if (c)
            for (size_t j = 0; j < b.size(); ++j) {
                size_t k = i - b.size() + 1 + j;
                a[k] = (a[k] + l - mulmod(c, b[j], l)) % l;
            }
        if (i == 0) break;
    }
    a.resize(b.size() - 1);
    trim(a);
    trim(q);
    return {q, a};
}
inline ModPoly rem(const ModPoly& a, const ModPoly& b, uint64_t l) { return divmod(a, b, l).second; }
inline ModPoly monic(const ModPoly& a, uint64_t l) {
    if (a.empty()) return a;
    return scale(a, static_cast<uint64_t>(invmod(static_cast<int64_t>(a.back()), static_cast<int64_t>(l))), l);
}
inline ModPoly gcd(ModPoly a, ModPoly b, uint64_t l) {
    while (!b.empty()) {
        ModPoly r = rem(a, b, l);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a, l);
}
/// (g, s, t) with s a + t b = g monic.
inline std::tuple<ModPoly, ModPoly, ModPoly> xgcd(ModPoly a, ModPoly b, uint64_t l) {
    ModPoly s0{1}, s1{}, t0{}, t1{1};
    while (!b.empty()) {
        auto [q, r] = divmod(a, b, l);
        a = std::move(b);
        b = std::move(r);
        ModPoly s2 = sub(s0, mul(q, s1, l), l), t2 = sub(t0, mul(q, t1, l), l);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (a.empty()) return {a, s0, t0};
    uint64_t inv = static_cast<uint64_t>(invmod(static_cast<int64_t>(a.back()), static_cast<int64_t>(l)));
    return {scale(a, inv, l), scale(s0, inv, l), scale(t0, inv, l)};
}
inline ModPoly powmod(ModPoly base, uint64_t e, const ModPoly& f, uint64_t l) {
    ModPoly r{1};
    base = rem(base, f, l);
    while (e) {
        if (e & 1) r = rem(mul(r, base, l), f, l);
        base = rem(mul(base, base, l), f, l);
        e >>= 1;
    }
    return r;
}
inline ModPoly derivative(const ModPoly& a, uint64_t l) {
    if (a.size() <= 1) return {};
    ModPoly d(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) d[i - 1] = mulmod(a[i], i % l, l);
    trim(d);
    return d;
}
inline uint64_t eval(const ModPoly& a, uint64_t x, uint64_t l) {
    uint64_t r = 0;
    for (size_t i = a.size(); i-- > 0;) r = (mulmod(r, x, l) + a[i]) % l;
    return r;
}

// Equal-degree splitting of a monic squarefree f whose irreducible factors all have degree d.
inline void equal_degree_split(const ModPoly& f, int d, uint64_t l, std::mt19937_64& rng, std::vector<ModPoly>& out) {
    if (deg(f) == d) {
        out.push_back(f);
        return;
    }
    std::uniform_int_distribution<uint64_t> dist(0, l - 1);
    while (true) {
        ModPoly a(static_cast<size_t>(deg(f)));
        for (auto& c : a) c = dist(rng);
        trim(a);
        if (deg(a) < 1) continue;
        // a^((l^d - 1)/2) = (a^(1 + l + ... + l^(d-1)))^((l-1)/2)
        ModPoly norm{1}, frob = a;
        for (int i = 0; i < d; ++i) {
            norm = rem(mul(norm, frob, l), f, l);
            if (i + 1 < d) frob = powmod(frob, l, f, l);
        }
        ModPoly b = sub(powmod(norm, (l - 1) / 2, f, l), ModPoly{1}, l);
        ModPoly g = gcd(f, b, l);
        if (deg(g) > 0 && deg(g) < deg(f)) {
            equal_degree_split(g, d, l, rng, out);
            equal_degree_split(divmod(f, g, l).first, d, l, rng, out);
            return;
        }
    }
}

/// Distinct roots in F_l of f (f non-zero), sorted.
inline std::vector<uint64_t> roots(const ModPoly& f0, uint64_t l, uint64_t seed = 1) {
    ModPoly f = monic(f0, l);
    if (deg(f) < 1) return {};
    ModPoly xl = powmod(ModPoly{0, 1}, l, f, l);
    ModPoly g = gcd(f, sub(xl, ModPoly{0, 1}, l), l);
    std::vector<uint64_t> out;
    if (g.size() > 1 && g[0] == 0) {
        out.push_back(0);
        g = divmod(g, ModPoly{0, 1}, l).first;
    }
    if (deg(g) >= 1) {
        std::mt19937_64 rng(seed);
        std::vector<ModPoly> lin;
        equal_degree_split(g, 1, l, rng, lin);
        for (auto& h : lin) out.push_back((l - h[0]) % l);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Irreducible factorization of a monic squarefree polynomial over F_l.
inline std::vector<ModPoly> factor_squarefree(const ModPoly& f0, uint64_t l, uint64_t seed = 1) {
    ModPoly f = monic(f0, l);
    std::vector<ModPoly> out;
    std::mt19937_64 rng(seed);
    ModPoly h{0, 1};
    int d = 0;
    while (deg(f) >= 2 * (d + 1)) {
        ++d;
        h = powmod(h, l, f, l);
        ModPoly g = gcd(f, sub(h, ModPoly{0, 1}, l), l);
        if (deg(g) > 0) {
            equal_degree_split(g, d, l, rng, out);
            f = divmod(f, g, l).first;
            h = rem(h, f, l);
        }
    }
    if (deg(f) > 0) out.push_back(f);
    std::sort(out.begin(), out.end(), [](const ModPoly& a, const ModPoly& b) {
        return a.size() != b.size() ? a.size() < b.size() : std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    });
    return out;
}

}  // namespace fp

// ---------------------------------------------------------------------------
// Z[x] and Q[x]

using ZPoly = std::vector<BigInt>;
using QPoly = std::vector<Rational>;

namespace zp {

inline void trim(ZPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}
inline void trim(QPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}
inline int deg(const ZPoly& a) { return static_cast<int>(a.size()) - 1; }

inline ZPoly mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    trim(c);
    return c;
}

inline BigInt content(const ZPoly& a) {
    BigInt g = 0;
    for (const auto& c : a) g = boost::multiprecision::gcd(g, c);
    return g;
}

inline ZPoly primitive(ZPoly a) {
    trim(a);
    if (a.empty()) return a;
    BigInt g = content(a);
    if (a.back() < 0) g = -g;
    for (auto& c : a) c /= g;
    return a;
}

inline ZPoly from_rational(const QPoly& a) {
    BigInt l = 1;
    for (const auto& c : a) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(c));
    ZPoly z;
    for (const auto& c : a) z.push_back(boost::multiprecision::numerator(Rational(c * l)));
    return primitive(z);
}

inline QPoly to_rational(const ZPoly& a) {
    QPoly q;
    for (const auto& c : a) q.push_back(Rational(c));
    return q;
}

inline std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b) {
    if (b.empty()) throw Error("polynomial division by zero");
    if (a.size() < b.size()) return {{}, a};
    QPoly q(a.size() - b.size() + 1, 0);
    for (size_t i = a.size(); i-- >= b.size();) {
        Rational c = a[i] / b.back();
        q[i - b.size() + 1] = c;
        if (c != 0)
            for (size_t j = 0; j < b.size(); ++j) a[i - b.size() + 1 + j] -= c * b[j];
        if (i == 0) break;
    }
    a.resize(b.size() - 1);
    trim(a);
    trim(q);
    return {q, a};
}

/// Primitive gcd over Q, positive leading coefficient.
inline ZPoly gcd(const ZPoly& a, const ZPoly& b) {
    ZPoly x = primitive(a), y = primitive(b);
    while (!y.empty()) {
        auto r = divmod(to_rational(x), to_rational(y)).second;
        x = std::move(y);
        y = from_rational(r);
    }
    return primitive(x);
}

/// Exact quotient a / b over Z, or nullopt-like empty flag when b does not divide a.
inline bool divides(const ZPoly& b, const ZPoly& a, ZPoly* quotient = nullptr) {
    if (b.empty()) return false;
    ZPoly r = a;
    trim(r);
    if (r.empty()) {
        if (quotient) quotient->clear();
        return true;
    }
    if (r.size() < b.size()) return false;
    ZPoly q(r.size() - b.size() + 1, 0);
    for (size_t i = r.size(); i-- >= b.size();) {
        if (r[i] % b.back() != 0) return false;
        BigInt c = r[i] / b.back();
        q[i - b.size() + 1] = c;
        if (c != 0)
            for (size_t j = 0; j < b.size(); ++j) r[i - b.size() + 1 + j] -= c * b[j];
        if (i == 0) break;
    }
    for (const auto& c : r)
        if (c != 0) return false;
    trim(q);
    if (quotient) *quotient = q;
    return true;
}

inline ZPoly derivative(const ZPoly& a) {
    ZPoly d;
    for (size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<int64_t>(i));
    trim(d);
    return d;
}

/// Squarefree decomposition (Yun): f = c * prod_i g_i^i with g_i squarefree, coprime.
inline std::vector<std::pair<ZPoly, int>> squarefree(const ZPoly& f0) {
    ZPoly f = primitive(f0);
    std::vector<std::pair<ZPoly, int>> out;
    if (deg(f) < 1) return out;
    auto dq = [](const QPoly& a) {
        QPoly d;
        for (size_t k = 1; k < a.size(); ++k) d.push_back(a[k] * static_cast<int64_t>(k));
        trim(d);
        return d;
    };
    QPoly fq = to_rational(f);
    QPoly a = to_rational(gcd(f, derivative(f)));
    QPoly b = divmod(fq, a).first;
    QPoly c = divmod(dq(fq), a).first;
    QPoly d = c;
    {
        QPoly bd = dq(b);
        d.resize(std::max(d.size(), bd.size()), 0);
        for (size_t k = 0; k < bd.size(); ++k) d[k] -= bd[k];
        trim(d);
    }
    int i = 1;
    while (b.size() > 1) {
        ZPoly g = d.empty() ? from_rational(b) : gcd(from_rational(b), from_rational(d));
        if (deg(g) > 0) out.push_back({g, i});
        QPoly gq = to_rational(g);
        b = divmod(b, gq).first;
        c = d.empty() ? QPoly{} : divmod(d, gq).first;
        QPoly bd = dq(b);
        d = c;
        d.resize(std::max(d.size(), bd.size()), 0);
        for (size_t k = 0; k < bd.size(); ++k) d[k] -= bd[k];
        trim(d);
        ++i;
    }
    return out;
}

inline ModPoly reduce(const ZPoly& a, uint64_t p) {
    ModPoly r;
    for (const auto& c : a) {
        BigInt m = c % p;
        if (m < 0) m += p;
        r.push_back(m.convert_to<uint64_t>());
    }
    fp::trim(r);
    return r;
}

inline ZPoly lift_symmetric(const ZPoly& a, const BigInt& M) {
    ZPoly r;
    for (auto c : a) {
        c %= M;
        if (c < 0) c += M;
        if (2 * c > M) c -= M;
        r.push_back(c);
    }
    trim(r);
    return r;
}

inline ZPoly mod_poly(const ZPoly& a, const BigInt& M) {
    ZPoly r;
    for (auto c : a) {
        c %= M;
        if (c < 0) c += M;
        r.push_back(c);
    }
    trim(r);
    return r;
}

// divmod by a monic b over Z/M
inline std::pair<ZPoly, ZPoly> divmod_monic(ZPoly a, const ZPoly& b, const BigInt& M) {
    a = mod_poly(a, M);
    if (a.size() < b.size()) return {{}, a};
    ZPoly q(a.size() - b.size() + 1, 0);
    for (size_t i = a.size(); i-- >= b.size();) {
        BigInt c = a[i] % M;
        q[i - b.size() + 1] = c;
        if (c != 0)
            for (size_t j = 0; j < b.size(); ++j) a[i - b.size() + 1 + j] = (a[i - b.size() + 1 + j] - c * b[j]) % M;
        if (i == 0) break;
    }
    a.resize(b.size() - 1);
    return {mod_poly(q, M), mod_poly(a, M)};
}

inline ZPoly add(const ZPoly& a, const ZPoly& b) {
    ZPoly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    trim(c);
    return c;
}
inline ZPoly neg(ZPoly a) {
    for (auto& c : a) c = -c;
    return a;
}

inline ZPoly from_mod(const ModPoly& a) {
    ZPoly z;
    for (auto c : a) z.push_back(BigInt(c));
    return z;
}

// Quadratic Hensel lifting of f = g h (mod p) with h monic to f = g* h* (mod p^(2^k) >= bound).
inline std::pair<ZPoly, ZPoly> hensel_two(const ZPoly& f, const ModPoly& g0, const ModPoly& h0, uint64_t p, const BigInt& bound,
                                          BigInt* modulus) {
    auto [one, s0, t0] = fp::xgcd(g0, h0, p);
    if (one != ModPoly{1}) throw Error("hensel: factors not coprime");
    ZPoly g = from_mod(g0), h = from_mod(h0), s = from_mod(s0), t = from_mod(t0);
    BigInt m = p;
    while (m < bound) {
        BigInt m2 = m * m;
        ZPoly e = mod_poly(add(f, neg(mul(g, h))), m2);
        auto [q, r] = divmod_monic(mul(s, e), h, m2);
        ZPoly gs = mod_poly(add(add(g, mul(t, e)), mul(q, g)), m2);
        ZPoly hs = mod_poly(add(h, r), m2);
        ZPoly b = mod_poly(add(add(mul(s, gs), mul(t, hs)), ZPoly{-1}), m2);
        auto [c, d] = divmod_monic(mul(s, b), hs, m2);
        ZPoly ss = mod_poly(add(s, neg(d)), m2);
        ZPoly ts = mod_poly(add(add(t, neg(mul(t, b))), neg(mul(c, gs))), m2);
        g = gs;
        h = hs;
        s = ss;
        t = ts;
        m = m2;
    }
    *modulus = m;
    return {g, h};
}

// Lift a complete modular factorization f = lc * prod(fs) mod p; returns monic lifts.
inline void hensel_multi(const ZPoly& f, const std::vector<ModPoly>& fs, uint64_t p, const BigInt& bound,
                         std::vector<ZPoly>& out, BigInt* modulus) {
    if (fs.size() == 1) {
        // f mod M is lc * (monic lift): the monic factor is lc^{-1} f
        BigInt m = p;
        while (m < bound) m *= m;
        *modulus = m;
        BigInt lc = f.back() % m;
        if (lc < 0) lc += m;
        BigInt inv = 0;
        {
            // inverse of lc modulo m (p does not divide lc)
            BigInt a = lc, b = m, x0 = 1, x1 = 0;
            while (b != 0) {
                BigInt q = a / b;
                BigInt na = a - q * b, nx = x0 - q * x1;
                a = b;
                b = na;
                x0 = x1;
                x1 = nx;
            }
            inv = x0 % m;
            if (inv < 0) inv += m;
        }
        ZPoly r;
        for (const auto& c : f) r.push_back(c * inv);
        out.push_back(mod_poly(r, m));
        return;
    }
    size_t half = fs.size() / 2;
    ModPoly g0{1}, h0{1};
    for (size_t i = 0; i < half; ++i) g0 = fp::mul(g0, fs[i], p);
    for (size_t i = half; i < fs.size(); ++i) h0 = fp::mul(h0, fs[i], p);
    ModPoly lcp = reduce(ZPoly{f.back()}, p);
    g0 = fp::scale(g0, lcp[0], p);
    BigInt m;
    auto [g, h] = hensel_two(f, g0, h0, p, bound, &m);
    std::vector<ModPoly> left(fs.begin(), fs.begin() + static_cast<long>(half)), right(fs.begin() + static_cast<long>(half), fs.end());
    // the sub-lifts target the already lifted halves at the same modulus
    BigInt m1, m2;
    hensel_multi(g, left, p, bound, out, &m1);
    hensel_multi(h, right, p, bound, out, &m2);
    *modulus = m;
}

inline BigInt mignotte_bound(const ZPoly& f) {
    // 2^n * ||f||_2 * |lc|, rounded up; sufficient for coefficients of any factor times lc
    BigInt s = 0;
    for (const auto& c : f) s += c * c;
    BigInt n2 = isqrt(s) + 1;
    BigInt b = n2 * abs(f.back());
    for (int i = 0; i < deg(f); ++i) b *= 2;
    return 2 * b + 1;
}

// Factor a primitive squarefree polynomial of degree >= 1 into irreducibles over Z.
inline std::vector<ZPoly> factor_squarefree(const ZPoly& f) {
    if (deg(f) <= 1) return {f};
    // choose a prime: l.c. not divisible, squarefree mod p, fewest factors among a few
    std::vector<ModPoly> best;
    uint64_t bp = 0;
    int tried = 0;
    for (uint64_t p = 3; tried < 6; p += 2) {
        if (!is_prime(static_cast<int64_t>(p))) continue;
        if (f.back() % p == 0) continue;
        ModPoly fm = reduce(f, p);
        if (fp::deg(fp::gcd(fm, fp::derivative(fm, p), p)) > 0) continue;
        auto fs = fp::factor_squarefree(fm, p, p);
        ++tried;
        if (bp == 0 || fs.size() < best.size()) {
            best = fs;
            bp = p;
        }
        if (best.size() == 1) break;
    }
    if (best.size() == 1) return {f};
    BigInt bound = mignotte_bound(f);
    std::vector<ZPoly> lifted;
    BigInt M;
    hensel_multi(f, best, bp, bound, lifted, &M);
    // recombination by subsets of increasing size
    std::vector<ZPoly> result;
    ZPoly rest = f;
    std::vector<ZPoly> pool = lifted;
    size_t k = 1;
    while (2 * k <= pool.size()) {
        bool found = false;
        std::vector<size_t> idx(k);
        for (size_t i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            ZPoly cand{rest.back()};
            for (auto i : idx) cand = mod_poly(mul(cand, pool[i]), M);
            cand = primitive(lift_symmetric(cand, M));
            ZPoly q;
            if (deg(cand) > 0 && divides(cand, rest, &q)) {
                result.push_back(cand);
                rest = primitive(q);
                std::vector<ZPoly> np;
                for (size_t i = 0; i < pool.size(); ++i)
                    if (std::find(idx.begin(), idx.end(), i) == idx.end()) np.push_back(pool[i]);
                pool = np;
                found = true;
                break;
            }
            // next combination
            int i = static_cast<int>(k) - 1;
            while (i >= 0 && idx[static_cast<size_t>(i)] == pool.size() - k + static_cast<size_t>(i)) --i;
            if (i < 0) break;
            ++idx[static_cast<size_t>(i)];
            for (size_t j = static_cast<size_t>(i) + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!found) ++k;
    }
    if (deg(rest) > 0) result.push_back(primitive(rest));
    return result;
}

inline bool poly_less(const ZPoly& a, const ZPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

/// Irreducible factorization over Q: primitive factors with positive leading
/// coefficient and multiplicities, sorted. Constants are dropped.
inline std::vector<std::pair<ZPoly, int>> factor(const ZPoly& f) {
    std::vector<std::pair<ZPoly, int>> out;
    for (auto& [g, e] : squarefree(f)) {
        // remove powers of x first for a cleaner modular image
        ZPoly h = g;
        if (!h.empty() && h[0] == 0) {
            out.push_back({ZPoly{0, 1}, e});
            h.erase(h.begin());
            h = primitive(h);
        }
        if (deg(h) < 1) continue;
        for (auto& fac : factor_squarefree(h)) out.push_back({primitive(fac), e});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return poly_less(a.first, b.first) || (a.first == b.first && a.second < b.second);
    });
    return out;
}

inline std::string to_string(const ZPoly& a, const std::string& var = "x") {
    if (a.empty()) return "0";
    std::string s;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] == 0) continue;
        BigInt c = a[i];
        bool neg = c < 0;
        if (neg) c = -c;
        if (s.empty()) s += neg ? "-" : "";
        else s += neg ? " - " : " + ";
        if (i == 0 || c != 1) s += c.str();
        if (i > 0) {
            if (c != 1) s += "*";
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

}  // namespace zp

}  // namespace quatrep
