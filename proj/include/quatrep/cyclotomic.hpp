#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_n).
//
// An element is stored as an integer coefficient vector in the power basis
// 1, z, ..., z^(phi(n)-1), reduced modulo the n-th cyclotomic polynomial, over
// a single positive denominator. The representation is canonical, so equality
// is coefficient equality. Elements of different conductors are compared and
// combined in the field of the lcm conductor.

#include "quatrep/arith.hpp"

#include <complex>
#include <map>
#include <mutex>

namespace quatrep {

/// An element of Q/Z, i.e. the angle of a root of unity exp(2 pi i num/den).
struct Phase {
    int64_t num = 0;
    int64_t den = 1;

    Phase() = default;
    Phase(int64_t n, int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den <= 0) throw Error("Phase: non-positive denominator");
        num = mod(num, den);
        int64_t g = std::gcd(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }
    Phase operator+(const Phase& o) const {
        int64_t l = std::lcm(den, o.den);
        return Phase(mod(num * (l / den), l) + mod(o.num * (l / o.den), l), l);
    }
    Phase operator-() const { return Phase(-num, den); }
    Phase operator-(const Phase& o) const { return *this + (-o); }
    Phase operator*(int64_t k) const {
        return Phase(static_cast<int64_t>((static_cast<__int128>(num) * mod(k, den)) % den), den);
    }
    Phase& operator+=(const Phase& o) { return *this = *this + o; }
    bool operator==(const Phase& o) const = default;
    auto operator<=>(const Phase& o) const = default;
    bool is_zero() const { return num == 0; }
    /// Order of the root of unity.
    int64_t order() const { return den; }
};

namespace detail {

using IntPoly = std::vector<BigInt>;

// Exact quotient a / b for monic b dividing a.
inline IntPoly poly_divexact(IntPoly a, const IntPoly& b) {
    size_t db = b.size() - 1;
    if (a.size() < b.size()) return {};
    IntPoly q(a.size() - db, 0);
    for (size_t i = a.size(); i-- > db;) {
        BigInt c = a[i];
        q[i - db] = c;
        if (c != 0)
            for (size_t j = 0; j <= db; ++j) a[i - db + j] -= c * b[j];
    }
    return q;
}

inline IntPoly cyclotomic_polynomial_uncached(int64_t n, std::map<int64_t, IntPoly>& cache) {
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    IntPoly f(static_cast<size_t>(n) + 1, 0);
    f[0] = -1;
    f[static_cast<size_t>(n)] = 1;
    for (int64_t d = 1; d < n; ++d)
        if (n % d == 0) f = poly_divexact(f, cyclotomic_polynomial_uncached(d, cache));
    cache.emplace(n, f);
    return f;
}

inline const IntPoly& cyclotomic_polynomial(int64_t n) {
    static std::mutex mu;
    static std::map<int64_t, IntPoly> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    cyclotomic_polynomial_uncached(n, cache);
    return cache.at(n);
}

}  // namespace detail

class Cyclotomic {
public:
    Cyclotomic() : n_(1), coef_(1, 0), den_(1) {}
    explicit Cyclotomic(const Rational& r)
        : n_(1), coef_{boost::multiprecision::numerator(r)}, den_(boost::multiprecision::denominator(r)) {}
    Cyclotomic(int64_t v) : Cyclotomic(Rational(v)) {}  // NOLINT

    /// exp(2 pi i ph).
    static Cyclotomic root(const Phase& ph) { return from_exponents(ph.den, {{ph.num, BigInt(1)}}); }

    /// sum_k c_k zeta_n^k for a sparse list of (k, c_k).
    static Cyclotomic from_exponents(int64_t n, const std::vector<std::pair<int64_t, BigInt>>& terms) {
        if (n <= 0) throw Error("Cyclotomic: bad conductor");
        detail::IntPoly poly(static_cast<size_t>(n), 0);
        for (const auto& [k, c] : terms) poly[static_cast<size_t>(mod(k, n))] += c;
        return from_dense(n, std::move(poly));
    }

    /// Dense exponent vector of length n (coefficient of zeta_n^k at index k) over den.
    static Cyclotomic from_dense(int64_t n, detail::IntPoly poly, BigInt den = 1) {
        if (den == 0) throw Error("Cyclotomic: zero denominator");
        Cyclotomic z;
        z.n_ = n;
        z.coef_ = reduce(std::move(poly), n);
        if (den < 0) {
            den = -den;
            for (auto& c : z.coef_) c = -c;
        }
        z.den_ = std::move(den);
        z.normalize();
        return z;
    }

    int64_t conductor() const { return n_; }
    const std::vector<BigInt>& coefficients() const { return coef_; }
    const BigInt& denominator() const { return den_; }

    bool is_rational() const {
        for (size_t i = 1; i < coef_.size(); ++i)
            if (coef_[i] != 0) return false;
        return true;
    }
    Rational to_rational() const {
        if (!is_rational()) throw Error("Cyclotomic: value is not rational");
        return Rational(coef_[0], den_);
    }
    bool is_zero() const {
        for (const auto& c : coef_)
            if (c != 0) return false;
        return true;
    }

    /// Re-express in Q(zeta_m) for a multiple m of the conductor.
    Cyclotomic lift(int64_t m) const {
        if (m % n_) throw Error("Cyclotomic::lift: conductor does not divide target");
        if (m == n_) return *this;
        size_t s = static_cast<size_t>(m / n_);
        detail::IntPoly poly(static_cast<size_t>(m), 0);
        for (size_t i = 0; i < coef_.size(); ++i) poly[i * s] = coef_[i];
        Cyclotomic z;
        z.n_ = m;
        z.coef_ = reduce(std::move(poly), m);
        z.den_ = den_;
        return z;  // not normalized: keeps conductor m
    }

    Cyclotomic operator+(const Cyclotomic& o) const {
        int64_t m = std::lcm(n_, o.n_);
        Cyclotomic a = lift(m), b = o.lift(m);
        detail::IntPoly poly(static_cast<size_t>(m), 0);
        if (a.den_ == b.den_) {
            for (size_t i = 0; i < a.coef_.size(); ++i) poly[i] = a.coef_[i] + b.coef_[i];
            return from_dense(m, std::move(poly), a.den_);
        }
        for (size_t i = 0; i < a.coef_.size(); ++i) poly[i] = a.coef_[i] * b.den_ + b.coef_[i] * a.den_;
        return from_dense(m, std::move(poly), a.den_ * b.den_);
    }
    Cyclotomic operator-() const {
        Cyclotomic z = *this;
        for (auto& c : z.coef_) c = -c;
        return z;
    }
    Cyclotomic operator-(const Cyclotomic& o) const { return *this + (-o); }
    Cyclotomic operator*(const Cyclotomic& o) const {
        if (n_ == 1 && coef_[0] == 1 && den_ == 1) return o;
        if (o.n_ == 1 && o.coef_[0] == 1 && o.den_ == 1) return *this;
        int64_t m = std::lcm(n_, o.n_);
        Cyclotomic a = lift(m), b = o.lift(m);
        detail::IntPoly poly(static_cast<size_t>(m), 0);
        for (size_t i = 0; i < a.coef_.size(); ++i) {
            if (a.coef_[i] == 0) continue;
            for (size_t j = 0; j < b.coef_.size(); ++j) {
                if (b.coef_[j] == 0) continue;
                poly[(i + j) % static_cast<size_t>(m)] += a.coef_[i] * b.coef_[j];
            }
        }
        return from_dense(m, std::move(poly), a.den_ * b.den_);
    }
    Cyclotomic operator/(const Rational& r) const {
        if (r == 0) throw Error("Cyclotomic: division by zero");
        detail::IntPoly poly(static_cast<size_t>(n_), 0);
        auto rd = boost::multiprecision::denominator(r);
        for (size_t i = 0; i < coef_.size(); ++i) poly[i] = coef_[i] * rd;
        return from_dense(n_, std::move(poly), den_ * boost::multiprecision::numerator(r));
    }
    Cyclotomic& operator+=(const Cyclotomic& o) { return *this = *this + o; }
    Cyclotomic& operator-=(const Cyclotomic& o) { return *this = *this - o; }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

    /// Complex conjugation zeta -> zeta^{-1}.
    Cyclotomic conj() const { return galois(-1); }

    /// The automorphism zeta_n -> zeta_n^k, gcd(k, n) = 1.
    Cyclotomic galois(int64_t k) const {
        if (std::gcd(mod(k, n_), n_) != 1) throw Error("Cyclotomic::galois: exponent not coprime to conductor");
        detail::IntPoly poly(static_cast<size_t>(n_), 0);
        for (size_t i = 0; i < coef_.size(); ++i)
            poly[static_cast<size_t>(mod(static_cast<int64_t>(i) * k, n_))] += coef_[i];
        return from_dense(n_, std::move(poly), den_);
    }

    bool operator==(const Cyclotomic& o) const {
        int64_t m = std::lcm(n_, o.n_);
        Cyclotomic a = lift(m), b = o.lift(m);
        return a.den_ == b.den_ && a.coef_ == b.coef_;
    }

    std::complex<double> to_complex() const {
        std::complex<double> s = 0;
        const double two_pi = 6.283185307179586476925286766559;
        for (size_t i = 0; i < coef_.size(); ++i)
            if (coef_[i] != 0)
                s += coef_[i].convert_to<double>() *
                     std::polar(1.0, two_pi * static_cast<double>(i) / static_cast<double>(n_));
        return s / den_.convert_to<double>();
    }

    std::string str() const {
        if (is_rational()) return to_string(Rational(coef_[0], den_));
        std::string s;
        for (size_t i = 0; i < coef_.size(); ++i) {
            if (coef_[i] == 0) continue;
            if (!s.empty()) s += " + ";
            s += coef_[i].str();
            if (i > 0) s += "*z" + std::to_string(n_) + "^" + std::to_string(i);
        }
        if (den_ != 1) s = "(" + s + ")/" + den_.str();
        return s;
    }

private:
    static std::vector<BigInt> reduce(detail::IntPoly poly, int64_t n) {
        const auto& phi = detail::cyclotomic_polynomial(n);
        size_t d = phi.size() - 1;
        for (size_t i = poly.size(); i-- > d;) {
            BigInt c = poly[i];
            if (c == 0) continue;
            for (size_t j = 0; j <= d; ++j) poly[i - d + j] -= c * phi[j];
        }
        poly.resize(d);
        return poly;
    }

    void normalize() {
        // The power basis is a Q-basis, so rational elements have only a
        // constant term; those shrink to conductor 1.
        BigInt g = den_;
        for (const auto& c : coef_) g = boost::multiprecision::gcd(g, c);
        if (g > 1) {
            den_ /= g;
            for (auto& c : coef_) c /= g;
        }
        if (is_rational()) {
            n_ = 1;
            coef_.resize(1);
        }
    }

    int64_t n_;
    std::vector<BigInt> coef_;
    BigInt den_;
};

inline Cyclotomic operator*(const Rational& r, const Cyclotomic& z) { return Cyclotomic(r) * z; }

}  // namespace quatrep
