#pragma once

// Full-rank lattices in Q^4 kept in Hermite normal form over a common
// denominator, LLL on integral Gram matrices, and Fincke-Pohst enumeration.

#include "quatrep/arith.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace quatrep {

using Vec4 = std::array<Rational, 4>;
using IVec4 = std::array<BigInt, 4>;
using IMat = std::vector<std::vector<BigInt>>;

namespace detail {

inline BigInt floordiv(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Upper triangular, positive pivots, entries above each pivot in [0, pivot).
inline std::array<IVec4, 4> hnf4(std::vector<IVec4> rows) {
    size_t r = 0;
    for (int c = 0; c < 4; ++c, ++r) {
        for (;;) {
            size_t best = rows.size();
            for (size_t i = r; i < rows.size(); ++i)
                if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
            if (best == rows.size()) throw Error("lattice: generators do not span a full-rank lattice");
            std::swap(rows[r], rows[best]);
            bool done = true;
            for (size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][c] == 0) continue;
                BigInt q = rows[i][c] / rows[r][c];
                for (int k = c; k < 4; ++k) rows[i][k] -= q * rows[r][k];
                if (rows[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (rows[r][c] < 0)
            for (int k = c; k < 4; ++k) rows[r][k] = -rows[r][k];
    }
    for (int c = 1; c < 4; ++c)
        for (int i = 0; i < c; ++i) {
            BigInt q = floordiv(rows[static_cast<size_t>(i)][c], rows[static_cast<size_t>(c)][c]);
            if (q != 0)
                for (int k = c; k < 4; ++k) rows[static_cast<size_t>(i)][k] -= q * rows[static_cast<size_t>(c)][k];
        }
    return {rows[0], rows[1], rows[2], rows[3]};
}

}  // namespace detail

class Lattice {
public:
    Lattice() = default;

    static Lattice from_generators(const std::vector<Vec4>& gens) {
        BigInt D = 1;
        for (const auto& g : gens)
            for (const auto& x : g) D = lcm(D, denominator(x));
        std::vector<IVec4> rows;
        rows.reserve(gens.size());
        for (const auto& g : gens) {
            IVec4 v;
            for (int k = 0; k < 4; ++k) v[k] = numerator(g[k]) * (D / denominator(g[k]));
            rows.push_back(v);
        }
        Lattice L;
        L.rows_ = detail::hnf4(std::move(rows));
        L.den_ = D;
        L.normalize();
        return L;
    }

    const BigInt& den() const { return den_; }
    const std::array<IVec4, 4>& rows() const { return rows_; }

    Vec4 basis(int k) const {
        Vec4 v;
        for (int c = 0; c < 4; ++c) v[c] = Rational(rows_[static_cast<size_t>(k)][c], den_);
        return v;
    }
    std::vector<Vec4> basis() const { return {basis(0), basis(1), basis(2), basis(3)}; }

    bool contains(const Vec4& x) const {
        IVec4 y;
        for (int c = 0; c < 4; ++c) {
            Rational t = x[c] * den_;
            if (denominator(t) != 1) return false;
            y[c] = numerator(t);
        }
        for (int c = 0; c < 4; ++c) {
            const BigInt& piv = rows_[static_cast<size_t>(c)][c];
            if (y[c] % piv != 0) return false;
            BigInt q = y[c] / piv;
            for (int k = c; k < 4; ++k) y[k] -= q * rows_[static_cast<size_t>(c)][k];
        }
        return true;
    }

    bool contains(const Lattice& o) const {
        for (int k = 0; k < 4; ++k)
            if (!contains(o.basis(k))) return false;
        return true;
    }

    /// Covolume with respect to Z^4.
    Rational volume() const {
        BigInt d = 1;
        for (int c = 0; c < 4; ++c) d *= rows_[static_cast<size_t>(c)][c];
        BigInt D4 = den_ * den_ * den_ * den_;
        return Rational(d, D4);
    }

    Lattice operator+(const Lattice& o) const {
        auto g = basis();
        auto h = o.basis();
        g.insert(g.end(), h.begin(), h.end());
        return from_generators(g);
    }

    Lattice scaled(const Rational& s) const {
        std::vector<Vec4> g;
        for (int k = 0; k < 4; ++k) {
            Vec4 v = basis(k);
            for (auto& x : v) x *= s;
            g.push_back(v);
        }
        return from_generators(g);
    }

    bool operator==(const Lattice& o) const { return den_ == o.den_ && rows_ == o.rows_; }
    bool operator<(const Lattice& o) const { return std::tie(den_, rows_) < std::tie(o.den_, o.rows_); }

    std::string str() const {
        std::string s = "1/" + den_.str() + " [";
        for (int r = 0; r < 4; ++r) {
            s += r ? "; " : "";
            for (int c = 0; c < 4; ++c) s += (c ? " " : "") + rows_[static_cast<size_t>(r)][c].str();
        }
        return s + "]";
    }

private:
    void normalize() {
        BigInt g = den_;
        for (const auto& r : rows_)
            for (const auto& x : r) g = gcd(g, x);
        if (g > 1) {
            den_ /= g;
            for (auto& r : rows_)
                for (auto& x : r) x /= g;
        }
    }

    std::array<IVec4, 4> rows_{};
    BigInt den_ = 1;
};

/// LLL (delta = 3/4) on a positive definite Gram matrix. Returns U with U A U^T reduced; A is replaced by it.
inline IMat lll_gram(IMat& A) {
    const size_t n = A.size();
    IMat U(n, std::vector<BigInt>(n, 0));
    for (size_t i = 0; i < n; ++i) U[i][i] = 1;
    std::vector<std::vector<Rational>> mu(n, std::vector<Rational>(n));
    std::vector<Rational> B(n);
    auto gram_schmidt = [&] {
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j < i; ++j) {
                Rational s = A[i][j];
                for (size_t k = 0; k < j; ++k) s -= mu[j][k] * mu[i][k] * B[k];
                mu[i][j] = s / B[j];
            }
            Rational b = A[i][i];
            for (size_t k = 0; k < i; ++k) b -= mu[i][k] * mu[i][k] * B[k];
            if (b <= 0) throw Error("lll_gram: matrix is not positive definite");
            B[i] = b;
        }
    };
    auto sub_row = [&](size_t k, size_t j, const BigInt& q) {
        for (size_t c = 0; c < n; ++c) U[k][c] -= q * U[j][c];
        for (size_t c = 0; c < n; ++c) A[k][c] -= q * A[j][c];
        for (size_t c = 0; c < n; ++c) A[c][k] -= q * A[c][j];
    };
    gram_schmidt();
    size_t k = 1;
    while (k < n) {
        for (size_t j = k; j-- > 0;) {
            Rational m = mu[k][j];
            BigInt q = detail::floordiv(numerator(m) * 2 + denominator(m), denominator(m) * 2);
            if (q != 0) {
                sub_row(k, j, q);
                gram_schmidt();
            }
        }
        Rational lhs = B[k];
        Rational rhs = (Rational(3, 4) - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1];
        if (lhs < rhs) {
            std::swap(U[k], U[k - 1]);
            std::swap(A[k], A[k - 1]);
            for (size_t c = 0; c < n; ++c) std::swap(A[c][k], A[c][k - 1]);
            gram_schmidt();
            k = std::max<size_t>(k - 1, 1);
        } else {
            ++k;
        }
    }
    return U;
}

/// Calls f(c, c^T A c) for every nonzero integer vector c with c^T A c <= bound.
/// A is an integral positive definite Gram matrix. Pruning is done in floating point
/// with slack; every reported value is recomputed exactly.
inline void for_short_vectors(IMat A, int64_t bound,
                              const std::function<void(const std::vector<int64_t>&, int64_t)>& f) {
    const size_t n = A.size();
    IMat U = lll_gram(A);
    std::vector<std::vector<int64_t>> Ai(n, std::vector<int64_t>(n)), Ui(n, std::vector<int64_t>(n));
    const BigInt lim = BigInt(1) << 40;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (abs(A[i][j]) > lim || abs(U[i][j]) > lim) throw Error("for_short_vectors: reduced basis too large");
            Ai[i][j] = A[i][j].convert_to<int64_t>();
            Ui[i][j] = U[i][j].convert_to<int64_t>();
        }
    // Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2
    std::vector<std::vector<double>> q(n, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) q[i][j] = static_cast<double>(Ai[i][j]);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            q[j][i] = q[i][j];
            q[i][j] /= q[i][i];
        }
        for (size_t k = i + 1; k < n; ++k)
            for (size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
    }
    const double slack = 1e-7 * (1.0 + static_cast<double>(bound));
    std::vector<int64_t> x(n, 0), c(n);
    std::function<void(size_t, double)> rec = [&](size_t i, double rem) {
        double u = 0;
        for (size_t j = i + 1; j < n; ++j) u += q[i][j] * static_cast<double>(x[j]);
        double r = std::sqrt(std::max(0.0, rem + slack) / q[i][i]);
        auto lo = static_cast<int64_t>(std::ceil(-r - u - 1e-9));
        auto hi = static_cast<int64_t>(std::floor(r - u + 1e-9));
        for (int64_t v = lo; v <= hi; ++v) {
            x[i] = v;
            double t = static_cast<double>(v) + u;
            double nrem = rem - q[i][i] * t * t;
            if (nrem < -slack) continue;
            if (i > 0) {
                rec(i - 1, nrem);
                continue;
            }
            bool zero = true;
            for (auto e : x) zero = zero && e == 0;
            if (zero) continue;
            __int128 val = 0;
            for (size_t a = 0; a < n; ++a)
                for (size_t b = 0; b < n; ++b) val += static_cast<__int128>(Ai[a][b]) * x[a] * x[b];
            if (val > bound) continue;
            for (size_t j = 0; j < n; ++j) {
                __int128 s = 0;
                for (size_t a = 0; a < n; ++a) s += static_cast<__int128>(x[a]) * Ui[a][j];
                c[j] = static_cast<int64_t>(s);
            }
            f(c, static_cast<int64_t>(val));
        }
        x[i] = 0;
    };
    rec(n - 1, static_cast<double>(bound));
}

}  // namespace quatrep
