#pragma once

// Exact linear algebra over Q for functions on class sets: row reduction,
// subspaces, weighted orthogonal complements, restriction to stable subspaces
// and characteristic polynomials by Hessenberg reduction.

#include "quatrep/polynomial.hpp"

#include <optional>

namespace quatrep {

using QVec = std::vector<Rational>;
using QMat = std::vector<std::vector<Rational>>;

inline QMat identity(size_t n) {
    QMat I(n, QVec(n, Rational(0)));
    for (size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

inline QMat matmul(const QMat& A, const QMat& B) {
    size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
    QMat C(n, QVec(m, Rational(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (A[i][t] == 0) continue;
            for (size_t j = 0; j < m; ++j) C[i][j] += A[i][t] * B[t][j];
        }
    return C;
}

inline QVec mat_vec(const QMat& A, const QVec& v) {
    QVec out(A.size(), Rational(0));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0) out[i] += A[i][j] * v[j];
    return out;
}

inline QMat add(const QMat& A, const QMat& B, const Rational& s = 1) {
    QMat C = A;
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A[i].size(); ++j) C[i][j] += s * B[i][j];
    return C;
}

inline QMat transpose(const QMat& A) {
    if (A.empty()) return {};
    QMat T(A[0].size(), QVec(A.size()));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A[i].size(); ++j) T[j][i] = A[i][j];
    return T;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<size_t> rref(QMat& M) {
    std::vector<size_t> piv;
    if (M.empty()) return piv;
    size_t rows = M.size(), cols = M[0].size(), r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t s = r;
        while (s < rows && M[s][c] == 0) ++s;
        if (s == rows) continue;
        std::swap(M[s], M[r]);
        Rational inv = 1 / M[r][c];
        for (size_t k = c; k < cols; ++k) M[r][k] *= inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || M[i][c] == 0) continue;
            Rational f = M[i][c];
            for (size_t k = c; k < cols; ++k) M[i][k] -= f * M[r][k];
        }
        piv.push_back(c);
        ++r;
    }
    M.resize(r);
    return piv;
}

/// Echelon basis of the span of the given vectors.
inline std::vector<QVec> span_basis(std::vector<QVec> vs) {
    rref(vs);
    return vs;
}

inline size_t rank(std::vector<QVec> vs) { return span_basis(std::move(vs)).size(); }

/// Basis of {x : M x = 0}; n is the number of columns.
inline std::vector<QVec> nullspace(QMat M, size_t n) {
    auto piv = rref(M);
    std::vector<char> is_piv(n, 0);
    for (auto c : piv) is_piv[c] = 1;
    std::vector<QVec> out;
    for (size_t f = 0; f < n; ++f) {
        if (is_piv[f]) continue;
        QVec x(n, Rational(0));
        x[f] = 1;
        for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -M[r][f];
        out.push_back(x);
    }
    return out;
}

inline Rational weighted_dot(const QVec& a, const QVec& b, const QVec& w) {
    Rational s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i] * w[i];
    return s;
}

/// {v in span(V) : <v, u>_w = 0 for all u in U}.
inline std::vector<QVec> weighted_complement(const std::vector<QVec>& V, const std::vector<QVec>& U, const QVec& w) {
    if (V.empty()) return {};
    QMat G(U.size(), QVec(V.size()));
    for (size_t i = 0; i < U.size(); ++i)
        for (size_t k = 0; k < V.size(); ++k) G[i][k] = weighted_dot(U[i], V[k], w);
    std::vector<QVec> out;
    for (const auto& a : nullspace(G, V.size())) {
        QVec v(V[0].size(), Rational(0));
        for (size_t k = 0; k < V.size(); ++k)
            if (a[k] != 0)
                for (size_t i = 0; i < v.size(); ++i) v[i] += a[k] * V[k][i];
        out.push_back(v);
    }
    return span_basis(out);
}

/// Coordinates of v in the basis V, or nothing if v is outside the span.
inline std::optional<QVec> coordinates(const std::vector<QVec>& V, const QVec& v) {
    size_t k = V.size(), n = v.size();
    // columns: basis vectors, then v
    QMat M(n, QVec(k + 1));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < k; ++j) M[i][j] = V[j][i];
        M[i][k] = v[i];
    }
    auto piv = rref(M);
    if (!piv.empty() && piv.back() == k) return std::nullopt;
    if (piv.size() != k) throw Error("coordinates: basis is linearly dependent");
    QVec x(k);
    for (size_t r = 0; r < k; ++r) x[r] = M[r][k];
    return x;
}

/// Matrix of T on span(V) in the basis V (column m = coordinates of T V_m).
inline QMat restrict_to(const QMat& T, const std::vector<QVec>& V) {
    size_t k = V.size();
    QMat R(k, QVec(k));
    for (size_t m = 0; m < k; ++m) {
        auto c = coordinates(V, mat_vec(T, V[m]));
        if (!c) throw Error("restrict_to: subspace is not stable");
        for (size_t i = 0; i < k; ++i) R[i][m] = (*c)[i];
    }
    return R;
}

inline bool is_stable(const QMat& T, const std::vector<QVec>& V) {
    for (const auto& v : V)
        if (!coordinates(V, mat_vec(T, v))) return false;
    return true;
}

/// Characteristic polynomial det(x - A), coefficients from the constant term up.
inline QPoly charpoly(QMat H) {
    const size_t n = H.size();
    // similarity transform to upper Hessenberg form
    for (size_t m = 1; m + 1 < n; ++m) {
        size_t i = m;
        while (i < n && H[i][m - 1] == 0) ++i;
        if (i == n) continue;
        if (i != m) {
            std::swap(H[i], H[m]);
            for (size_t r = 0; r < n; ++r) std::swap(H[r][i], H[r][m]);
        }
        for (size_t r = m + 1; r < n; ++r) {
            if (H[r][m - 1] == 0) continue;
            Rational u = H[r][m - 1] / H[m][m - 1];
            for (size_t c = 0; c < n; ++c) H[r][c] -= u * H[m][c];
            for (size_t c = 0; c < n; ++c) H[c][m] += u * H[c][r];
        }
    }
    // p_k = (x - h_kk) p_{k-1} - sum_i h_{k-i,k} (prod_{j=k-i+1..k} h_{j,j-1}) p_{k-i-1}, 1-indexed
    std::vector<QPoly> P(n + 1);
    P[0] = QPoly{Rational(1)};
    auto h = [&](size_t i, size_t j) -> const Rational& { return H[i - 1][j - 1]; };
    for (size_t k = 1; k <= n; ++k) {
        QPoly pk(k + 1, Rational(0));
        for (size_t d = 0; d < P[k - 1].size(); ++d) {
            pk[d + 1] += P[k - 1][d];
            pk[d] -= h(k, k) * P[k - 1][d];
        }
        Rational prod = 1;
        for (size_t i = 1; i < k; ++i) {
            prod *= h(k - i + 1, k - i);
            if (prod == 0) break;
            Rational c = h(k - i, k) * prod;
            for (size_t d = 0; d < P[k - i - 1].size(); ++d) pk[d] -= c * P[k - i - 1][d];
        }
        P[k] = pk;
    }
    return P[n];
}

/// Characteristic polynomial with integer coefficients; throws if it is not integral.
inline ZPoly integer_charpoly(const QMat& A) {
    QPoly f = charpoly(A);
    ZPoly out;
    for (const auto& c : f) {
        if (denominator(c) != 1) throw Error("integer_charpoly: characteristic polynomial is not integral");
        out.push_back(numerator(c));
    }
    return out;
}

/// For a real-rooted monic f: every root lies in [-sqrt(b), sqrt(b)], decided from f(x) f(-x).
inline bool real_roots_bounded(const ZPoly& f, const BigInt& b) {
    // g(y) = f(x) f(-x) as a polynomial in y = x^2 has roots a^2
    ZPoly fm = f;
    for (size_t i = 1; i < fm.size(); i += 2) fm[i] = -fm[i];
    ZPoly ff = zp::mul(f, fm);
    ZPoly g;
    for (size_t i = 0; i < ff.size(); i += 2) g.push_back(ff[i]);
    // roots of g lie in [0, b] iff h(t) = g(b - t) has all roots >= 0, i.e. h(-t) has no sign change
    ZPoly h(g.size(), BigInt(0));
    // expand g(b - t)
    std::vector<BigInt> pw{BigInt(1)};  // (b - t)^k
    for (size_t k = 0; k < g.size(); ++k) {
        for (size_t d = 0; d < pw.size(); ++d) h[d] += g[k] * pw[d];
        std::vector<BigInt> nx(pw.size() + 1, BigInt(0));
        for (size_t d = 0; d < pw.size(); ++d) {
            nx[d] += b * pw[d];
            nx[d + 1] -= pw[d];
        }
        pw = nx;
    }
    int sign = 0;
    for (size_t d = 0; d < h.size(); ++d) {
        BigInt c = (d % 2) ? BigInt(-h[d]) : h[d];
        if (c == 0) continue;
        int s = c > 0 ? 1 : -1;
        if (sign != 0 && s != sign) return false;
        sign = s;
    }
    return true;
}

}  // namespace quatrep
