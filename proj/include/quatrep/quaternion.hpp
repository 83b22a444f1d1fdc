#pragma once

// Definite quaternion algebras (a, b | Q) ramified at {p, oo}: elements in the
// basis 1, i, j, ij, orders and ideals as lattices, the maximal order by
// saturation, the two-sided prime over p and the special orders o_E + P^(r-1).

#include "quatrep/lattice.hpp"
#include "quatrep/local_quadratic.hpp"

#include <optional>

namespace quatrep {

using QElt = Vec4;

struct GlobalAlgebraDesc {
    int64_t p = 3;
    int64_t a = -1;
    int64_t b = -3;

    QElt mul(const QElt& x, const QElt& y) const {
        Rational A(a), B(b), AB(a * b);
        return {x[0] * y[0] + A * x[1] * y[1] + B * x[2] * y[2] - AB * x[3] * y[3],
                x[0] * y[1] + x[1] * y[0] - B * x[2] * y[3] + B * x[3] * y[2],
                x[0] * y[2] + x[2] * y[0] + A * x[1] * y[3] - A * x[3] * y[1],
                x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
    }
    static QElt conj(const QElt& x) { return {x[0], -x[1], -x[2], -x[3]}; }
    Rational nrd(const QElt& x) const {
        return x[0] * x[0] - Rational(a) * x[1] * x[1] - Rational(b) * x[2] * x[2] + Rational(a * b) * x[3] * x[3];
    }
    static Rational trd(const QElt& x) { return 2 * x[0]; }
    /// trd(x conj(y))
    Rational pairing(const QElt& x, const QElt& y) const { return trd(mul(x, conj(y))); }

    /// Places where (a, b) is ramified; 0 stands for the real place.
    std::vector<int64_t> ramified_places() const {
        std::vector<int64_t> out;
        if (hilbert_symbol(a, b, 0) == -1) out.push_back(0);
        std::vector<int64_t> ls = prime_factors(2 * std::abs(a) * std::abs(b));
        for (int64_t l : ls)
            if (hilbert_symbol(a, b, l) == -1) out.push_back(l);
        return out;
    }
};

inline QElt qelt(int64_t x0, int64_t x1 = 0, int64_t x2 = 0, int64_t x3 = 0) {
    return {Rational(x0), Rational(x1), Rational(x2), Rational(x3)};
}

inline GlobalAlgebraDesc algebra_for_prime(int64_t p) {
    require_odd_prime(p);
    GlobalAlgebraDesc B;
    B.p = p;
    B.b = -p;
    if (p % 4 == 3) {
        B.a = -1;
    } else if (p % 8 == 5) {
        B.a = -2;
    } else {
        int64_t r = 3;
        while (!(is_prime(r) && r % 4 == 3 && legendre(r, p) == -1)) r += 4;
        B.a = -r;
    }
    if (B.ramified_places() != std::vector<int64_t>{0, p})
        throw Error("internal: algebra (" + std::to_string(B.a) + ", " + std::to_string(B.b) + ") has the wrong ramification");
    return B;
}

inline Lattice lattice_product(const GlobalAlgebraDesc& B, const Lattice& I, const Lattice& J) {
    std::vector<QElt> g;
    g.reserve(16);
    for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t) g.push_back(B.mul(I.basis(s), J.basis(t)));
    return Lattice::from_generators(g);
}

inline Lattice lattice_conj(const Lattice& I) {
    std::vector<QElt> g;
    for (int s = 0; s < 4; ++s) g.push_back(GlobalAlgebraDesc::conj(I.basis(s)));
    return Lattice::from_generators(g);
}

/// Gram matrix of trd(x conj(y)) on the basis, divided by s.
inline std::vector<std::vector<Rational>> pairing_gram(const GlobalAlgebraDesc& B, const Lattice& L, const Rational& s = 1) {
    std::vector<std::vector<Rational>> G(4, std::vector<Rational>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) G[static_cast<size_t>(i)][static_cast<size_t>(j)] = B.pairing(L.basis(i), L.basis(j)) / s;
    return G;
}

inline Rational det4(std::vector<std::vector<Rational>> M) {
    Rational d = 1;
    for (size_t c = 0; c < 4; ++c) {
        size_t piv = c;
        while (piv < 4 && M[piv][c] == 0) ++piv;
        if (piv == 4) return 0;
        if (piv != c) {
            std::swap(M[piv], M[c]);
            d = -d;
        }
        d *= M[c][c];
        for (size_t r = c + 1; r < 4; ++r) {
            Rational f = M[r][c] / M[c][c];
            if (f == 0) continue;
            for (size_t k = c; k < 4; ++k) M[r][k] -= f * M[c][k];
        }
    }
    return d;
}

/// Exact square root of a non-negative rational square; throws otherwise.
inline Rational rational_sqrt(const Rational& x) {
    if (x < 0) throw Error("rational_sqrt: negative");
    BigInt n = isqrt(numerator(x)), d = isqrt(denominator(x));
    if (n * n != numerator(x) || d * d != denominator(x)) throw Error("rational_sqrt: not a square: " + to_string(x));
    return Rational(n, d);
}

inline bool is_integral(const GlobalAlgebraDesc& B, const QElt& x) {
    return denominator(B.trd(x)) == 1 && denominator(B.nrd(x)) == 1;
}

inline bool is_order(const GlobalAlgebraDesc& B, const Lattice& L) {
    if (!L.contains(qelt(1))) return false;
    for (int s = 0; s < 4; ++s)
        for (int t = 0; t < 4; ++t)
            if (!L.contains(B.mul(L.basis(s), L.basis(t)))) return false;
    return true;
}

/// sqrt |det trd(x_i conj(x_j))| for an order.
inline BigInt reduced_discriminant(const GlobalAlgebraDesc& B, const Lattice& O) {
    Rational d = rational_sqrt(abs(det4(pairing_gram(B, O))));
    if (denominator(d) != 1) throw Error("internal: non-integral discriminant");
    return numerator(d);
}

namespace detail {

// Smallest order containing O and x, or nothing if some element fails to be integral.
inline std::optional<Lattice> adjoin(const GlobalAlgebraDesc& B, const Lattice& O, const QElt& x) {
    auto g = O.basis();
    g.push_back(x);
    Lattice L = Lattice::from_generators(g);
    for (int iter = 0; iter < 64; ++iter) {
        auto G = pairing_gram(B, L);
        for (int s = 0; s < 4; ++s) {
            if (!is_integral(B, L.basis(s))) return std::nullopt;
            for (int t = 0; t < 4; ++t)
                if (denominator(G[static_cast<size_t>(s)][static_cast<size_t>(t)]) != 1) return std::nullopt;
        }
        Lattice M = L + lattice_product(B, L, L);
        if (M == L) return L;
        L = M;
    }
    throw Error("internal: order closure did not stabilize");
}

}  // namespace detail

/// A maximal order, from Z<1, i, j, ij> by adjoining x in (1/l) O at each l | d(O)/p.
inline Lattice maximal_order(const GlobalAlgebraDesc& B) {
    Lattice O = Lattice::from_generators({qelt(1), qelt(0, 1), qelt(0, 0, 1), qelt(0, 0, 0, 1)});
    for (;;) {
        BigInt d = reduced_discriminant(B, O);
        if (d == B.p) return O;
        BigInt rest = d / B.p;
        int64_t l = prime_factors(rest.convert_to<int64_t>()).front();
        auto basis = O.basis();
        bool grown = false;
        for (int64_t code = 1; code < l * l * l * l && !grown; ++code) {
            QElt x{};
            int64_t c = code;
            for (int k = 0; k < 4; ++k, c /= l) {
                Rational coef(c % l, l);
                for (int m = 0; m < 4; ++m) x[m] += coef * basis[static_cast<size_t>(k)][m];
            }
            if (!is_integral(B, x)) continue;
            auto L = detail::adjoin(B, O, x);
            if (L && !(*L == O)) {
                O = *L;
                grown = true;
            }
        }
        if (!grown) throw Error("internal: could not enlarge order at " + std::to_string(l));
    }
}

/// An element of O with trd 0 generating the ring of integers of a copy of E inside B_p.
inline QElt embedded_generator(const GlobalAlgebraDesc& B, const Lattice& O, ExtLabel E) {
    const int64_t p = B.p;
    // rows 1..3 of the HNF basis span the trace-zero part
    std::vector<QElt> basis{O.basis(1), O.basis(2), O.basis(3)};
    IMat A(3, std::vector<BigInt>(3));
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j) A[i][j] = numerator(B.pairing(basis[i], basis[j]));
    for (int64_t bound = 8;; bound *= 2) {
        std::optional<std::pair<int64_t, QElt>> best;
        for_short_vectors(A, bound, [&](const std::vector<int64_t>& c, int64_t val) {
            int64_t n = val / 2;
            bool ok = false;
            if (E == ExtLabel::M) ok = n % p != 0 && legendre(-n, p) == -1;
            else if (n % p == 0 && (n / p) % p != 0) ok = legendre(n / p, p) == (E == ExtLabel::K ? 1 : -1);
            if (!ok || (best && n > best->first)) return;
            QElt x{};
            for (size_t k = 0; k < 3; ++k)
                for (int m = 0; m < 4; ++m) x[m] += Rational(c[k]) * basis[k][m];
            if (!best || n < best->first || x < best->second) best = std::make_pair(n, x);
        });
        if (best) return best->second;
        if (bound > (int64_t(1) << 30)) throw Error("internal: no embedded generator found");
    }
}

/// P^k for the two-sided prime P over p of a maximal order.
inline Lattice prime_power(const GlobalAlgebraDesc& B, const Lattice& O, const Lattice& P, int k) {
    Lattice base = (k % 2 == 0) ? O : P;
    return base.scaled(Rational(ipow(B.p, k / 2)));
}

struct OrderLattice {
    Lattice L;
    BigInt level;                // reduced discriminant
    std::optional<ExtLabel> ext;  // empty: maximal
    int r = 1;
};

struct MaximalOrderData {
    GlobalAlgebraDesc B;
    Lattice O;
    Lattice P;  // two-sided prime over p
    std::map<ExtLabel, QElt> alpha;
};

inline MaximalOrderData maximal_order_data(int64_t p) {
    MaximalOrderData M;
    M.B = algebra_for_prime(p);
    M.O = maximal_order(M.B);
    for (ExtLabel E : kAllLabels) M.alpha[E] = embedded_generator(M.B, M.O, E);
    QElt pi = M.alpha.at(ExtLabel::K);
    std::vector<QElt> g;
    for (int s = 0; s < 4; ++s) g.push_back(M.B.mul(pi, M.O.basis(s)));
    M.P = Lattice::from_generators(g) + M.O.scaled(Rational(p));
    if (!(lattice_product(M.B, M.P, M.P) == M.O.scaled(Rational(p)))) throw Error("internal: P^2 != pO");
    return M;
}

/// Z + Z alpha_E + P^(r-1) inside the maximal order; r = 1 is the maximal order.
inline OrderLattice special_order(const MaximalOrderData& M, ExtLabel E, int r) {
    if (r < 1) throw Error("special_order: r must be at least 1");
    OrderLattice out;
    out.ext = E;
    out.r = r;
    if (r == 1) {
        out.L = M.O;
        out.level = M.B.p;
        return out;
    }
    Lattice Pk = prime_power(M.B, M.O, M.P, r - 1);
    auto g = Pk.basis();
    g.push_back(qelt(1));
    g.push_back(M.alpha.at(E));
    out.L = Lattice::from_generators(g);
    if (!is_order(M.B, out.L)) throw Error("internal: special order is not closed under multiplication");
    out.level = reduced_discriminant(M.B, out.L);
    return out;
}

inline OrderLattice maximal_order_lattice(const MaximalOrderData& M) {
    return OrderLattice{M.O, BigInt(M.B.p), std::nullopt, 1};
}

}  // namespace quatrep
