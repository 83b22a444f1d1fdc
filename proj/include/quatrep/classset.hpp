#pragma once

// Right ideal classes of an order by l-neighbour search, isomorphism testing by
// short vectors of I conj(J), unit counts, Brandt matrices and Eisenstein series.

#include "quatrep/linalg.hpp"
#include "quatrep/quaternion.hpp"

#include <set>
#include <thread>

namespace quatrep {

struct RightIdeal {
    Lattice L;
    Rational norm;  // relative to its right order
};

inline Rational ideal_norm(const Lattice& I, const Lattice& O) { return rational_sqrt(I.volume() / O.volume()); }

/// Integral Gram matrix of trd(x conj(y)) / s; x -> nrd(x)/s is then c^T A c / 2.
inline IMat normalized_gram(const GlobalAlgebraDesc& B, const Lattice& L, const Rational& s) {
    auto G = pairing_gram(B, L, s);
    IMat A(4, std::vector<BigInt>(4));
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j) {
            if (denominator(G[i][j]) != 1) throw Error("internal: norm form is not integral on the lattice");
            A[i][j] = numerator(G[i][j]);
        }
    return A;
}

/// out[k] = #{x in L : nrd(x) = k s}, 0 < k <= kmax.
inline std::vector<int64_t> theta_counts(const GlobalAlgebraDesc& B, const Lattice& L, const Rational& s, int64_t kmax) {
    std::vector<int64_t> out(static_cast<size_t>(kmax + 1), 0);
    for_short_vectors(normalized_gram(B, L, s), 2 * kmax, [&](const std::vector<int64_t>&, int64_t v) {
        if (v % 2) throw Error("internal: odd norm value");
        ++out[static_cast<size_t>(v / 2)];
    });
    return out;
}

/// I = a J for some a in B^x.
inline bool ideals_isomorphic(const GlobalAlgebraDesc& B, const RightIdeal& I, const RightIdeal& J) {
    Lattice P = lattice_product(B, I.L, lattice_conj(J.L));
    return theta_counts(B, P, I.norm * J.norm, 1)[1] > 0;
}

/// |O_l(I)^x|, counted as elements of I conj(I) of norm nrd(I)^2.
inline int64_t left_unit_count(const GlobalAlgebraDesc& B, const RightIdeal& I) {
    Lattice P = lattice_product(B, I.L, lattice_conj(I.L));
    return theta_counts(B, P, I.norm * I.norm, 1)[1];
}

inline int64_t default_neighbor_prime(const GlobalAlgebraDesc& B) {
    int64_t l = 3;
    while (!is_prime(l) || l == B.p) l += 2;
    return l;
}

/// The l + 1 right O-ideals J of I with [I : J] = l^2 and l I in J.
inline std::vector<RightIdeal> neighbors(const GlobalAlgebraDesc& B, const Lattice& O, const RightIdeal& I, int64_t l) {
    IMat A = normalized_gram(B, I.L, I.norm);
    auto basis = I.L.basis();
    auto Ob = O.basis();
    Lattice lI = I.L.scaled(Rational(l));
    std::set<Lattice> seen;
    std::vector<RightIdeal> out;
    std::array<int64_t, 4> c{};
    const int64_t total = l * l * l * l;
    for (int64_t code = 1; code < total; ++code) {
        int64_t t = code;
        for (auto& x : c) {
            x = t % l;
            t /= l;
        }
        // projective representatives: leading non-zero coordinate 1
        int lead = 3;
        while (c[static_cast<size_t>(lead)] == 0) --lead;
        if (c[static_cast<size_t>(lead)] != 1) continue;
        BigInt q = 0;
        for (size_t i = 0; i < 4; ++i)
            for (size_t j = 0; j < 4; ++j) q += A[i][j] * c[i] * c[j];
        if ((q / 2) % l != 0) continue;
        QElt x{};
        for (size_t k = 0; k < 4; ++k)
            for (int m = 0; m < 4; ++m) x[m] += Rational(c[k]) * basis[k][m];
        std::vector<QElt> g = lI.basis();
        for (const auto& b : Ob) g.push_back(B.mul(x, b));
        Lattice J = Lattice::from_generators(g);
        if (!seen.insert(J).second) continue;
        if (J.volume() != I.L.volume() * l * l) continue;
        out.push_back(RightIdeal{J, I.norm * l});
    }
    if (static_cast<int64_t>(out.size()) != l + 1)
        throw Error("internal: found " + std::to_string(out.size()) + " neighbours, expected " + std::to_string(l + 1));
    return out;
}

struct ClassSet {
    GlobalAlgebraDesc B;
    OrderLattice order;
    std::vector<RightIdeal> ideals;  // ideals[0] = O
    std::vector<int64_t> units;      // |O_l(I_i)^x|
    int64_t neighbor_prime = 3;

    size_t size() const { return ideals.size(); }

    Rational mass() const {
        Rational m = 0;
        for (auto e : units) m += Rational(1, e);
        return m;
    }

    /// Index of the class of a right ideal of this order.
    size_t class_of(const RightIdeal& I) const {
        for (size_t i = 0; i < ideals.size(); ++i)
            if (ideals_isomorphic(B, I, ideals[i])) return i;
        throw Error("internal: ideal matches no class representative");
    }
};

/// Breadth-first search of the l-neighbour graph from O. l = 0 picks the default prime.
inline ClassSet right_ideal_classes(const GlobalAlgebraDesc& B, const OrderLattice& O, int64_t l = 0,
                                    size_t max_classes = 5000) {
    if (l == 0) l = default_neighbor_prime(B);
    if (!is_prime(l) || l == 2 || B.p == l || O.level % l == 0) throw Error("right_ideal_classes: neighbour prime must be odd and prime to the level");
    ClassSet CS;
    CS.B = B;
    CS.order = O;
    CS.neighbor_prime = l;
    // left-order theta series as a cheap isomorphism invariant
    std::vector<std::vector<int64_t>> sig;
    auto signature = [&](const RightIdeal& I) {
        Lattice P = lattice_product(B, I.L, lattice_conj(I.L));
        return theta_counts(B, P, I.norm * I.norm, 3);
    };
    RightIdeal start{O.L, Rational(1)};
    CS.ideals.push_back(start);
    sig.push_back(signature(start));
    for (size_t head = 0; head < CS.ideals.size(); ++head) {
        RightIdeal cur = CS.ideals[head];
        for (auto& J : neighbors(B, O.L, cur, l)) {
            auto s = signature(J);
            bool known = false;
            for (size_t i = 0; i < CS.ideals.size() && !known; ++i)
                if (sig[i] == s && ideals_isomorphic(B, J, CS.ideals[i])) known = true;
            if (known) continue;
            if (CS.ideals.size() >= max_classes) throw Error("right_ideal_classes: class set exceeds the size bound");
            CS.ideals.push_back(J);
            sig.push_back(s);
        }
    }
    for (size_t i = 0; i < CS.ideals.size(); ++i) CS.units.push_back(sig[i][1]);
    return CS;
}

/// r[n][i][j] = #{a in I_i I_j^-1 : nrd(a) nrd(I_j) / nrd(I_i) = n} for 1 <= n <= nmax.
struct BrandtData {
    int64_t p = 3;
    int64_t nmax = 0;
    std::vector<std::vector<std::vector<int64_t>>> r;
    std::vector<int64_t> e;

    size_t size() const { return e.size(); }

    /// T_n(i, j) = r_ij(n) / e_j.
    QMat matrix(int64_t n) const {
        if (n < 1 || n > nmax) throw Error("brandt_matrix: index outside the computed range");
        if (n % p == 0) throw Error("brandt_matrix: index must be prime to the level");
        size_t h = size();
        QMat T(h, std::vector<Rational>(h));
        for (size_t i = 0; i < h; ++i)
            for (size_t j = 0; j < h; ++j) T[i][j] = Rational(r[static_cast<size_t>(n)][i][j], e[j]);
        return T;
    }
};

inline BrandtData brandt_data(const ClassSet& CS, int64_t nmax, unsigned threads = 1) {
    const size_t h = CS.size();
    BrandtData D;
    D.p = CS.B.p;
    D.nmax = nmax;
    D.e = CS.units;
    D.r.assign(static_cast<size_t>(nmax + 1), std::vector<std::vector<int64_t>>(h, std::vector<int64_t>(h, 0)));
    std::vector<Lattice> conjs;
    for (const auto& I : CS.ideals) conjs.push_back(lattice_conj(I.L));
    auto work = [&](size_t first, size_t step) {
        for (size_t idx = first; idx < h * h; idx += step) {
            size_t i = idx / h, j = idx % h;
            Lattice P = lattice_product(CS.B, CS.ideals[i].L, conjs[j]);
            auto th = theta_counts(CS.B, P, CS.ideals[i].norm * CS.ideals[j].norm, nmax);
            for (int64_t n = 1; n <= nmax; ++n) D.r[static_cast<size_t>(n)][i][j] = th[static_cast<size_t>(n)];
        }
    };
    threads = std::max(1u, threads);
    if (threads == 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& t : pool) t.join();
    }
    return D;
}

inline QMat brandt_matrix(const ClassSet& CS, int64_t n) { return brandt_data(CS, n).matrix(n); }

/// Number of characters of Z_p^x with values +-1 that are trivial on nrd(O_p^x).
inline int eisenstein_dimension(const GlobalAlgebraDesc& B, const OrderLattice& O) {
    const int64_t p = B.p;
    auto basis = O.L.basis();
    for (int64_t code = 0; code < p * p * p * p; ++code) {
        QElt x{};
        int64_t t = code;
        for (size_t k = 0; k < 4; ++k, t /= p)
            for (int m = 0; m < 4; ++m) x[m] += Rational(t % p) * basis[k][m];
        Rational n = B.nrd(x);
        if (legendre(numerator(n) * denominator(n), p) == -1) return 1;
    }
    return 2;
}

/// mu o nrd on the class representatives for each mu counted by eisenstein_dimension.
inline std::vector<std::vector<Rational>> eisenstein_basis(const ClassSet& CS) {
    std::vector<std::vector<Rational>> out{std::vector<Rational>(CS.size(), Rational(1))};
    if (eisenstein_dimension(CS.B, CS.order) == 2) {
        std::vector<Rational> mu;
        for (const auto& I : CS.ideals) mu.push_back(Rational(legendre(numerator(I.norm) * denominator(I.norm), CS.B.p)));
        out.push_back(mu);
    }
    return out;
}

/// dim of the weight-0 cusp space: h minus the Eisenstein dimension.
inline size_t cusp_dimension(const ClassSet& CS) {
    return CS.size() - static_cast<size_t>(eisenstein_dimension(CS.B, CS.order));
}

}  // namespace quatrep
