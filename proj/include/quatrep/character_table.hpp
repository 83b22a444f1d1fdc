#pragma once

// Conjugacy classes and the complete character table of a finite group given
// by an index-based multiplication. Dixon's method: the class-sum matrices are
// reduced modulo a prime l = 1 mod exp(G), a random combination of them is
// diagonalized, and each value is lifted to Z[zeta_o] from its eigenvalue
// multiplicities, which are integers in [0, deg].

#include "quatrep/cyclotomic.hpp"
#include "quatrep/polynomial.hpp"

#include <numeric>
#include <random>
#include <unordered_map>

namespace quatrep {

struct ConjugacyClasses {
    std::vector<int32_t> class_of;            // element -> class
    std::vector<int32_t> rep;                 // least element of each class
    std::vector<int64_t> size;
    std::vector<int32_t> inverse;             // class of rep^-1
    std::vector<int64_t> elt_order;           // order of rep
    std::vector<std::vector<int32_t>> power;  // power[c][t] = class of rep^t, t < elt_order
    int64_t group_order = 0;
    int64_t exponent = 1;

    size_t count() const { return rep.size(); }
};

/// Group needs order(), mul(i, j), inv(i), generators(); identity has index 0.
template <class Group>
ConjugacyClasses conjugacy_classes(const Group& G) {
    ConjugacyClasses C;
    const int64_t N = G.order();
    C.group_order = N;
    C.class_of.assign(static_cast<size_t>(N), -1);
    auto gens = G.generators();
    std::vector<int32_t> queue;
    for (int32_t x = 0; x < N; ++x) {
        if (C.class_of[static_cast<size_t>(x)] >= 0) continue;
        int32_t c = static_cast<int32_t>(C.rep.size());
        C.rep.push_back(x);
        queue.assign(1, x);
        C.class_of[static_cast<size_t>(x)] = c;
        for (size_t i = 0; i < queue.size(); ++i)
            for (int32_t g : gens) {
                int32_t y = G.mul(G.mul(g, queue[i]), G.inv(g));
                if (C.class_of[static_cast<size_t>(y)] < 0) {
                    C.class_of[static_cast<size_t>(y)] = c;
                    queue.push_back(y);
                }
            }
        C.size.push_back(static_cast<int64_t>(queue.size()));
    }
    for (size_t c = 0; c < C.count(); ++c) {
        int32_t g = C.rep[c];
        C.inverse.push_back(C.class_of[static_cast<size_t>(G.inv(g))]);
        std::vector<int32_t> pw{0};
        for (int32_t y = g; y != 0; y = G.mul(y, g)) pw.push_back(C.class_of[static_cast<size_t>(y)]);
        C.elt_order.push_back(static_cast<int64_t>(pw.size()));
        C.exponent = std::lcm(C.exponent, static_cast<int64_t>(pw.size()));
        C.power.push_back(std::move(pw));
    }
    return C;
}

namespace detail {

// Dot products mod l < 2^31 without a reduction per term.
inline uint64_t dot_mod(const uint64_t* a, const uint64_t* b, size_t n, uint64_t l, uint64_t lim) {
    uint64_t acc = 0;
    for (size_t i = 0; i < n; ++i) {
        acc += a[i] * b[i];
        if (acc >= lim) acc -= lim;
    }
    return acc % l;
}

// Minimal polynomial of a linearly recurrent sequence (Berlekamp-Massey), monic, low degree first.
inline ModPoly berlekamp_massey(const std::vector<uint64_t>& s, uint64_t l) {
    std::vector<uint64_t> C{1}, B{1};
    size_t L = 0, m = 1;
    uint64_t b = 1;
    for (size_t n = 0; n < s.size(); ++n) {
        uint64_t d = s[n];
        for (size_t i = 1; i <= L && i < C.size(); ++i) d = (d + mulmod(C[i], s[n - i], l)) % l;
        if (d == 0) {
            ++m;
            continue;
        }
        uint64_t coef = mulmod(d, static_cast<uint64_t>(invmod(static_cast<int64_t>(b), static_cast<int64_t>(l))), l);
        std::vector<uint64_t> T = C;
        if (C.size() < B.size() + m) C.resize(B.size() + m, 0);
        for (size_t i = 0; i < B.size(); ++i) C[i + m] = (C[i + m] + l - mulmod(coef, B[i], l)) % l;
        if (2 * L <= n) {
            L = n + 1 - L;
            B = std::move(T);
            b = d;
            m = 1;
        } else {
            ++m;
        }
    }
    C.resize(L + 1, 0);
    // connection polynomial -> characteristic polynomial (reverse)
    ModPoly g(L + 1);
    for (size_t i = 0; i <= L; ++i) g[L - i] = C[i];
    return g;
}

inline uint64_t find_dixon_prime(int64_t exponent) {
    const uint64_t lo = 1ULL << 30, hi = 1ULL << 31;
    uint64_t e = static_cast<uint64_t>(exponent);
    for (uint64_t l = (lo / e + 1) * e + 1; l < hi; l += e)
        if (is_prime(static_cast<int64_t>(l))) return l;
    throw Error("no Dixon prime in range for exponent " + std::to_string(exponent));
}

}  // namespace detail

class CharacterTable {
public:
    CharacterTable() = default;

    template <class Group>
    CharacterTable(const Group& G, const ConjugacyClasses& C, uint64_t seed = 1) : C_(C) {
        ell_ = detail::find_dixon_prime(C.exponent);
        zeta_ = root_of_unity(static_cast<uint64_t>(C.exponent), ell_);
        const size_t k = C.count();
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<uint64_t> dist(1, ell_ - 1);
        for (int attempt = 0; attempt < 8; ++attempt) {
            std::vector<uint64_t> r(k);
            for (auto& x : r) x = dist(rng);
            auto X = class_matrix(G, C, r);
            if (diagonalize(X, k, rng)) {
                finish(G.order());
                return;
            }
        }
        throw Error("character table: no simple-spectrum class combination found");
    }

    size_t size() const { return deg_.size(); }
    int64_t degree(size_t i) const { return deg_[i]; }
    const ConjugacyClasses& classes() const { return C_; }
    uint64_t prime() const { return ell_; }

    /// Value modulo the Dixon prime (fixed embedding zeta_e -> zeta mod l).
    uint64_t value_mod(size_t i, size_t c) const { return val_[i][c]; }
    const std::vector<uint64_t>& row_mod(size_t i) const { return val_[i]; }

    /// Multiplicity of zeta_o^m as an eigenvalue on the class c, o = order of its elements.
    std::vector<int64_t> eigen_multiplicities(size_t i, size_t c) const {
        const auto& pw = C_.power[c];
        uint64_t o = static_cast<uint64_t>(pw.size());
        uint64_t z = powmod(zeta_, static_cast<uint64_t>(C_.exponent) / o, ell_);
        uint64_t zinv = static_cast<uint64_t>(invmod(static_cast<int64_t>(z), static_cast<int64_t>(ell_)));
        uint64_t oinv = static_cast<uint64_t>(invmod(static_cast<int64_t>(o % ell_), static_cast<int64_t>(ell_)));
        std::vector<int64_t> mu(o);
        uint64_t step = 1;  // zeta^(-m)
        for (uint64_t m = 0; m < o; ++m) {
            uint64_t acc = 0, w = 1;
            for (uint64_t t = 0; t < o; ++t) {
                acc = (acc + mulmod(val_[i][static_cast<size_t>(pw[t])], w, ell_)) % ell_;
                w = mulmod(w, step, ell_);
            }
            acc = mulmod(acc, oinv, ell_);
            if (acc > static_cast<uint64_t>(deg_[i])) throw Error("character table: eigenvalue multiplicity lift failed");
            mu[m] = static_cast<int64_t>(acc);
            step = mulmod(step, zinv, ell_);
        }
        return mu;
    }

    /// Exact value in Q(zeta_o).
    Cyclotomic value(size_t i, size_t c) const {
        auto mu = eigen_multiplicities(i, c);
        std::vector<std::pair<int64_t, BigInt>> terms;
        for (size_t m = 0; m < mu.size(); ++m)
            if (mu[m]) terms.emplace_back(static_cast<int64_t>(m), BigInt(mu[m]));
        return Cyclotomic::from_exponents(static_cast<int64_t>(mu.size()), terms);
    }

    /// chi(g) == chi(1) on the class c.
    bool in_kernel(size_t i, size_t c) const {
        const auto& pw = C_.power[c];
        uint64_t o = static_cast<uint64_t>(pw.size());
        uint64_t acc = 0;
        for (auto t : pw) acc = (acc + val_[i][static_cast<size_t>(t)]) % ell_;
        uint64_t mu0 = mulmod(acc, static_cast<uint64_t>(invmod(static_cast<int64_t>(o), static_cast<int64_t>(ell_))), ell_);
        return mu0 == static_cast<uint64_t>(deg_[i]);
    }

    /// (1/|S|) sum_{s in S} chi(s), S given by class counts; exact.
    Rational average(size_t i, const std::vector<std::pair<int32_t, int64_t>>& counts) const {
        int64_t e = C_.exponent, total = 0;
        detail::IntPoly acc(static_cast<size_t>(e), 0);
        for (auto [c, n] : counts) {
            auto mu = eigen_multiplicities(i, static_cast<size_t>(c));
            int64_t stride = e / static_cast<int64_t>(mu.size());
            for (size_t m = 0; m < mu.size(); ++m)
                if (mu[m]) acc[static_cast<size_t>(static_cast<int64_t>(m) * stride)] += BigInt(mu[m] * n);
            total += n;
        }
        Cyclotomic s = Cyclotomic::from_dense(e, std::move(acc));
        if (!s.is_rational()) throw Error("character average is not rational");
        return s.to_rational() / Rational(total);
    }

    /// Row of chi_a * chi_b if it is irreducible, else -1.
    int find_row(const std::vector<uint64_t>& vals) const {
        auto it = index_.find(hash_row(vals));
        if (it == index_.end()) return -1;
        for (int r : it->second)
            if (val_[static_cast<size_t>(r)] == vals) return r;
        return -1;
    }

    std::vector<uint64_t> product_mod(size_t a, size_t b) const {
        std::vector<uint64_t> v(val_[a].size());
        for (size_t c = 0; c < v.size(); ++c) v[c] = mulmod(val_[a][c], val_[b][c], ell_);
        return v;
    }

private:
    template <class Group>
    std::vector<uint64_t> class_matrix(const Group& G, const ConjugacyClasses& C, const std::vector<uint64_t>& r) const {
        // X[l][i] = sum_{x in G} r[class(x)] [x^-1 g_i in C_l]: right eigenvectors are the central characters
        const size_t k = C.count();
        std::vector<uint64_t> X(k * k, 0);
        const int64_t N = G.order();
        for (size_t i = 0; i < k; ++i) {
            int32_t g = C.rep[i];
            for (int32_t x = 0; x < N; ++x) {
                int32_t z = G.mul(G.inv(x), g);
                X[static_cast<size_t>(C.class_of[static_cast<size_t>(z)]) * k + i] += r[static_cast<size_t>(C.class_of[static_cast<size_t>(x)])];
            }
        }
        for (auto& x : X) x %= ell_;
        return X;
    }

    bool diagonalize(const std::vector<uint64_t>& X, size_t k, std::mt19937_64& rng) {
        const uint64_t l = ell_, lim = (static_cast<uint64_t>(1) << 63) / l * l;
        std::uniform_int_distribution<uint64_t> dist(0, l - 1);
        std::vector<uint64_t> u(k), v(k);
        for (auto& x : u) x = dist(rng);
        for (auto& x : v) x = dist(rng);
        std::vector<std::vector<uint64_t>> K{v};
        std::vector<uint64_t> seq;
        std::vector<uint64_t> cur = v, next(k);
        for (size_t t = 0; t < 2 * k; ++t) {
            seq.push_back(detail::dot_mod(u.data(), cur.data(), k, l, lim));
            for (size_t row = 0; row < k; ++row) next[row] = detail::dot_mod(&X[row * k], cur.data(), k, l, lim);
            cur.swap(next);
            if (t + 1 < k) K.push_back(cur);
        }
        ModPoly g = detail::berlekamp_massey(seq, l);
        if (fp::deg(g) != static_cast<int>(k)) return false;
        auto roots = fp::roots(g, l);
        if (roots.size() != k) return false;
        val_.clear();
        for (uint64_t lam : roots) {
            // h = g / (x - lam), eigenvector h(X) v
            ModPoly h(k);
            uint64_t carry = g[k];
            for (size_t i = k; i-- > 0;) {
                h[i] = carry;
                carry = (g[i] + mulmod(carry, lam, l)) % l;
            }
            std::vector<uint64_t> w(k, 0);
            for (size_t i = 0; i < k; ++i)
                if (h[i])
                    for (size_t c = 0; c < k; ++c) w[c] = (w[c] + mulmod(h[i], K[i][c], l)) % l;
            if (w[0] == 0) return false;
            uint64_t s = static_cast<uint64_t>(invmod(static_cast<int64_t>(w[0]), static_cast<int64_t>(l)));
            for (auto& x : w) x = mulmod(x, s, l);
            val_.push_back(std::move(w));  // central character omega, omega(1) = 1
        }
        return true;
    }

    void finish(int64_t order) {
        const auto& C = C_;
        const uint64_t l = ell_;
        const size_t k = C.count();
        deg_.clear();
        int64_t sum_sq = 0;
        for (auto& w : val_) {
            // |G| / d^2 = sum_c omega_c omega_{c*} / h_c
            uint64_t S = 0;
            for (size_t c = 0; c < k; ++c) {
                uint64_t hinv = static_cast<uint64_t>(invmod(C.size[c] % static_cast<int64_t>(l), static_cast<int64_t>(l)));
                S = (S + mulmod(mulmod(w[c], w[static_cast<size_t>(C.inverse[c])], l), hinv, l)) % l;
            }
            uint64_t d2 = mulmod(static_cast<uint64_t>(order) % l, static_cast<uint64_t>(invmod(static_cast<int64_t>(S), static_cast<int64_t>(l))), l);
            int64_t d = isqrt64(static_cast<int64_t>(d2));
            if (d * d != static_cast<int64_t>(d2) || d == 0) throw Error("character table: degree lift failed");
            for (size_t c = 0; c < k; ++c) {
                uint64_t hinv = static_cast<uint64_t>(invmod(C.size[c] % static_cast<int64_t>(l), static_cast<int64_t>(l)));
                w[c] = mulmod(mulmod(w[c], static_cast<uint64_t>(d), l), hinv, l);
            }
            deg_.push_back(d);
            sum_sq += d * d;
        }
        if (sum_sq != order) throw Error("character table: sum of squared degrees differs from group order");
        std::vector<size_t> perm(val_.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::sort(perm.begin(), perm.end(), [&](size_t a, size_t b) {
            return deg_[a] != deg_[b] ? deg_[a] < deg_[b] : val_[a] < val_[b];
        });
        std::vector<std::vector<uint64_t>> v2;
        std::vector<int64_t> d2;
        for (size_t i : perm) {
            v2.push_back(std::move(val_[i]));
            d2.push_back(deg_[i]);
        }
        val_ = std::move(v2);
        deg_ = std::move(d2);
        for (size_t i = 0; i < val_.size(); ++i) index_[hash_row(val_[i])].push_back(static_cast<int>(i));
    }

    static uint64_t hash_row(const std::vector<uint64_t>& v) {
        uint64_t h = 1469598103934665603ULL;
        for (uint64_t x : v) h = (h ^ x) * 1099511628211ULL;
        return h;
    }

    ConjugacyClasses C_;
    uint64_t ell_ = 0, zeta_ = 1;
    std::vector<std::vector<uint64_t>> val_;
    std::vector<int64_t> deg_;
    std::unordered_map<uint64_t, std::vector<int>> index_;
};

}  // namespace quatrep
