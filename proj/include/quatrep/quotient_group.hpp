#pragma once

// Finite quotients G_n = B^x / F^x U^n of the local quaternion division algebra
// B = M + M j over Q_p, with j^2 = -p and j b = sigma(b) j. Elements are
// normalized triples (w, a, b) standing for (a + b j) j^w with a a unit of o_M
// mod p^ceil(n/2) and b in o_M mod p^floor(n/2).

#include "quatrep/local_quadratic.hpp"

#include <numeric>
#include <random>

namespace quatrep {

struct QuatElt {
    int w = 0;
    int64_t a0 = 1, a1 = 0, b0 = 0, b1 = 0;
    bool operator==(const QuatElt&) const = default;
};

class QuotientGroup {
public:
    using Idx = int32_t;
    static constexpr int64_t kDefaultBound = 2'000'000;

    static int64_t expected_order(int64_t p, int n) {
        // 2 (q + 1) q^(2n - 1 - ceil(n/2))
        return 2 * (p + 1) * ipow(p, 2 * n - 1 - (n + 1) / 2);
    }

    QuotientGroup(int64_t p, int n, int64_t bound = kDefaultBound) : p_(p), n_(n) {
        require_odd_prime(p);
        if (n < 1) throw Error("quotient level must be at least 1");
        int64_t ord = expected_order(p, n);
        if (ord > bound)
            throw Error("quotient group of order " + std::to_string(ord) + " exceeds size bound " + std::to_string(bound));
        u_ = smallest_nonresidue(p);
        Pa_ = ipow(p, (n + 1) / 2);
        Pb_ = ipow(p, n / 2);
        NA_ = Pa_ + Pa_ / p;
        inv_a_.assign(static_cast<size_t>(Pa_), 0);
        for (int64_t x = 1; x < Pa_; ++x)
            if (x % p) inv_a_[static_cast<size_t>(x)] = invmod(x, Pa_);
        order_ = 2 * NA_ * Pb_ * Pb_;
        if (order_ != ord) throw Error("internal: quotient enumeration does not match closed form");
        elts_.resize(static_cast<size_t>(order_));
        for (Idx i = 0; i < order_; ++i) elts_[static_cast<size_t>(i)] = decode(i);
        inv_.assign(static_cast<size_t>(order_), -1);
        for (Idx i = 0; i < order_; ++i) {
            if (inv_[static_cast<size_t>(i)] >= 0) continue;
            const QuatElt& x = elts_[static_cast<size_t>(i)];
            // (a + bj)^-1 ~ sigma(a) - bj; (y j)^-1 ~ j y^-1
            QuatElt y{0, x.a0, neg_a(x.a1), neg_b(x.b0), neg_b(x.b1)};
            Idx r = index(y);
            if (x.w) r = mul(index(QuatElt{1, 1, 0, 0, 0}), r);
            inv_[static_cast<size_t>(i)] = r;
            inv_[static_cast<size_t>(r)] = i;
        }
        init_l_unit();
    }

    int64_t p() const { return p_; }
    int n() const { return n_; }
    int64_t u() const { return u_; }
    int64_t order() const { return order_; }
    Idx identity() const { return 0; }
    int64_t mod_a() const { return Pa_; }
    int64_t mod_b() const { return Pb_; }

    const QuatElt& elt(Idx i) const { return elts_[static_cast<size_t>(i)]; }
    Idx inv(Idx i) const { return inv_[static_cast<size_t>(i)]; }

    /// Index of the class of (a + b j) j^w; a must be a unit of o_M.
    Idx index(QuatElt x) const {
        x.a0 = mod(x.a0, Pa_);
        x.a1 = mod(x.a1, Pa_);
        x.b0 = mod(x.b0, Pb_);
        x.b1 = mod(x.b1, Pb_);
        int64_t t;
        if (x.a0 % p_) t = inv_a_[static_cast<size_t>(x.a0)];
        else if (x.a1 % p_) t = inv_a_[static_cast<size_t>(x.a1)];
        else throw Error("quaternion coset representative is not a unit");
        x.a0 = x.a0 * t % Pa_;
        x.a1 = x.a1 * t % Pa_;
        x.b0 = x.b0 * t % Pb_;
        x.b1 = x.b1 * t % Pb_;
        int64_t ai = (x.a0 == 1) ? x.a1 : Pa_ + x.a0 / p_;
        return static_cast<Idx>(((x.w * NA_ + ai) * Pb_ + x.b0) * Pb_ + x.b1);
    }

    Idx mul(Idx i, Idx k) const {
        const QuatElt& x = elts_[static_cast<size_t>(i)];
        QuatElt y = elts_[static_cast<size_t>(k)];
        if (x.w) {
            y.a1 = neg_a(y.a1);
            y.b1 = neg_b(y.b1);
        }
        // (a + bj)(c + dj) = (ac - p b sigma(d)) + (ad + b sigma(c)) j
        int64_t sd0 = y.b0, sd1 = neg_b(y.b1), sc0 = y.a0, sc1 = neg_a(y.a1);
        int64_t A0 = x.a0 * y.a0 + u_ * (x.a1 * y.a1 % Pa_) - p_ * ((x.b0 * sd0 + u_ * (x.b1 * sd1 % Pa_)) % Pa_);
        int64_t A1 = x.a0 * y.a1 + x.a1 * y.a0 - p_ * ((x.b0 * sd1 + x.b1 * sd0) % Pa_);
        int64_t B0 = 0, B1 = 0;
        if (Pb_ > 1) {
            B0 = x.a0 * y.b0 + u_ * (x.a1 * y.b1 % Pb_) + x.b0 * sc0 + u_ * (x.b1 * sc1 % Pb_);
            B1 = x.a0 * y.b1 + x.a1 * y.b0 + x.b0 * sc1 + x.b1 * sc0;
        }
        return index(QuatElt{x.w ^ y.w, A0, A1, B0, B1});
    }

    Idx conj(Idx g, Idx x) const { return mul(mul(g, x), inv(g)); }

    /// Largest m <= n with x in the image of U^m; -1 when x is not a unit.
    int depth(Idx i) const {
        const QuatElt& x = elt(i);
        if (x.w) return -1;
        if (x.a0 % p_ == 0) return 0;
        int va = x.a1 == 0 ? (n_ + 1) / 2 : valuation(x.a1, p_);
        int vb = n_ / 2;
        if (x.b0) vb = std::min(vb, valuation(x.b0, p_));
        if (x.b1) vb = std::min(vb, valuation(x.b1, p_));
        return std::min({2 * va, 2 * vb + 1, n_});
    }

    /// Image of o_E^x.
    std::vector<Idx> torus(ExtLabel E) const {
        std::vector<Idx> out;
        switch (E) {
            case ExtLabel::M:
                for (int64_t a0 = 0; a0 < Pa_; ++a0)
                    for (int64_t a1 = 0; a1 < Pa_; ++a1)
                        if (a0 % p_ || a1 % p_) out.push_back(index(QuatElt{0, a0, a1, 0, 0}));
                break;
            case ExtLabel::K:
                for (int64_t y = 0; y < Pb_; ++y) out.push_back(index(QuatElt{0, 1, 0, y, 0}));
                break;
            case ExtLabel::L:
                for (int64_t y = 0; y < Pb_; ++y) out.push_back(index(QuatElt{0, 1, 0, y * c0_, y * c1_}));
                break;
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Image of a uniformizer of E: j for K, c j with N(c) = u for L, p (trivial) for M.
    Idx uniformizer(ExtLabel E) const {
        switch (E) {
            case ExtLabel::K: return index(QuatElt{1, 1, 0, 0, 0});
            case ExtLabel::L: return index(QuatElt{1, c0_, c1_, 0, 0});
            default: return identity();
        }
    }

    /// Image of E^x U^m.
    std::vector<Idx> torus_times_filtration(ExtLabel E, int m) const {
        std::vector<char> in(static_cast<size_t>(order_), 0);
        std::vector<Idx> um;
        for (Idx i = 0; i < order_; ++i)
            if (depth(i) >= m) um.push_back(i);
        std::vector<Idx> out;
        Idx pi = uniformizer(E);
        for (Idx h : torus(E))
            for (Idx x : um)
                for (Idx y : {mul(h, x), mul(pi, mul(h, x))})
                    if (!in[static_cast<size_t>(y)]) {
                        in[static_cast<size_t>(y)] = 1;
                        out.push_back(y);
                    }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Subgroup generated by gens.
    std::vector<Idx> closure(const std::vector<Idx>& gens) const {
        std::vector<char> in(static_cast<size_t>(order_), 0);
        std::vector<Idx> out{identity()};
        in[0] = 1;
        for (size_t i = 0; i < out.size(); ++i)
            for (Idx g : gens) {
                Idx y = mul(out[i], g);
                if (!in[static_cast<size_t>(y)]) {
                    in[static_cast<size_t>(y)] = 1;
                    out.push_back(y);
                }
            }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// A generating set, checked by closure.
    std::vector<Idx> generators() const {
        std::vector<Idx> gens{uniformizer(ExtLabel::K)};
        std::mt19937_64 rng(order_);
        std::uniform_int_distribution<Idx> pick(0, static_cast<Idx>(order_ - 1));
        while (static_cast<int64_t>(closure(gens).size()) != order_) gens.push_back(pick(rng));
        return gens;
    }

private:
    int64_t neg_a(int64_t x) const { return x ? Pa_ - x : 0; }
    int64_t neg_b(int64_t x) const { return x ? Pb_ - x : 0; }

    QuatElt decode(Idx i) const {
        QuatElt x;
        int64_t r = i;
        x.b1 = r % Pb_;
        r /= Pb_;
        x.b0 = r % Pb_;
        r /= Pb_;
        int64_t ai = r % NA_;
        x.w = static_cast<int>(r / NA_);
        if (ai < Pa_) {
            x.a0 = 1 % Pa_;
            x.a1 = ai;
        } else {
            x.a0 = (ai - Pa_) * p_;
            x.a1 = 1 % Pa_;
        }
        return x;
    }

    // c = c0 + c1 w with N(c) = c0^2 - u c1^2 = u mod p^ceil(n/2), c0 a unit
    void init_l_unit() {
        for (int64_t y = 0; y < p_; ++y) {
            int64_t t = mod(u_ + u_ * y * y, p_);
            if (t == 0 || legendre(t, p_) != 1) continue;
            int64_t x = static_cast<int64_t>(sqrtmod(static_cast<uint64_t>(t), static_cast<uint64_t>(p_)));
            int64_t target = mod(u_ + u_ * y * y, Pa_);
            for (int64_t pk = p_; pk < Pa_;) {
                pk = std::min(pk * pk, Pa_);
                // Newton step for x^2 = target mod pk
                x = mod(x - mod(x * x - target, pk) * invmod(mod(2 * x, pk), pk), pk);
            }
            c0_ = mod(x, Pa_);
            c1_ = y % Pa_;
            return;
        }
        throw Error("internal: no unit of norm u");
    }

    int64_t p_, u_ = 2;
    int n_;
    int64_t Pa_, Pb_, NA_, order_;
    int64_t c0_ = 1, c1_ = 0;
    std::vector<int64_t> inv_a_;
    std::vector<QuatElt> elts_;
    std::vector<Idx> inv_;
};

}  // namespace quatrep
