#include "quatrep/finite_abelian.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace quatrep;

namespace {

IntMatrix mat(std::initializer_list<std::initializer_list<int>> rows) {
    IntMatrix m;
    for (auto& r : rows) {
        std::vector<BigInt> v;
        for (int x : r) v.push_back(x);
        m.push_back(v);
    }
    return m;
}

bool unimodular(const IntMatrix& m) {
    // |det| = 1 via fraction-free elimination over Q
    size_t n = m.size();
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) a[i][j] = Rational(m[i][j]);
    Rational det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return false;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            Rational f = a[r][c] / a[c][c];
            for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det == 1 || det == -1;
}

void check_snf(const IntMatrix& M) {
    auto s = smith_normal_form(M);
    EXPECT_EQ(matmul(matmul(s.U, M), s.V), s.D);
    EXPECT_TRUE(unimodular(s.U));
    EXPECT_TRUE(unimodular(s.V));
    size_t k = std::min(M.size(), M.empty() ? 0 : M[0].size());
    for (size_t i = 0; i < s.D.size(); ++i)
        for (size_t j = 0; j < s.D[i].size(); ++j)
            if (i != j) EXPECT_EQ(s.D[i][j], 0);
    for (size_t i = 0; i + 1 < k; ++i) {
        EXPECT_GE(s.D[i][i], 0);
        if (s.D[i][i] != 0) EXPECT_EQ(s.D[i + 1][i + 1] % s.D[i][i], 0);
        else EXPECT_EQ(s.D[i + 1][i + 1], 0);
    }
}

}  // namespace

TEST(SmithNormalForm, Identity) {
    auto I = identity_matrix(3);
    auto s = smith_normal_form(I);
    EXPECT_EQ(s.D, I);
    EXPECT_EQ(s.U, I);
    EXPECT_EQ(s.V, I);
}

TEST(SmithNormalForm, Diag23) {
    auto s = smith_normal_form(mat({{2, 0}, {0, 3}}));
    EXPECT_EQ(s.D, mat({{1, 0}, {0, 6}}));
    check_snf(mat({{2, 0}, {0, 3}}));
}

TEST(SmithNormalForm, Zero) {
    auto Z = mat({{0, 0}, {0, 0}});
    EXPECT_EQ(smith_normal_form(Z).D, Z);
}

TEST(SmithNormalForm, RandomMatricesSatisfyContract) {
    uint64_t s = 12345;
    auto rnd = [&]() {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<int>((s >> 33) % 41) - 20;
    };
    for (int trial = 0; trial < 30; ++trial) {
        size_t r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
        IntMatrix M(r, std::vector<BigInt>(c));
        for (auto& row : M)
            for (auto& x : row) x = rnd();
        check_snf(M);
    }
}

TEST(UnitGroup, Z9) {
    ResidueRing R{ResidueRing::Kind::Base, 3, 2, 0};
    UnitGroup U(R);
    EXPECT_EQ(U.group().order(), 6);
    EXPECT_EQ(U.group().invariants(), std::vector<int64_t>{6});
    EXPECT_EQ(U.dlog(R.make(1)), U.group().identity());
    // dlog is a homomorphism (checked against brute-force multiplication)
    for (auto x : R.units())
        for (auto y : R.units())
            EXPECT_EQ(U.dlog(R.mul(x, y)), U.group().add(U.dlog(x), U.dlog(y)));
    EXPECT_THROW(U.dlog(R.make(3)), Error);
}

TEST(UnitGroup, Z3) {
    UnitGroup U(ResidueRing{ResidueRing::Kind::Base, 3, 1, 0});
    EXPECT_EQ(U.group().order(), 2);
}

TEST(UnitGroup, QuadraticRingsHaveExpectedOrders) {
    for (int64_t p : {3, 5, 7}) {
        int64_t u = smallest_nonresidue(p);
        for (int m = 1; m <= 4; ++m) {
            ResidueRing M{ResidueRing::Kind::Unramified, p, m, u};
            ResidueRing K{ResidueRing::Kind::Ramified, p, m, -p};
            ResidueRing L{ResidueRing::Kind::Ramified, p, m, -u * p};
            for (const auto& R : {M, K, L}) {
                if (R.size() > 200000) continue;
                UnitGroup U(R);
                EXPECT_EQ(U.group().order(), static_cast<int64_t>(R.units().size()));
                auto us = R.units();
                size_t step = 1 + us.size() / 40;
                for (size_t i = 0; i < us.size(); i += step)
                    for (size_t j = 3; j < us.size(); j += step)
                        EXPECT_EQ(U.dlog(R.mul(us[i], us[j])), U.group().add(U.dlog(us[i]), U.dlog(us[j])));
            }
        }
    }
}

TEST(Characters, TrivialGroupHasOneCharacter) {
    FiniteAbelianGroup G;
    EXPECT_EQ(characters(G).size(), 1u);
}

TEST(Characters, CyclicOrderTwo) {
    FiniteAbelianGroup G({2});
    auto chars = characters(G);
    ASSERT_EQ(chars.size(), 2u);
    EXPECT_EQ(chars[1].value({1}), Cyclotomic(-1));
}

TEST(Characters, Z9UnitsOrthogonality) {
    UnitGroup U(ResidueRing{ResidueRing::Kind::Base, 3, 2, 0});
    const auto& G = U.group();
    auto chars = characters(G);
    ASSERT_EQ(chars.size(), 6u);
    for (size_t a = 0; a < chars.size(); ++a)
        for (size_t b = 0; b < chars.size(); ++b) {
            Cyclotomic s;
            for (auto x : ResidueRing{ResidueRing::Kind::Base, 3, 2, 0}.units())
                s += chars[a].value(U.dlog(x)) * chars[b].value(U.dlog(x)).conj();
            EXPECT_EQ(s, Cyclotomic(a == b ? 6 : 0));
        }
}

TEST(Characters, ColumnOrthogonality) {
    FiniteAbelianGroup G({2, 6});
    auto chars = characters(G);
    for (auto g : G.elements()) {
        Cyclotomic s;
        for (auto& c : chars) s += c.value(g) * c.value(g).conj();
        EXPECT_EQ(s, Cyclotomic(G.order()));
        Cyclotomic t;
        for (auto& c : chars) t += c.value(g);
        EXPECT_EQ(t, Cyclotomic(g == G.identity() ? G.order() : 0));
    }
}

TEST(SubgroupSum, Basics) {
    FiniteAbelianGroup G({3, 6});
    auto H = G.elements();
    std::function<Cyclotomic(const FiniteAbelianGroup::Elem&)> triv = [](const auto&) { return Cyclotomic(1); };
    EXPECT_EQ(subgroup_sum(triv, H), 1);
    std::function<Cyclotomic(const FiniteAbelianGroup::Elem&)> reg = [&](const auto& g) {
        return Cyclotomic(g == G.identity() ? G.order() : 0);
    };
    EXPECT_EQ(subgroup_sum(reg, H), 1);
    CharacterVec chi{{1, 0}, {3, 6}};
    std::function<Cyclotomic(const FiniteAbelianGroup::Elem&)> c = [&](const auto& g) { return chi.value(g); };
    EXPECT_EQ(subgroup_sum(c, H), 0);
    // subgroup generated by (0, 1): chi trivial there
    auto sub = subgroup_elements(G, {{0, 1}});
    EXPECT_EQ(sub.size(), 6u);
    EXPECT_EQ(subgroup_sum(c, sub), 1);
}

TEST(Cyclotomic, RootsOfUnity) {
    for (int64_t n : {2, 3, 4, 5, 6, 8, 9, 12, 15}) {
        Cyclotomic z = Cyclotomic::root(Phase(1, n));
        Cyclotomic pw = 1, sum;
        for (int64_t j = 0; j < n; ++j) {
            sum += pw;
            pw *= z;
        }
        EXPECT_EQ(pw, Cyclotomic(1));
        EXPECT_TRUE(sum.is_zero());
        EXPECT_NEAR(std::abs(z.to_complex()), 1.0, 1e-12);
        EXPECT_EQ(z * z.conj(), Cyclotomic(1));
    }
}

TEST(Cyclotomic, MixedConductors) {
    Cyclotomic a = Cyclotomic::root(Phase(1, 3)) + Cyclotomic::root(Phase(1, 4));
    Cyclotomic b = Cyclotomic::root(Phase(2, 5)) - Cyclotomic(Rational(1, 2));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * a, a * (b * a));
    // i^2 = -1 and sqrt(-3) = 2 zeta_3 + 1 squares to -3
    Cyclotomic i = Cyclotomic::root(Phase(1, 4));
    EXPECT_EQ(i * i, Cyclotomic(-1));
    Cyclotomic s = Cyclotomic(2) * Cyclotomic::root(Phase(1, 3)) + Cyclotomic(1);
    EXPECT_EQ(s * s, Cyclotomic(-3));
    EXPECT_TRUE((s * s).is_rational());
    EXPECT_FALSE(s.is_rational());
}
