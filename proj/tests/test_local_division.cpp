#include "quatrep/local_division.hpp"

#include <gtest/gtest.h>

using namespace quatrep;

TEST(QuotientGroup, OrdersMatchEnumeration) {
    EXPECT_EQ(QuotientGroup(3, 1).order(), 8);
    EXPECT_EQ(QuotientGroup(3, 3).order(), 216);
    for (auto [p, n] : std::vector<std::pair<int64_t, int>>{{3, 2}, {5, 2}, {5, 3}, {7, 2}, {3, 4}}) {
        QuotientGroup G(p, n);
        // q^2 - 1 unit residues, q^(2(n-1)) above them, over (q-1) q^(ceil(n/2)-1) scalars, times 2 cosets of j
        int64_t q = p;
        EXPECT_EQ(G.order(), 2 * (q * q - 1) * ipow(q, 2 * (n - 1)) / ((q - 1) * ipow(q, (n + 1) / 2 - 1)));
    }
}

TEST(QuotientGroup, Rejections) {
    EXPECT_THROW(QuotientGroup(2, 3), Error);
    EXPECT_THROW(QuotientGroup(9, 2), Error);
    EXPECT_THROW(QuotientGroup(3, 0), Error);
    try {
        QuotientGroup(5, 4, 1000);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("37500"), std::string::npos);
    }
}

TEST(QuotientGroup, GroupAxioms) {
    QuotientGroup G(3, 3);
    const auto N = static_cast<int32_t>(G.order());
    for (int32_t x = 0; x < N; ++x) {
        EXPECT_EQ(G.mul(x, G.inv(x)), 0);
        EXPECT_EQ(G.mul(0, x), x);
        EXPECT_EQ(G.mul(x, 0), x);
    }
    for (int32_t x = 0; x < N; x += 5)
        for (int32_t y = 1; y < N; y += 7)
            for (int32_t z = 2; z < N; z += 11) EXPECT_EQ(G.mul(G.mul(x, y), z), G.mul(x, G.mul(y, z)));
}

TEST(QuotientGroup, FiltrationIsNormalAndTorusAbelian) {
    QuotientGroup G(5, 3);
    auto gens = G.generators();
    for (int32_t x = 0; x < G.order(); x += 3)
        for (int32_t g : gens) EXPECT_EQ(G.depth(G.conj(g, x)), G.depth(x));
    for (ExtLabel E : kAllLabels) {
        auto H = G.torus(E);
        for (int32_t a : H)
            for (int32_t b : H) EXPECT_EQ(G.mul(a, b), G.mul(b, a));
        EXPECT_EQ(G.closure(H), H);
    }
    // j^2 = -p and (cj)^2 = -up are scalars
    for (ExtLabel E : {ExtLabel::K, ExtLabel::L}) {
        int32_t pi = G.uniformizer(E);
        EXPECT_NE(pi, 0);
        EXPECT_EQ(G.mul(pi, pi), 0);
    }
}

TEST(CharacterTable, CompleteAndOrthogonal) {
    for (auto [p, n] : std::vector<std::pair<int64_t, int>>{{3, 1}, {3, 2}, {5, 1}, {5, 2}, {3, 3}}) {
        LocalDivisionQuotient D(p, n);
        const auto& T = D.table();
        const auto& C = D.classes();
        int64_t s = 0;
        for (size_t i = 0; i < T.size(); ++i) {
            s += T.degree(i) * T.degree(i);
            EXPECT_EQ(D.group().order() % T.degree(i), 0);
        }
        EXPECT_EQ(s, D.group().order());
        EXPECT_EQ(T.size(), C.count());
        for (size_t i = 0; i < T.size(); ++i)
            for (size_t k = i; k < T.size(); ++k) {
                Cyclotomic ip;
                for (size_t c = 0; c < C.count(); ++c) ip += T.value(i, c) * T.value(k, c).conj() * Cyclotomic(C.size[c]);
                EXPECT_EQ(ip, Cyclotomic(i == k ? D.group().order() : 0));
            }
    }
}

TEST(CharacterTable, DihedralLevelOne) {
    // G_1 is dihedral of order 2(q + 1): four linear characters and (q - 1)/2 of degree 2
    LocalDivisionQuotient D(7, 1);
    std::map<int64_t, int> degs;
    for (auto& r : D.records()) ++degs[r.dim];
    EXPECT_EQ(degs[1], 4);
    EXPECT_EQ(degs[2], 3);
}

TEST(Classification, OddConductorSplitsIntoKAndL) {
    LocalDivisionQuotient D(3, 2);
    int k = 0, l = 0;
    for (auto& r : D.records()) {
        if (r.dim == 1) {
            EXPECT_EQ(r.label, RepLabel::OneDimensional);
            continue;
        }
        if (r.conductor == 3) {
            EXPECT_TRUE(r.label == RepLabel::K || r.label == RepLabel::L);
            (r.label == RepLabel::K ? k : l)++;
        }
    }
    EXPECT_GT(k, 0);
    EXPECT_EQ(k, l);
    EXPECT_EQ((k + l) % 2, 0);
}

TEST(Classification, EvenMinimalIsUnramified) {
    LocalDivisionQuotient D(3, 1);
    for (auto& r : D.records())
        if (r.dim > 1) {
            EXPECT_EQ(r.conductor, 2);
            EXPECT_TRUE(r.minimal);
            EXPECT_EQ(r.label, RepLabel::M);
        }
}

TEST(InvariantDimension, TableValues) {
    LocalDivisionQuotient D3(3, 2), D5(5, 2);
    EXPECT_EQ(D3.invariant_dimension(D3.records()[0], ExtLabel::K), 1);  // trivial character
    bool seen3 = false, seen5 = false;
    for (auto& r : D3.records())
        if (r.label == RepLabel::K && r.conductor == 3) {
            EXPECT_EQ(D3.invariant_dimension(r, ExtLabel::K), 2);
            seen3 = true;
        }
    for (auto& r : D5.records())
        if (r.label == RepLabel::K && r.conductor == 3) {
            EXPECT_EQ(D5.invariant_dimension(r, ExtLabel::K), 0);
            EXPECT_EQ(D5.invariant_dimension(r, ExtLabel::L), 2);
            seen5 = true;
        }
    EXPECT_TRUE(seen3 && seen5);
}

TEST(InvariantDimension, ConjugationInvariant) {
    LocalDivisionQuotient D(5, 2);
    auto gens = D.group().generators();
    for (auto& r : D.records())
        for (ExtLabel E : kAllLabels)
            for (int32_t g : gens) EXPECT_EQ(D.invariant_dimension_conjugated(r, E, g), D.invariant_dimension(r, E));
}

TEST(InvariantDimension, QuadraticTwistsPreserveOddConductor) {
    LocalDivisionQuotient D(5, 2);
    const auto& T = D.table();
    const auto& R = D.records();
    for (auto& s : R) {
        if (s.dim != 1) continue;
        for (auto& r : R) {
            if (r.dim == 1 || r.conductor % 2 == 0) continue;
            int t = T.find_row(T.product_mod(r.row, s.row));
            ASSERT_GE(t, 0);
            EXPECT_EQ(R[static_cast<size_t>(t)].conductor, r.conductor);
        }
    }
}

TEST(PredictedDimension, TableRows) {
    EXPECT_EQ(predicted_dimension(RepLabel::M, 2, true, 2, ExtLabel::K, 3), 2);
    EXPECT_EQ(predicted_dimension(RepLabel::K, 3, true, 6, ExtLabel::L, 5), 2);
    EXPECT_EQ(predicted_dimension(RepLabel::K, 3, true, 6, ExtLabel::K, 5), 0);
    EXPECT_EQ(predicted_dimension(RepLabel::K, 3, true, 4, ExtLabel::K, 3), 2);
    EXPECT_EQ(predicted_dimension(RepLabel::NonMinimal, 4, false, 6, ExtLabel::M, 3), 0);
    EXPECT_EQ(predicted_dimension(RepLabel::L, 5, true, 12, ExtLabel::M, 3), 1);
    EXPECT_EQ(predicted_dimension(RepLabel::OneDimensional, 1, true, 1, ExtLabel::M, 3), 1);
    EXPECT_EQ(predicted_dimension(RepLabel::OneDimensional, 2, false, 1, ExtLabel::M, 3), 0);
}
