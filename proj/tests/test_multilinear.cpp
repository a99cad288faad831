#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmv/multilinear.hpp"
#include "test_util.hpp"

using namespace cmv;
using namespace cmv::testutil;

namespace {
ProjVec<Rat> e4(int i)
{
    ProjVec<Rat> v{Rat(0), Rat(0), Rat(0), Rat(0)};
    v[i] = Rat(1);
    return v;
}
}  // namespace

TEST_CASE("monomial order is graded lex")
{
    const auto& ord = MonomialOrder::get(2, 3);
    std::vector<std::vector<int>> expect = {{2, 0, 0}, {1, 1, 0}, {1, 0, 1},
                                            {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
    CHECK(ord.exps == expect);
    CHECK(MonomialOrder::get(3, 2).exps ==
          std::vector<std::vector<int>>{{3, 0}, {2, 1}, {1, 2}, {0, 3}});
    CHECK(MonomialOrder::get(3, 6).size() == 56);
    CHECK(MonomialOrder::get(2, 6).size() == 21);
}

TEST_CASE("plucker embedding")
{
    auto l = plucker<Rat>(e4(0), e4(1));
    CHECK(proj_eq(l.coords, ProjVec<Rat>{Rat(1), Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)}));
    auto l2 = plucker<Rat>(e4(0), e4(3));
    CHECK(proj_eq(l2.coords, ProjVec<Rat>{Rat(0), Rat(0), Rat(1), Rat(0), Rat(0), Rat(0)}));
    ProjVec<Rat> p{Rat(2), Rat(0), Rat(0), Rat(0)};
    CHECK_THROWS_AS(plucker<Rat>(e4(0), p), Error);

    // Grassmann-Pluecker relation and independence of the spanning pair
    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        ProjVec<Rat> x0 = rand_vec(rng, 4), x1 = rand_vec(rng, 4);
        Mat<Rat> s(2, 4);
        for (int j = 0; j < 4; ++j) {
            s(0, j) = x0[j];
            s(1, j) = x1[j];
        }
        if (rank(s) < 2) continue;
        auto line = plucker(x0, x1);
        CHECK(grassmann_pluecker(line).is_zero());
        // another spanning pair of the same line
        ProjVec<Rat> y0, y1;
        y0.v.resize(4);
        y1.v.resize(4);
        Rat a = rng.rat_int(), b = rng.rat_int(), c = rng.rat_int(), d = rng.rat_int();
        if ((a * d - b * c).is_zero()) continue;
        for (int j = 0; j < 4; ++j) {
            y0[j] = a * x0[j] + b * x1[j];
            y1[j] = c * x0[j] + d * x1[j];
        }
        CHECK(proj_eq(plucker(y0, y1).coords, line.coords));
    }
}

TEST_CASE("sigma duality")
{
    Mat<Rat> s = sigma_matrix<Rat>();
    CHECK(s * s == Mat<Rat>::identity(6));

    PlueckerLine<Rat> e1line{ProjVec<Rat>{Rat(1), Rat(0), Rat(0), Rat(0), Rat(0), Rat(0)}};
    CHECK(proj_eq(dual_line(e1line).coords,
                  ProjVec<Rat>{Rat(0), Rat(0), Rat(0), Rat(0), Rat(0), Rat(1)}));

    // Sigma pl(X0,X1) is the pluecker vector of the kernel pair
    Rng rng(4);
    int done = 0;
    while (done < 50) {
        ProjVec<Rat> x0 = rand_vec(rng, 4), x1 = rand_vec(rng, 4);
        Mat<Rat> stack(2, 4);
        for (int j = 0; j < 4; ++j) {
            stack(0, j) = x0[j];
            stack(1, j) = x1[j];
        }
        if (rank(stack) < 2) continue;
        auto ker = kernel_basis(stack);
        REQUIRE(ker.size() == 2);
        auto lhs = dual_line(plucker(x0, x1));
        auto rhs = plucker(ProjVec<Rat>(ker[0]), ProjVec<Rat>(ker[1]));
        CHECK(proj_eq(lhs.coords, rhs.coords));
        ++done;
    }
}

TEST_CASE("wedge2")
{
    CHECK(wedge2(Mat<Rat>::identity(4)) == Mat<Rat>::identity(6));

    Mat<Rat> d(4, 4);
    d(0, 0) = Rat(2);
    d(1, 1) = Rat(3);
    d(2, 2) = Rat(5);
    d(3, 3) = Rat(7);
    Mat<Rat> w = wedge2(d);
    Mat<Rat> expect(6, 6);
    expect(0, 0) = Rat(6);
    expect(1, 1) = Rat(10);
    expect(2, 2) = Rat(14);
    expect(3, 3) = Rat(15);
    expect(4, 4) = Rat(21);
    expect(5, 5) = Rat(35);
    CHECK(w == expect);

    Rng rng(6);
    for (int i = 0; i < 50; ++i) {
        Mat<Rat> m1 = rand_mat(rng, 4, 4), m2 = rand_mat(rng, 4, 4);
        CHECK(wedge2(m1 * m2) == wedge2(m1) * wedge2(m2));
    }

    // wedge2 moves lines the way the matrix moves spanning points
    for (int i = 0; i < 100; ++i) {
        Mat<Rat> m = rand_mat(rng, 4, 4);
        ProjVec<Rat> x0 = rand_vec(rng, 4), x1 = rand_vec(rng, 4);
        Mat<Rat> stack(2, 4);
        for (int j = 0; j < 4; ++j) {
            stack(0, j) = x0[j];
            stack(1, j) = x1[j];
        }
        if (rank(stack) < 2) continue;
        ProjVec<Rat> mx0(m * x0.v), mx1(m * x1.v);
        Mat<Rat> stack2(2, 4);
        for (int j = 0; j < 4; ++j) {
            stack2(0, j) = mx0[j];
            stack2(1, j) = mx1[j];
        }
        if (rank(stack2) < 2) continue;
        CHECK(proj_eq(ProjVec<Rat>(wedge2(m) * plucker(x0, x1).coords.v),
                      plucker(mx0, mx1).coords));
    }

    // wedge id: wedge2 M equals Sigma wedge2((M^T)^{-1}) Sigma projectively
    for (int i = 0; i < 50; ++i) {
        Mat<Rat> m = rand_invertible(rng, 4);
        Mat<Rat> lhs = wedge2(m);
        Mat<Rat> rhs = sigma_matrix<Rat>() * wedge2(inverse(m.transpose())) * sigma_matrix<Rat>();
        CHECK(proj_eq_mat(lhs, rhs));
    }
}

TEST_CASE("veronese")
{
    ProjVec<Rat> ones{Rat(1), Rat(1), Rat(1)};
    CHECK(veronese(2, ones).v == std::vector<Rat>{Rat(1), Rat(1), Rat(1), Rat(1), Rat(1), Rat(1)});
    ProjVec<Rat> x{Rat(1), Rat(2), Rat(3)};
    CHECK(veronese(2, x).v == std::vector<Rat>{Rat(1), Rat(2), Rat(3), Rat(4), Rat(6), Rat(9)});
    ProjVec<Rat> st{Rat(2), Rat(5)};
    CHECK(veronese(3, st).v == std::vector<Rat>{Rat(8), Rat(20), Rat(50), Rat(125)});

    // homogeneity degree d
    Rng rng(8);
    for (int d = 1; d <= 4; ++d)
        for (int i = 0; i < 10; ++i) {
            ProjVec<Rat> v = rand_nonzero_vec(rng, 3);
            Rat lam = rng.rat_int(1, 9);
            ProjVec<Rat> lhs = veronese(d, v.scaled(lam));
            ProjVec<Rat> rhs = veronese(d, v);
            Rat factor(1);
            for (int k = 0; k < d; ++k) factor *= lam;
            CHECK(lhs.v == rhs.scaled(factor).v);
        }
}

TEST_CASE("veronese matrix")
{
    for (int d : {2, 3})
        for (int n : {3, 4, 6}) {
            Mat<Rat> id = Mat<Rat>::identity(n);
            CHECK(veronese_matrix(d, id) == Mat<Rat>::identity(MonomialOrder::get(d, n).size()));
        }

    Mat<Rat> diag(3, 3);
    diag(0, 0) = Rat(1);
    diag(1, 1) = Rat(2);
    diag(2, 2) = Rat(3);
    Mat<Rat> vd = veronese_matrix(2, diag);
    Mat<Rat> expect(6, 6);
    long vals[6] = {1, 2, 3, 4, 6, 9};
    for (int i = 0; i < 6; ++i) expect(i, i) = Rat(vals[i]);
    CHECK(vd == expect);

    // defining relation and functoriality
    Rng rng(9);
    for (int i = 0; i < 30; ++i) {
        Mat<Rat> a = rand_mat(rng, 3, 4);
        ProjVec<Rat> x = rand_vec(rng, 4);
        ProjVec<Rat> lhs(veronese_matrix(3, a) * veronese(3, x).v);
        ProjVec<Rat> rhs = veronese(3, ProjVec<Rat>(a * x.v));
        CHECK(lhs.v == rhs.v);

        Mat<Rat> ap = rand_mat(rng, 2, 3);
        CHECK(veronese_matrix(3, ap * a) == veronese_matrix(3, ap) * veronese_matrix(3, a));
    }

    // inverse identity
    for (int i = 0; i < 20; ++i) {
        Mat<Rat> a = rand_invertible(rng, 3);
        CHECK(veronese_matrix(2, inverse(a)) == inverse(veronese_matrix(2, a)));
    }
}
