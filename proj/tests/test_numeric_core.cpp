#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmv/numrank.hpp"
#include "test_util.hpp"

using namespace cmv;
using namespace cmv::testutil;

TEST_CASE("rational scalar basics")
{
    Rat a(3, 6);
    CHECK(a.str() == "1/2");
    CHECK(Rat::parse("-4/8").str() == "-1/2");
    CHECK(Rat::parse("7").str() == "7");
    CHECK((Rat(1, 3) + Rat(1, 6)).str() == "1/2");
    CHECK_THROWS_AS(Rat(1, 0), Error);
    CHECK_THROWS_AS(Rat(1) / Rat(0), Error);
    CHECK(Rat(-2, -4).str() == "1/2");  // positive denominator invariant
}

TEST_CASE("rank")
{
    CHECK(rank(Mat<Rat>::identity(3)) == 3);
    CHECK(rank(Mat<Rat>::zero(2, 3)) == 0);
    Mat<Rat> prop(2, 2, {Rat(1), Rat(2), Rat(2), Rat(4)});
    CHECK(rank(prop) == 1);
    CHECK_THROWS_AS(rank(Mat<Rat>()), Error);

    Rng rng(11);
    for (int i = 0; i < 30; ++i) {
        Mat<Rat> m = rand_mat(rng, 3 + (i % 3), 2 + (i % 4));
        CHECK(rank(m) == rank(m.transpose()));
    }
}

TEST_CASE("kernel basis")
{
    Mat<Rat> m = hstack(Mat<Rat>::identity(3), Mat<Rat>::zero(3, 1));
    auto k = kernel_basis(m);
    REQUIRE(k.size() == 1);
    CHECK(proj_eq(ProjVec<Rat>(k[0]), ProjVec<Rat>{Rat(0), Rat(0), Rat(0), Rat(1)}));

    Mat<Rat> m2 = hstack(Mat<Rat>::zero(3, 1), Mat<Rat>::identity(3));
    auto k2 = kernel_basis(m2);
    REQUIRE(k2.size() == 1);
    CHECK(proj_eq(ProjVec<Rat>(k2[0]), ProjVec<Rat>{Rat(1), Rat(0), Rat(0), Rat(0)}));

    Rng rng(5);
    Mat<Rat> inv = rand_invertible(rng, 4);
    CHECK(kernel_basis(inv).empty());

    // kernel vectors actually annihilate
    for (int i = 0; i < 10; ++i) {
        Mat<Rat> m3 = rand_mat(rng, 2, 5);
        for (const auto& v : kernel_basis(m3)) {
            std::vector<Rat> out = m3 * v;
            for (const Rat& x : out) CHECK(x.is_zero());
        }
    }
}

TEST_CASE("right pseudo-inverse")
{
    Mat<Rat> a = hstack(Mat<Rat>::identity(3), Mat<Rat>::zero(3, 1));
    Mat<Rat> api = right_pseudo_inverse(a);
    CHECK(a * api == Mat<Rat>::identity(3));
    for (int j = 0; j < 3; ++j) CHECK(api(3, j).is_zero());

    Mat<Rat> b = hstack(Mat<Rat>::zero(3, 1), Mat<Rat>::identity(3));
    Mat<Rat> bpi = right_pseudo_inverse(b);
    CHECK(b * bpi == Mat<Rat>::identity(3));
    for (int j = 0; j < 3; ++j) CHECK(bpi(0, j).is_zero());

    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        Mat<Rat> c = rand_mat(rng, 3, 4);
        if (rank(c) < 3) continue;
        CHECK(c * right_pseudo_inverse(c) == Mat<Rat>::identity(3));
    }

    Mat<Rat> deficient(2, 3, {Rat(1), Rat(2), Rat(3), Rat(2), Rat(4), Rat(6)});
    CHECK_THROWS_AS(right_pseudo_inverse(deficient), Error);
}

TEST_CASE("adjugate identity")
{
    Rng rng(13);
    for (int i = 0; i < 100; ++i) {
        int n = 2 + static_cast<int>(rng.uniform_int(0, 2));
        Mat<Rat> m = rand_mat(rng, n, n);
        Mat<Rat> lhs = adjugate(m) * m;
        Mat<Rat> rhs = Mat<Rat>::identity(n).scaled(det(m));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("proj_eq")
{
    ProjVec<Rat> u{Rat(1), Rat(2), Rat(3)};
    CHECK(proj_eq(u, ProjVec<Rat>{Rat(2), Rat(4), Rat(6)}));
    CHECK_FALSE(proj_eq(ProjVec<Rat>{Rat(1), Rat(0), Rat(0)}, ProjVec<Rat>{Rat(0), Rat(1), Rat(0)}));
    CHECK_THROWS_AS(proj_eq(u, ProjVec<Rat>{Rat(1), Rat(2)}), Error);

    ProjVec<double> a{1.0, 2.0, 3.0};
    ProjVec<double> b{1.0, 2.0, 3.0 + 1e-12};
    CHECK(proj_eq(a, b, 1e-8));
    CHECK_FALSE(proj_eq(ProjVec<double>{1, 0, 0}, ProjVec<double>{1, 1e-3, 0}, 1e-8));

    // equivalence relation on random normalized exact vectors
    Rng rng(3);
    for (int i = 0; i < 25; ++i) {
        ProjVec<Rat> x = rand_nonzero_vec(rng, 4);
        ProjVec<Rat> y = rand_nonzero_vec(rng, 4);
        ProjVec<Rat> z = rand_nonzero_vec(rng, 4);
        CHECK(proj_eq(x, x));
        CHECK(proj_eq(x, y) == proj_eq(y, x));
        if (proj_eq(x, y) && proj_eq(y, z)) CHECK(proj_eq(x, z));
        CHECK(proj_eq(x, x.scaled(Rat(-7, 3))));
    }
}

TEST_CASE("normalization conventions")
{
    ProjVec<Rat> v{Rat(0), Rat(-3), Rat(6)};
    ProjVec<Rat> n = v.normalized();
    CHECK(n[0].is_zero());
    CHECK(n[1] == Rat(1));
    CHECK(n[2] == Rat(-2));

    ProjVec<double> f{0.0, -3.0, 4.0};
    ProjVec<double> nf = f.normalized();
    CHECK(nf[1] > 0);  // first significant coordinate positive
    CHECK(std::fabs(nf[1] * nf[1] + nf[2] * nf[2] - 1.0) < 1e-14);
    CHECK_THROWS_AS(ProjVec<Rat>{Rat(0)}.normalized(), Error);
}

TEST_CASE("numerical rank")
{
    Mat<double> m(3, 3);
    m(0, 0) = 1;
    m(1, 1) = 1e-4;
    m(2, 2) = 1e-12;
    CHECK(numerical_rank(m) == 2);
    CHECK(numerical_rank(m, 1e-13) == 3);
    CHECK(numerical_rank(Mat<double>::identity(5)) == 5);
}
