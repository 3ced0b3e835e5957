#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "persheaf/laurent.hpp"
#include "persheaf/sparse.hpp"

using namespace persheaf;

namespace {

SparseMatrix random_sparse(std::mt19937_64& rng, int rows, int cols, double density) {
    SparseMatrix m(rows, cols);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> val(-4, 4);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (coin(rng) < density) m.set(i, j, rational(val(rng)));
    return m;
}

}  // namespace

TEST_CASE("rank on pinned examples") {
    CHECK(rank(SparseMatrix::identity(2)) == 2);                    // 2x2 identity
    CHECK(rank(SparseMatrix(3, 4)) == 0);                           // zero map
    SparseMatrix m = SparseMatrix::from_dense({{rational(1), rational(2)},
                                               {rational(2), rational(4)}});
    CHECK(rank(m) == 1);                                            // hand elimination
}

TEST_CASE("kernel basis on pinned examples") {
    CHECK(kernel_basis(SparseMatrix::identity(3)).empty());
    CHECK(kernel_basis(SparseMatrix(1, 3)).size() == 3);

    SparseMatrix m = SparseMatrix::from_dense({{rational(1), rational(1)}});
    auto ker = kernel_basis(m);
    REQUIRE(ker.size() == 1);
    // (1, -1) up to scale
    CHECK(ker[0][0] == -ker[0][1]);
    CHECK(ker[0][0] != 0);
}

TEST_CASE("kernel vectors are annihilated exactly and sized by rank") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        SparseMatrix m = random_sparse(rng, 12, 17, 0.25);
        int r = rank(m);
        auto ker = kernel_basis(m);
        CHECK(static_cast<int>(ker.size()) == m.cols() - r);
        for (const auto& v : ker) {
            auto y = m.apply(v);
            for (const auto& e : y) CHECK(e == 0);
        }
    }
}

TEST_CASE("rank equals rank of transpose, and parallel kernel matches serial") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 8; ++trial) {
        SparseMatrix m = random_sparse(rng, 20, 20, 0.2);
        int r = rank(m);
        CHECK(r == rank(m.transpose()));
        CHECK(r == rank_serial(m));
    }
}

TEST_CASE("solve and quotient maps") {
    std::mt19937_64 rng(3);
    SparseMatrix m = random_sparse(rng, 9, 6, 0.4);
    std::vector<Rational> x(6);
    for (auto& v : x) v = rational(std::uniform_int_distribution<int>(-3, 3)(rng));
    auto b = m.apply(x);
    auto sol = solve(m, b);
    REQUIRE(sol.has_value());
    auto b2 = m.apply(*sol);
    CHECK(b2 == b);

    QuotientMap qm = quotient_map(m);
    CHECK(qm.q.rows() == 9 - rank(m));
    CHECK((qm.q * qm.p) == SparseMatrix::identity(qm.q.rows()));
    CHECK((qm.q * m).is_zero());
}

TEST_CASE("graded complex homology") {
    // 0 -> Q -> 0 in degree 0
    GradedComplex one(0, {1});
    CHECK(one.homology()[0] == 1);

    // 0 -> Q --1--> Q -> 0
    GradedComplex iso(0, {1, 1});
    iso.set_differential(0, SparseMatrix::identity(1));
    auto h = iso.homology();
    CHECK(h[0] == 0);
    CHECK(h[1] == 0);

    // cochain complex of the boundary of a triangle with constant coefficients
    // C^0 = Q^3 -> C^1 = Q^3, delta = transpose of the boundary matrix
    GradedComplex circle(0, {3, 3});
    SparseMatrix d(3, 3);
    // edges 01, 02, 12 against vertices 0, 1, 2
    d.set(0, 0, -1); d.set(0, 1, 1);
    d.set(1, 0, -1); d.set(1, 2, 1);
    d.set(2, 1, -1); d.set(2, 2, 1);
    circle.set_differential(0, d);
    circle.validate();
    auto hc = circle.homology();
    CHECK(hc[0] == 1);
    CHECK(hc[1] == 1);
}

TEST_CASE("euler characteristic of a complex equals that of its cohomology") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 6; ++trial) {
        // build a random 3-term complex: A --f--> B --g--> C with g f = 0,
        // by factoring g through the cokernel-ish structure: pick g first,
        // then f with image inside ker g.
        SparseMatrix g = random_sparse(rng, 5, 8, 0.3);
        auto kb = kernel_basis(g);
        SparseMatrix f(8, static_cast<int>(kb.size()));
        for (size_t j = 0; j < kb.size(); ++j)
            for (int i = 0; i < 8; ++i)
                if (kb[j][i] != 0) f.set(i, static_cast<int>(j), kb[j][i]);
        GradedComplex c(0, {f.cols(), 8, 5});
        c.set_differential(0, f);
        c.set_differential(1, g);
        c.validate();
        long chi_dims = c.euler_characteristic();
        long chi_h = 0;
        for (auto [r, hr] : c.homology()) chi_h += (r % 2 == 0 ? 1 : -1) * hr;
        CHECK(chi_dims == chi_h);
    }
}

TEST_CASE("complex violating d d = 0 is rejected") {
    GradedComplex bad(0, {1, 1, 1});
    bad.set_differential(0, SparseMatrix::identity(1));
    bad.set_differential(1, SparseMatrix::identity(1));
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("laurent polynomial arithmetic") {
    Laurent v = Laurent::monomial(1, 1);
    Laurent q = v * v;
    Laurent p = q + Laurent(Integer(1));            // 1 + q
    CHECK(p.str("v") == "1 + v^2");
    CHECK(p.inverted().str("v") == "v^-2 + 1");
    CHECK((p * p).coeff(2) == 2);
    CHECK(p.truncated(1).str("v") == "1");
    CHECK(p.eval_one() == 2);
    Laurent t2 = Laurent::monomial(1, 2);
    // substitute x -> t^2 into 1 + x gives 1 + t^2
    CHECK(p.substitute(t2).coeff(4) == 1);
}
