#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "persheaf/complex.hpp"

using namespace persheaf;

TEST_CASE("from_maximal face closure counts") {
    auto d2 = SimplicialComplex::from_maximal(3, {{0, 1, 2}});
    CHECK(d2.size() == 7);

    auto bd2 = SimplicialComplex::from_maximal(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(bd2.size() == 6);

    auto bd3 = sphere_complex(2);
    CHECK(bd3.size() == 14);  // 4 + 6 + 4

    CHECK_THROWS_AS(SimplicialComplex::from_maximal(3, {{1, 1}}), std::invalid_argument);
}

TEST_CASE("incidence sign convention") {
    CHECK(incidence({0, 1}, {1}) == 1);
    CHECK(incidence({0, 1}, {0}) == -1);
    CHECK(incidence({0, 1, 2}, {0}) == 0);
    CHECK(incidence({0, 1, 2}, {0, 2}) == -1);  // omits index 1
}

TEST_CASE("boundary matrices and simplicial homology") {
    auto d3 = simplex_complex(3);
    for (int r = 1; r <= 3; ++r) {
        auto prod = boundary_matrix(d3, r - 1);
        CHECK((boundary_matrix(d3, r - 1) * boundary_matrix(d3, r)).is_zero());
    }

    auto bd2 = sphere_complex(1);
    CHECK(rank(boundary_matrix(bd2, 1)) == 2);

    auto h = simplicial_homology(sphere_complex(2));
    CHECK(h[0] == 1);
    CHECK(h[1] == 0);
    CHECK(h[2] == 1);
}

TEST_CASE("builders") {
    CHECK_THROWS_AS(circle_complex(2), std::invalid_argument);

    auto sus = suspension(sphere_complex(1));
    auto h = simplicial_homology(sus);
    CHECK(h[0] == 1);
    CHECK(h[1] == 0);
    CHECK(h[2] == 1);

    auto t2 = torus(2);
    CHECK(t2.count(0) == 9);
    CHECK(t2.count(1) == 27);
    CHECK(t2.count(2) == 18);
    CHECK(t2.euler_characteristic() == 0);
    auto ht = simplicial_homology(t2);
    CHECK(ht[0] == 1);
    CHECK(ht[1] == 2);
    CHECK(ht[2] == 1);

    auto edge = simplex_complex(1);
    auto square = product(edge, edge);
    CHECK(square.count(0) == 4);
    CHECK(square.count(1) == 5);
    CHECK(square.count(2) == 2);
    CHECK(square.euler_characteristic() == 1);

    auto c = cone(sphere_complex(1));
    CHECK(c.vertex_count() == 4);
    CHECK(simplicial_homology(c)[0] == 1);
    CHECK(simplicial_homology(c)[1] == 0);
}

TEST_CASE("three torus homology") {
    auto t3 = torus(3);
    CHECK(t3.euler_characteristic() == 0);
    auto h = simplicial_homology(t3);
    CHECK(h[0] == 1);
    CHECK(h[1] == 3);
    CHECK(h[2] == 3);
    CHECK(h[3] == 1);
}

TEST_CASE("barycentric subdivision") {
    auto bs1 = barycentric(simplex_complex(1));
    CHECK(bs1.subdivided.count(0) == 3);
    CHECK(bs1.subdivided.count(1) == 2);

    auto bs2 = barycentric(simplex_complex(2));
    CHECK(bs2.subdivided.count(0) == 7);
    CHECK(bs2.subdivided.count(1) == 12);
    CHECK(bs2.subdivided.count(2) == 6);

    auto base = sphere_complex(2);
    auto bs3 = barycentric(base);
    CHECK(bs3.subdivided.euler_characteristic() == base.euler_characteristic());
    CHECK(bs3.subdivided.vertex_count() == base.size());

    // carriers are strictly increasing flags
    for (int id = 0; id < bs3.subdivided.size(); ++id) {
        const Simplex& flag = bs3.carrier(id);
        for (size_t i = 1; i < flag.size(); ++i) {
            CHECK(bs3.base.sdim(flag[i - 1]) < bs3.base.sdim(flag[i]));
            CHECK(bs3.base.face_leq(flag[i - 1], flag[i]));
        }
    }
}

TEST_CASE("dual cells") {
    auto k = simplex_complex(1);
    auto bs = barycentric(k);

    // maximal simplex: dual cell is just the barycenter
    auto dtop = dual_cell(bs, {0, 1});
    CHECK(dtop.size() == 1);
    CHECK(bs.subdivided.simplex(dtop[0]) == Simplex{k.id_of({0, 1})});

    // vertex 0 of the edge: half open edge, three subdivided simplices
    auto dv = dual_cell(bs, {0});
    CHECK(dv.size() == 3);

    // nesting D(tau) inside D(sigma) for sigma < tau
    auto big = sphere_complex(2);
    auto bsb = barycentric(big);
    auto dedge = dual_cell(bsb, {0, 1});
    auto dvert = dual_cell(bsb, {0});
    for (int id : dedge) CHECK(std::count(dvert.begin(), dvert.end(), id) == 1);

    // distinct simplices of equal dimension have disjoint open dual cells:
    // their flags through the respective barycenters are disjoint.
    auto da = dual_cell(bsb, {0, 2});
    std::vector<int> openb, opena;
    for (int id : dedge)
        if (bsb.carrier(id)[0] == bsb.base.id_of(Simplex{0, 1})) openb.push_back(id);
    for (int id : da)
        if (bsb.carrier(id)[0] == bsb.base.id_of(Simplex{0, 2})) opena.push_back(id);
    for (int id : openb) CHECK(std::count(opena.begin(), opena.end(), id) == 0);

    CHECK_THROWS_AS(dual_cell(bsb, {0, 1, 2, 3}), std::invalid_argument);
}

TEST_CASE("stars and links") {
    auto bd3 = sphere_complex(2);
    auto lk = link(bd3, {0});
    auto h = simplicial_homology(lk);
    CHECK(h[0] == 1);
    CHECK(h[1] == 1);  // circle

    auto cs = closed_star(bd3, {0});
    CHECK(simplicial_homology(cs)[0] == 1);

    // star of a maximal simplex is itself
    CHECK(open_star(bd3, {0, 1, 2}).size() == 1);

    // link of an interior edge of a surface: two points
    auto le = link(bd3, {0, 1});
    CHECK(le.size() == 2);
    CHECK(le.dim() == 0);

    CHECK_THROWS_AS(open_star(bd3, {0, 1, 2, 3}), std::invalid_argument);
}

TEST_CASE("simplicial maps") {
    auto d2 = simplex_complex(2);
    auto d1 = simplex_complex(1);
    SimplicialMap collapse(d2, d1, {0, 1, 1});
    CHECK(collapse.image({0, 1, 2}) == Simplex{0, 1});
    CHECK(collapse.image({1, 2}) == Simplex{1});

    CHECK_THROWS_AS(SimplicialMap(d2, d1, {0, 1}), std::invalid_argument);
}

TEST_CASE("euler characteristic matches homology") {
    for (const auto& k : {sphere_complex(2), torus(2), simplex_complex(3)}) {
        long chi = k.euler_characteristic();
        long chih = 0;
        for (auto [d, h] : simplicial_homology(k)) chih += (d % 2 == 0 ? 1 : -1) * h;
        CHECK(chi == chih);
    }
}
