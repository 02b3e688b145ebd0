#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reflexa/module.hpp"
#include "reflexa/rng.hpp"

using namespace reflexa;

TEST_CASE("double dual is the identity on modules and units are identities") {
    for (Field f : {Field::rationals(), Field::gf(7)}) {
        for (std::size_t r = 0; r <= 8; ++r) {
            FinModule m(f, r);
            CHECK(dual_module(dual_module(m)) == m);
            CHECK(double_dual_unit(m).matrix == Matrix::identity(f, r));
        }
    }
}

TEST_CASE("double dual naturality: f** = f through the identity units") {
    for (Field f : {Field::rationals(), Field::gf(7)}) {
        Rng rng(suite_seed());
        for (int t = 0; t < 100; ++t) {
            std::size_t a = rng.index(8) + 1, b = rng.index(8) + 1;
            FinModule m(f, a), n(f, b);
            LinearMap g(m, n, rng.matrix(f, b, a));
            LinearMap gdd = dual_map(dual_map(g));
            CHECK(gdd.matrix == g.matrix);
            // naturality square: unit_N . g = g** . unit_M
            CHECK(double_dual_unit(n).matrix * g.matrix ==
                  gdd.matrix * double_dual_unit(m).matrix);
        }
    }
}

TEST_CASE("dual of a map is the transpose") {
    Field q = Field::rationals();
    Rng rng(suite_seed());
    Matrix m = rng.matrix(q, 3, 2);
    LinearMap f(FinModule(q, 2), FinModule(q, 3), m);
    CHECK(dual_map(f).matrix == m.transpose());
}

TEST_CASE("tensor and hom ranks multiply") {
    Field q = Field::rationals();
    FinModule a(q, 2), b(q, 3);
    CHECK(tensor(a, b).rank == 6);
    CHECK(hom_module(a, b).rank == 6);
}

TEST_CASE("tensor_map acts as the Kronecker product on simple tensors") {
    Field g = Field::gf(5);
    Rng rng(suite_seed());
    FinModule a(g, 2), b(g, 3);
    LinearMap fa(a, a, rng.matrix(g, 2, 2));
    LinearMap fb(b, b, rng.matrix(g, 3, 3));
    Vec x = rng.vector(g, 2), y = rng.vector(g, 3);
    CHECK(tensor_map(fa, fb).matrix.apply(kron_vec(x, y, g)) ==
          kron_vec(fa.matrix.apply(x), fb.matrix.apply(y), g));
}

TEST_CASE("tensor_to_hom and hom_to_tensor are mutually inverse") {
    Field q = Field::rationals();
    FinModule a(q, 3), b(q, 2);
    LinearMap th = tensor_to_hom(a, b);
    LinearMap ht = hom_to_tensor(a, b);
    CHECK(th.matrix * ht.matrix == Matrix::identity(q, 6));
    CHECK(ht.matrix * th.matrix == Matrix::identity(q, 6));
}

TEST_CASE("evaluation after coevaluation is multiplication by the rank") {
    // The composite M -> M (x) M* (x) M -> M of coevaluation and evaluation
    // (zigzag with this index convention) scales by rank(M) on the trace side:
    // ev . coev : K -> K is multiplication by rank(M).
    Field q = Field::rationals();
    for (std::size_t r = 1; r <= 4; ++r) {
        FinModule m(q, r);
        Matrix comp = evaluation_map(m).matrix * coevaluation_map(m).matrix;
        CHECK(comp.rows() == 1);
        CHECK(comp.cols() == 1);
        CHECK(comp.at(0, 0) == Scalar(q, static_cast<long>(r)));
    }
}
