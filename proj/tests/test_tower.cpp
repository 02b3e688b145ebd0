#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reflexa/rng.hpp"
#include "reflexa/tower.hpp"

using namespace reflexa;

namespace {

Tower forgetting_tower(const Field& f, std::size_t depth) {
    // K <- K^2 <- K^3 <- ... with projections forgetting the last coordinate
    Tower t;
    for (std::size_t n = 0; n <= depth; ++n) t.levels.emplace_back(f, n + 1);
    for (std::size_t n = 0; n < depth; ++n) {
        Matrix p(f, n + 1, n + 2);
        for (std::size_t i = 0; i <= n; ++i) p.at(i, i) = Scalar::one(f);
        t.maps.emplace_back(t.levels[n + 1], t.levels[n], p);
    }
    t.validate();
    return t;
}

}  // namespace

TEST_CASE("stabilization fixes already-surjective towers") {
    Field q = Field::rationals();
    Tower c = constant_tower(FinModule(q, 3), 4);
    CHECK(stabilized_images(c).tower.levels == c.levels);

    Tower fg = forgetting_tower(q, 4);
    StabilizedTower s = stabilized_images(fg);
    for (std::size_t n = 0; n < fg.levels.size(); ++n)
        CHECK(s.tower.levels[n].rank == fg.levels[n].rank);
}

TEST_CASE("a rank-1 map cuts all downstream levels to rank <= 1") {
    Field q = Field::rationals();
    Tower t;
    t.levels = {FinModule(q, 2), FinModule(q, 2), FinModule(q, 2)};
    Matrix low(q, 2, 2);
    low.at(0, 0) = Scalar::one(q);  // rank 1
    t.maps.emplace_back(t.levels[1], t.levels[0], Matrix::identity(q, 2));
    t.maps.emplace_back(t.levels[2], t.levels[1], low);
    t.validate();
    StabilizedTower s = stabilized_images(t);
    CHECK(s.tower.levels[0].rank <= 1);
    CHECK(s.tower.levels[1].rank <= 1);
    CHECK(tower_maps_surjective(s.tower));
    // idempotence
    CHECK(stabilized_images(s.tower).tower.levels == s.tower.levels);
}

TEST_CASE("product decomposition of the power-series tower has 1-dim pieces") {
    Field q = Field::rationals();
    Tower t = power_series_tower(q, 5).tower;
    ProductDecomposition d = product_decomposition(t);
    REQUIRE(d.pieces.size() == t.levels.size());
    CHECK(d.pieces[0].rank == 1);
    for (std::size_t n = 1; n < d.pieces.size(); ++n) CHECK(d.pieces[n].rank == 1);
}

TEST_CASE("product decomposition of a constant tower concentrates in degree 0") {
    Field q = Field::rationals();
    ProductDecomposition d = product_decomposition(constant_tower(FinModule(q, 3), 4));
    CHECK(d.pieces[0].rank == 3);
    for (std::size_t n = 1; n < d.pieces.size(); ++n) CHECK(d.pieces[n].rank == 0);
}

TEST_CASE("splittings conjugate tower maps to coordinate truncations") {
    for (Field f : {Field::rationals(), Field::gf(7)}) {
        Rng rng(suite_seed());
        for (int trial = 0; trial < 30; ++trial) {
            Tower t;
            std::size_t len = rng.index(4) + 2;
            for (std::size_t n = 0; n < len; ++n) t.levels.emplace_back(f, rng.index(4) + 1);
            for (std::size_t n = 0; n + 1 < len; ++n)
                t.maps.emplace_back(t.levels[n + 1], t.levels[n],
                                    rng.matrix(f, t.levels[n].rank, t.levels[n + 1].rank));
            Tower s = stabilized_images(t).tower;
            ProductDecomposition d = product_decomposition(s);
            std::size_t sum = 0;
            for (std::size_t k = 0; k < s.levels.size(); ++k) {
                sum += d.pieces[k].rank;
                CHECK(sum == s.levels[k].rank);
                if (k > 0)
                    CHECK(s.maps[k - 1].matrix * d.splittings[k] ==
                          d.splittings[k - 1] * truncation_matrix(d, k, f));
            }
        }
    }
}

TEST_CASE("dual tower maps are injective; reflexivity round-trips") {
    Field q = Field::rationals();
    Tower t = power_series_tower(q, 6).tower;
    DirectSystem d = dual_tower(t);
    for (const auto& m : d.maps) CHECK(kernel_basis(m.matrix).empty());
    CHECK(reflexivity_roundtrip(t));
    CHECK(reflexivity_roundtrip(constant_tower(FinModule(q, 2), 3)));
    CHECK(reflexivity_roundtrip(constant_tower(FinModule(q, 0), 3)));
}

TEST_CASE("kernel tower: zero functional returns the tower itself") {
    Field q = Field::rationals();
    Tower t = power_series_tower(q, 4).tower;
    std::vector<Vec> zero;
    for (const auto& l : t.levels) zero.emplace_back(l.rank, Scalar::zero(q));
    KernelTower k = kernel_tower(zero, t);
    CHECK(k.is_zero_functional);
    CHECK(k.kernel.levels == t.levels);
}

TEST_CASE("kernel tower: identity on the constant K tower gives the zero tower") {
    Field q = Field::rationals();
    Tower t = constant_tower(FinModule(q, 1), 3);
    std::vector<Vec> id(t.levels.size(), Vec{Scalar::one(q)});
    KernelTower k = kernel_tower(id, t);
    REQUIRE(k.pivot.has_value());
    for (const auto& l : k.kernel.levels) CHECK(l.rank == 0);
}

TEST_CASE("kernel tower of the constant-term evaluation is a shifted power series") {
    for (Field f : {Field::rationals(), Field::gf(7)}) {
        Tower t = power_series_tower(f, 6).tower;
        std::vector<Vec> fs;
        for (const auto& l : t.levels) {
            Vec v(l.rank, Scalar::zero(f));
            v[0] = Scalar::one(f);
            fs.push_back(std::move(v));
        }
        KernelTower k = kernel_tower(fs, t);
        REQUIRE(k.pivot.has_value());
        for (std::size_t n = 0; n < t.levels.size(); ++n) {
            CHECK(k.kernel.levels[n].rank + 1 == t.levels[n].rank);
            // explicit basis: the kernel of "coefficient of 1" is x, x^2, ...
            for (std::size_t c = 0; c < k.kernel_bases[n].cols(); ++c)
                CHECK(k.kernel_bases[n].at(0, c).is_zero());
        }
    }
}

TEST_CASE("kernel tower rejects functionals incompatible with the maps") {
    Field q = Field::rationals();
    Tower t = power_series_tower(q, 3).tower;
    std::vector<Vec> fs;
    for (const auto& l : t.levels) fs.emplace_back(l.rank, Scalar::zero(q));
    fs[0][0] = Scalar::one(q);  // nonzero at the bottom only
    CHECK_THROWS_AS(kernel_tower(fs, t), std::invalid_argument);
}

TEST_CASE("completed tensor of power-series towers has square level dims") {
    Field q = Field::rationals();
    AlgebraTower a = power_series_tower(q, 3);
    AlgebraTower c = completed_tensor(a, a);
    for (std::size_t n = 0; n < c.tower.levels.size(); ++n)
        CHECK(c.tower.levels[n].rank == (n + 1) * (n + 1));
    // K (x) t = t up to the index bookkeeping
    AlgebraTower k;
    for (std::size_t n = 0; n <= 3; ++n) {
        k.algebras.push_back(field_algebra(q));
        k.tower.levels.push_back(k.algebras.back().module);
    }
    for (std::size_t n = 0; n < 3; ++n)
        k.tower.maps.emplace_back(k.tower.levels[n + 1], k.tower.levels[n],
                                  Matrix::identity(q, 1));
    AlgebraTower kt = completed_tensor(k, a);
    for (std::size_t n = 0; n < kt.tower.levels.size(); ++n)
        CHECK(kt.tower.levels[n].rank == a.tower.levels[n].rank);
}

TEST_CASE("truncated power-series arithmetic") {
    Field q = Field::rationals();
    Vec one_minus_x(5, Scalar::zero(q));
    one_minus_x[0] = Scalar::one(q);
    one_minus_x[1] = -Scalar::one(q);
    Vec inv = ps_invert(one_minus_x, q);
    for (const auto& c : inv) CHECK(c.is_one());

    Vec a(3, Scalar::zero(q)), b(3, Scalar::zero(q));
    a[0] = Scalar::one(q);
    a[1] = Scalar::one(q);
    b[0] = Scalar::one(q);
    b[1] = -Scalar::one(q);
    Vec p = ps_mul(a, b, q);
    CHECK(p[0].is_one());
    CHECK(p[1].is_zero());
    CHECK(p[2] == -Scalar::one(q));

    Vec u(6, Scalar::zero(q));
    u[0] = Scalar::one(q);
    u[1] = Scalar::one(q);
    u[2] = Scalar::one(q);
    CHECK(ps_mul(u, ps_invert(u, q), q) == unit_vec(q, 6, 0));

    Vec nonunit(3, Scalar::zero(q));
    CHECK_THROWS_AS(ps_invert(nonunit, q), std::domain_error);
}
