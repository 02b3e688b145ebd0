#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reflexa/bialgebra.hpp"

using namespace reflexa;

TEST_CASE("group table validation rejects broken tables") {
    CHECK_NOTHROW(validate_group_table(cyclic_group_table(4)));
    CHECK_NOTHROW(validate_group_table(klein_four_table()));
    CHECK_NOTHROW(validate_group_table(symmetric3_table()));
    // 0 must be the identity
    std::vector<std::vector<std::size_t>> bad = {{1, 0}, {0, 1}};
    CHECK_THROWS_AS(validate_group_table(bad), std::invalid_argument);
    // non-associative magma
    std::vector<std::vector<std::size_t>> mag = {{0, 1, 2}, {1, 2, 2}, {2, 0, 1}};
    CHECK_THROWS_AS(validate_group_table(mag), std::invalid_argument);
}

TEST_CASE("group and function bialgebras validate for all fixtures") {
    for (Field f : {Field::rationals(), Field::gf(7)}) {
        for (const auto& table : {cyclic_group_table(1), cyclic_group_table(2),
                                  cyclic_group_table(3), klein_four_table(),
                                  symmetric3_table()}) {
            CHECK_NOTHROW(group_bialgebra(table, f));
            CHECK_NOTHROW(function_bialgebra(table, f));
        }
    }
}

TEST_CASE("dual of the group bialgebra is the function bialgebra on the nose") {
    Field q = Field::rationals();
    for (const auto& table :
         {cyclic_group_table(2), cyclic_group_table(3), klein_four_table(),
          symmetric3_table()}) {
        FinBialgebra d = dual_bialgebra(group_bialgebra(table, q));
        FinBialgebra fn = function_bialgebra(table, q);
        CHECK(d.algebra.mult == fn.algebra.mult);
        CHECK(d.algebra.unit == fn.algebra.unit);
        CHECK(d.coalgebra.counit == fn.coalgebra.counit);
        CHECK(d.coalgebra.comult_matrix() == fn.coalgebra.comult_matrix());
    }
}

TEST_CASE("double dual is isomorphic to the original") {
    for (Field f : {Field::rationals(), Field::gf(7)}) {
        for (const auto& table :
             {cyclic_group_table(1), cyclic_group_table(2), cyclic_group_table(3),
              klein_four_table(), symmetric3_table()}) {
            for (bool fn : {false, true}) {
                FinBialgebra b = fn ? function_bialgebra(table, f)
                                    : group_bialgebra(table, f);
                CHECK(bialgebra_isomorphic(dual_bialgebra(dual_bialgebra(b)), b).has_value());
            }
        }
    }
}

TEST_CASE("grouplike elements of a group bialgebra are the group elements") {
    Field q = Field::rationals();
    for (const auto& table : {cyclic_group_table(2), klein_four_table(),
                              symmetric3_table()}) {
        FinBialgebra b = group_bialgebra(table, q);
        auto gs = grouplike_elements(b);
        CHECK(gs.size() == table.size());
        for (const auto& g : gs) {
            // each grouplike is a standard basis vector
            std::size_t nonzero = 0;
            for (const auto& c : g) {
                if (!c.is_zero()) {
                    ++nonzero;
                    CHECK(c.is_one());
                }
            }
            CHECK(nonzero == 1);
        }
    }
}

TEST_CASE("grouplikes of the function bialgebra count characters") {
    Field q = Field::rationals();
    // over Q, K^G grouplikes = algebra morphisms K[G] -> Q = rational characters
    CHECK(grouplike_elements(function_bialgebra(cyclic_group_table(2), q)).size() == 2);
    CHECK(grouplike_elements(function_bialgebra(cyclic_group_table(3), q)).size() == 1);
    CHECK(grouplike_elements(function_bialgebra(klein_four_table(), q)).size() == 4);
    CHECK(grouplike_elements(function_bialgebra(symmetric3_table(), q)).size() == 2);
    // over GF(7) the cube roots of unity exist
    CHECK(grouplike_elements(function_bialgebra(cyclic_group_table(3), Field::gf(7))).size() ==
          3);
}

TEST_CASE("transpose of a verified morphism is verified, double transpose recovers it") {
    Field q = Field::rationals();
    for (const auto& table : {cyclic_group_table(2), klein_four_table()}) {
        FinBialgebra kg = group_bialgebra(table, q);
        FinBialgebra kgd = dual_bialgebra(kg);
        // identity K[G] -> (K^G)* is a bialgebra morphism
        Matrix id = Matrix::identity(q, kg.dim());
        Matrix t = transpose_bialgebra_morphism(kg, kgd, id);
        CHECK(is_bialgebra_morphism(kgd, dual_bialgebra(kg), t));
        Matrix tt = transpose_bialgebra_morphism(kgd, kg, t);
        CHECK(tt == id);
    }
}

TEST_CASE("bialgebra morphism validation rejects non-morphisms") {
    Field q = Field::rationals();
    FinBialgebra z2 = group_bialgebra(cyclic_group_table(2), q);
    Matrix swap(q, 2, 2);
    swap.at(0, 1) = Scalar::one(q);
    swap.at(1, 0) = Scalar::one(q);
    // swapping e and g does preserve the structure (group automorphism of Z2
    // only when it fixes the identity; the swap does not preserve the unit)
    CHECK_FALSE(is_bialgebra_morphism(z2, z2, swap));
    CHECK(is_bialgebra_morphism(z2, z2, Matrix::identity(q, 2)));
}
