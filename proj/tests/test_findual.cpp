#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reflexa/finite_dual.hpp"
#include "reflexa/rng.hpp"

using namespace reflexa;

namespace {

/// Independent minimal-recurrence oracle: brute-force Hankel solve over every
/// admissible window, smallest degree whose recurrence holds on all terms.
std::optional<std::size_t> oracle_min_degree(const std::vector<Scalar>& terms,
                                             std::size_t max_degree, const Field& f) {
    for (std::size_t e = 1; e <= max_degree; ++e) {
        if (terms.size() < e + 1) break;
        const std::size_t rows = terms.size() - e;
        Matrix m(f, rows, e);
        Vec rhs(rows, Scalar::zero(f));
        for (std::size_t n = 0; n < rows; ++n) {
            for (std::size_t i = 0; i < e; ++i) m.at(n, i) = terms[n + i];
            rhs[n] = -terms[n + e];
        }
        if (solve(m, rhs)) return e;
    }
    return std::nullopt;
}

}  // namespace

TEST_CASE("Fibonacci functional: lambda(x^10) = 55") {
    Field q = Field::rationals();
    RecursiveFunctional fib = fibonacci_functional(FunctionalModel::grouplike, q);
    CHECK(evaluate(fib, 10) == Scalar(q, 55));
    auto prefix = functional_prefix(fib, 7);
    Vec expected = {Scalar(q, 0), Scalar(q, 1), Scalar(q, 1), Scalar(q, 2),
                    Scalar(q, 3), Scalar(q, 5), Scalar(q, 8)};
    CHECK(prefix == expected);
}

TEST_CASE("grouplike product of geometric functionals is geometric at the product ratio") {
    Field q = Field::rationals();
    Scalar r(q, 3), s = Scalar::parse("-2/5", q);
    auto p = multiply(geometric(r, FunctionalModel::grouplike),
                      geometric(s, FunctionalModel::grouplike));
    CHECK(functionals_equal(p, geometric(r * s, FunctionalModel::grouplike)));
    CHECK(p.annihilator == std::vector<Scalar>{-(r * s), Scalar::one(q)});
}

TEST_CASE("primitive ones * ones = 2^n, annihilator x - 2") {
    Field q = Field::rationals();
    RecursiveFunctional ones = geometric(Scalar::one(q), FunctionalModel::primitive);
    auto p = multiply(ones, ones);
    CHECK(p.annihilator == std::vector<Scalar>{Scalar(q, -2), Scalar::one(q)});
    CHECK(evaluate(p, 6) == Scalar(q, 64));
}

TEST_CASE("sum of ones and geometric(2): annihilator (x-1)(x-2), values [2,3]") {
    Field q = Field::rationals();
    auto s = add(geometric(Scalar::one(q), FunctionalModel::grouplike),
                 geometric(Scalar(q, 2), FunctionalModel::grouplike));
    CHECK(s.annihilator ==
          std::vector<Scalar>{Scalar(q, 2), Scalar(q, -3), Scalar::one(q)});
    CHECK(s.values == Vec{Scalar(q, 2), Scalar(q, 3)});
}

TEST_CASE("Fibonacci squared satisfies a degree-3 recurrence, matching the oracle") {
    Field q = Field::rationals();
    RecursiveFunctional fib = fibonacci_functional(FunctionalModel::grouplike, q);
    auto p = multiply(fib, fib);
    CHECK(p.degree() <= 4);
    auto terms = functional_prefix(p, 20);
    auto od = oracle_min_degree(terms, 4, q);
    REQUIRE(od.has_value());
    CHECK(*od == 3);
    CHECK(p.degree() == 3);
    // values agree with the termwise squares
    auto ft = functional_prefix(fib, 20);
    for (std::size_t n = 0; n < 20; ++n) CHECK(terms[n] == ft[n] * ft[n]);
}

TEST_CASE("multiply never exceeds the d1*d2 degree bound on random products") {
    for (Field f : {Field::rationals(), Field::gf(7)}) {
        Rng rng(suite_seed());
        for (int t = 0; t < 60; ++t) {
            for (FunctionalModel model :
                 {FunctionalModel::grouplike, FunctionalModel::primitive}) {
                std::size_t d1 = rng.index(3) + 1, d2 = rng.index(3) + 1;
                RecursiveFunctional a{model, f, {}, {}};
                RecursiveFunctional b{model, f, {}, {}};
                a.annihilator = rng.vector(f, d1, -3, 3);
                a.annihilator.push_back(Scalar::one(f));
                a.values = rng.vector(f, d1, -3, 3);
                b.annihilator = rng.vector(f, d2, -3, 3);
                b.annihilator.push_back(Scalar::one(f));
                b.values = rng.vector(f, d2, -3, 3);
                auto p = multiply(a, b);
                CHECK(p.degree() <= d1 * d2);
            }
        }
    }
}

TEST_CASE("minimize: ones presented with annihilator (x-1)^2 reduces to x-1") {
    Field q = Field::rationals();
    RecursiveFunctional r{FunctionalModel::grouplike, q,
                          {Scalar(q, 1), Scalar(q, -2), Scalar(q, 1)},
                          {Scalar(q, 1), Scalar(q, 1)}};
    auto m = minimize(r);
    CHECK(m.annihilator == std::vector<Scalar>{Scalar(q, -1), Scalar::one(q)});
    CHECK(m.values == Vec{Scalar::one(q)});
    // already-minimal input unchanged
    auto m2 = minimize(m);
    CHECK(m2.annihilator == m.annihilator);
    CHECK(m2.values == m.values);
}

TEST_CASE("zero functional normalizes to annihilator x, values [0]") {
    Field q = Field::rationals();
    RecursiveFunctional z{FunctionalModel::grouplike, q,
                          {Scalar(q, 5), Scalar(q, 2), Scalar::one(q)},
                          {Scalar::zero(q), Scalar::zero(q)}};
    auto m = minimize(z);
    CHECK(m.annihilator == std::vector<Scalar>{Scalar::zero(q), Scalar::one(q)});
    CHECK(m.values == Vec{Scalar::zero(q)});
}

TEST_CASE("from_prefix recovers the Fibonacci recurrence from [0,1,1,2,3,5,8]") {
    Field q = Field::rationals();
    Vec prefix = {Scalar(q, 0), Scalar(q, 1), Scalar(q, 1), Scalar(q, 2),
                  Scalar(q, 3), Scalar(q, 5), Scalar(q, 8)};
    auto r = from_prefix(prefix, 4, FunctionalModel::grouplike, q);
    REQUIRE(r.has_value());
    CHECK(r->annihilator ==
          std::vector<Scalar>{Scalar(q, -1), Scalar(q, -1), Scalar::one(q)});
}

TEST_CASE("from_prefix: factorials admit no recurrence of degree <= 3") {
    Field q = Field::rationals();
    Vec fact = {Scalar(q, 1), Scalar(q, 1), Scalar(q, 2),  Scalar(q, 6),
                Scalar(q, 24), Scalar(q, 120), Scalar(q, 720), Scalar(q, 5040)};
    CHECK_FALSE(from_prefix(fact, 3, FunctionalModel::grouplike, q).has_value());
}

TEST_CASE("model units are neutral for multiplication over 20 terms") {
    Field q = Field::rationals();
    for (FunctionalModel model : {FunctionalModel::grouplike, FunctionalModel::primitive}) {
        RecursiveFunctional unit = model_unit(model, q);
        RecursiveFunctional fib = fibonacci_functional(model, q);
        auto p = multiply(fib, unit);
        CHECK(functional_prefix(p, 20) == functional_prefix(fib, 20));
    }
}

TEST_CASE("model mismatch is rejected") {
    Field q = Field::rationals();
    CHECK_THROWS_AS(multiply(model_unit(FunctionalModel::grouplike, q),
                             model_unit(FunctionalModel::primitive, q)),
                    std::invalid_argument);
}
