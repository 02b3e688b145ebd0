#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reflexa/matrix.hpp"
#include "reflexa/rng.hpp"

using namespace reflexa;

namespace {

Matrix mk(const Field& f, std::size_t rows, std::size_t cols,
          std::initializer_list<long> entries) {
    Matrix m(f, rows, cols);
    auto it = entries.begin();
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = Scalar(f, *it++);
    return m;
}

}  // namespace

TEST_CASE("scalar arithmetic is exact over Q") {
    Field q = Field::rationals();
    Scalar a = Scalar::parse("2/3", q);
    Scalar b = Scalar::parse("-5/7", q);
    CHECK((a + b).str() == "-1/21");
    CHECK((a * b).str() == "-10/21");
    CHECK((a - a).is_zero());
    CHECK((a * a.inverse()).is_one());
}

TEST_CASE("scalar arithmetic over GF(7)") {
    Field g = Field::gf(7);
    Scalar a(g, 3), b(g, 5);
    CHECK((a + b).str() == "1 mod 7");
    CHECK((a * b).str() == "1 mod 7");
    CHECK((a.inverse() * a).is_one());
    CHECK((-a).str() == "4 mod 7");
}

TEST_CASE("rref: identity is a fixed point") {
    Field q = Field::rationals();
    Matrix id = Matrix::identity(q, 2);
    auto [r, p] = rref(id);
    CHECK(r == id);
    CHECK(p == std::vector<std::size_t>{0, 1});
}

TEST_CASE("rref: rank-1 matrix over Q") {
    Field q = Field::rationals();
    auto [r, p] = rref(mk(q, 2, 2, {1, 2, 2, 4}));
    CHECK(r == mk(q, 2, 2, {1, 2, 0, 0}));
    CHECK(p == std::vector<std::size_t>{0});
}

TEST_CASE("rref: 2x2 elimination over GF(2), oracle done by hand") {
    // [[1,1],[1,0]]: r2 += r1 -> [[1,1],[0,1]]; r1 += r2 -> [[1,0],[0,1]].
    Field g = Field::gf(2);
    auto [r, p] = rref(mk(g, 2, 2, {1, 1, 1, 0}));
    CHECK(r == Matrix::identity(g, 2));
    CHECK(p == std::vector<std::size_t>{0, 1});
}

TEST_CASE("rref is idempotent and rank-nullity holds on random matrices") {
    for (Field f : {Field::rationals(), Field::gf(7)}) {
        Rng rng(suite_seed());
        for (int t = 0; t < 60; ++t) {
            std::size_t rows = rng.index(6) + 1, cols = rng.index(6) + 1;
            Matrix m = rng.matrix(f, rows, cols, -4, 4);
            auto [r, p] = rref(m);
            CHECK(rref(r).first == r);
            CHECK(p.size() + kernel_basis(m).size() == cols);
            for (const auto& k : kernel_basis(m)) CHECK(vec_is_zero(m.apply(k)));
        }
    }
}

TEST_CASE("solve reproduces the right-hand side with exact equality") {
    for (Field f : {Field::rationals(), Field::gf(5)}) {
        Rng rng(suite_seed());
        for (int t = 0; t < 40; ++t) {
            std::size_t rows = rng.index(5) + 1, cols = rng.index(5) + 1;
            Matrix m = rng.matrix(f, rows, cols);
            Vec x = rng.vector(f, cols);
            Vec b = m.apply(x);
            auto s = solve(m, b);
            REQUIRE(s.has_value());
            CHECK(m.apply(*s) == b);
        }
    }
}

TEST_CASE("solve detects inconsistent systems") {
    Field q = Field::rationals();
    Matrix m = mk(q, 2, 1, {1, 2});
    CHECK_FALSE(solve(m, {Scalar(q, 1), Scalar(q, 1)}).has_value());
}

TEST_CASE("kron follows the i*rank+j index convention and is associative") {
    Field g = Field::gf(5);
    Rng rng(suite_seed());
    Matrix a = rng.matrix(g, 2, 3), b = rng.matrix(g, 3, 2), c = rng.matrix(g, 2, 2);
    Matrix k = kron(a, b);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t s = 0; s < 3; ++s)
                for (std::size_t t = 0; t < 2; ++t)
                    CHECK(k.at(i * 3 + s, j * 2 + t) == a.at(i, j) * b.at(s, t));
    CHECK(kron(kron(a, b), c) == kron(a, kron(b, c)));
    Vec x = rng.vector(g, 3), y = rng.vector(g, 2);
    CHECK(kron(a, b).apply(kron_vec(x, y, g)) == kron_vec(a.apply(x), b.apply(y), g));
}

TEST_CASE("image basis examples") {
    Field q = Field::rationals();
    CHECK(image_basis(Matrix::identity(q, 3)).size() == 3);
    CHECK(image_basis(Matrix(q, 2, 2)).empty());
    auto im = image_basis(mk(q, 2, 2, {1, 2, 2, 4}));
    REQUIRE(im.size() == 1);
    CHECK(in_span(Matrix::from_columns(q, 2, im), {Scalar(q, 1), Scalar(q, 2)}));
}

TEST_CASE("intersect_subspaces with membership verified both ways") {
    Field q = Field::rationals();
    Matrix e1 = Matrix::from_columns(q, 2, {unit_vec(q, 2, 0)});
    Matrix e2 = Matrix::from_columns(q, 2, {unit_vec(q, 2, 1)});
    CHECK(intersect_subspaces({e1, e2}).empty());
    CHECK(intersect_subspaces({e1, e1}).size() == 1);

    Rng rng(suite_seed());
    Matrix a = rng.matrix(q, 4, 2), b = rng.matrix(q, 4, 3);
    auto meet = intersect_subspaces({a, b});
    for (const auto& v : meet) {
        CHECK(in_span(a, v));
        CHECK(in_span(b, v));
    }
}

TEST_CASE("sparse eliminator agrees with the dense kernel") {
    for (Field f : {Field::rationals(), Field::gf(7)}) {
        Rng rng(suite_seed());
        for (int t = 0; t < 20; ++t) {
            std::size_t rows = rng.index(5) + 1, cols = rng.index(5) + 1;
            Matrix m = rng.matrix(f, rows, cols);
            SparseEliminator elim(f, cols);
            for (std::size_t i = 0; i < rows; ++i) {
                SparseRow r;
                for (std::size_t j = 0; j < cols; ++j)
                    if (!m.at(i, j).is_zero()) r.push_back({j, m.at(i, j)});
                elim.add_row(r);
            }
            CHECK(elim.rank() == rank(m));
            auto ker = elim.kernel();
            CHECK(ker.size() == kernel_basis(m).size());
            for (const auto& k : ker) CHECK(vec_is_zero(m.apply(k)));
        }
    }
}
