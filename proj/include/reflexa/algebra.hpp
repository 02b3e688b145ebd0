#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "reflexa/module.hpp"

namespace reflexa {

/// Finite-dimensional commutative algebra by structure constants.
/// mult is the linear map S (x) S -> S, column index i*dim+j = e_i (x) e_j.
struct TestAlgebra {
    FinModule module;
    Matrix mult;  // dim x dim^2
    Vec unit;

    TestAlgebra() = default;
    TestAlgebra(FinModule mod, Matrix m, Vec u)
        : module(std::move(mod)), mult(std::move(m)), unit(std::move(u)) {
        validate();
    }

    std::size_t dim() const { return module.rank; }
    const Field& field() const { return module.field; }

    /// Matrix of left multiplication by the element x.
    Matrix left_mult(const Vec& x) const {
        const std::size_t n = dim();
        Matrix l(field(), n, n);
        for (std::size_t j = 0; j < n; ++j) {
            Vec col = mult.apply(kron_vec(x, unit_vec(field(), n, j), field()));
            for (std::size_t i = 0; i < n; ++i) l.at(i, j) = col[i];
        }
        return l;
    }

    Vec product(const Vec& x, const Vec& y) const {
        return mult.apply(kron_vec(x, y, field()));
    }

    void validate() const {
        const std::size_t n = dim();
        if (mult.rows() != n || mult.cols() != n * n)
            throw std::invalid_argument("algebra: bad mult shape");
        if (unit.size() != n) throw std::invalid_argument("algebra: bad unit size");
        Matrix id = Matrix::identity(field(), n);
        // associativity: mult.(mult (x) id) = mult.(id (x) mult) on S (x) S (x) S
        if (mult * kron(mult, id) != mult * kron(id, mult))
            throw std::invalid_argument("algebra: multiplication is not associative");
        // commutativity
        Matrix swap(field(), n * n, n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                swap.at(i * n + j, j * n + i) = Scalar::one(field());
        if (mult * swap != mult)
            throw std::invalid_argument("algebra: multiplication is not commutative");
        // unit law
        Matrix u = Matrix::from_columns(field(), n, {unit});
        if (mult * kron(u, id) != id)
            throw std::invalid_argument("algebra: unit law fails");
    }

    bool operator==(const TestAlgebra& o) const {
        return module == o.module && mult == o.mult && unit == o.unit;
    }
};

struct AlgebraMorphism {
    LinearMap map;  // source algebra -> target algebra

    AlgebraMorphism() = default;
    AlgebraMorphism(const TestAlgebra& src, const TestAlgebra& dst, Matrix m)
        : map(src.module, dst.module, std::move(m)) {
        // multiplicativity: map . mult_src = mult_dst . (map (x) map)
        if (map.matrix * src.mult != dst.mult * kron(map.matrix, map.matrix))
            throw std::invalid_argument("algebra morphism: not multiplicative");
        if (map.matrix.apply(src.unit) != dst.unit)
            throw std::invalid_argument("algebra morphism: unit not preserved");
    }
};

// ---------------------------------------------------------------------------
// Stock algebras.
// ---------------------------------------------------------------------------

/// The base field K as a 1-dimensional algebra.
inline TestAlgebra field_algebra(const Field& f) {
    Matrix m(f, 1, 1);
    m.at(0, 0) = Scalar::one(f);
    return TestAlgebra(FinModule(f, 1, "K"), m, {Scalar::one(f)});
}

/// K[x]/(x^dim), basis 1, x, ..., x^(dim-1).
inline TestAlgebra truncated_polynomial_algebra(const Field& f, std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("truncated polynomial algebra needs dim >= 1");
    Matrix m(f, dim, dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            if (i + j < dim) m.at(i + j, i * dim + j) = Scalar::one(f);
    Vec u = unit_vec(f, dim, 0);
    return TestAlgebra(FinModule(f, dim, "K[x]/(x^" + std::to_string(dim) + ")"), m, u);
}

/// K[x,y]/(x,y)^2, basis 1, x, y.
inline TestAlgebra square_zero_two_vars_algebra(const Field& f) {
    Matrix m(f, 3, 9);
    auto one = Scalar::one(f);
    m.at(0, 0) = one;              // 1*1
    m.at(1, 1) = m.at(1, 3) = one;  // 1*x, x*1
    m.at(2, 2) = m.at(2, 6) = one;  // 1*y, y*1
    return TestAlgebra(FinModule(f, 3, "K[x,y]/(x,y)^2"), m, unit_vec(f, 3, 0));
}

/// K x K componentwise.
inline TestAlgebra product_field_algebra(const Field& f) {
    Matrix m(f, 2, 4);
    m.at(0, 0) = Scalar::one(f);
    m.at(1, 3) = Scalar::one(f);
    Vec u = {Scalar::one(f), Scalar::one(f)};
    return TestAlgebra(FinModule(f, 2, "KxK"), m, u);
}

/// Tensor product of algebras; basis index i*dim(b)+j.
inline TestAlgebra tensor_algebra(const TestAlgebra& a, const TestAlgebra& b) {
    require_same_field(a.field(), b.field());
    const std::size_t na = a.dim(), nb = b.dim(), n = na * nb;
    Matrix m(a.field(), n, n * n);
    for (std::size_t i1 = 0; i1 < na; ++i1)
        for (std::size_t j1 = 0; j1 < nb; ++j1)
            for (std::size_t i2 = 0; i2 < na; ++i2)
                for (std::size_t j2 = 0; j2 < nb; ++j2) {
                    Vec pa = a.product(unit_vec(a.field(), na, i1), unit_vec(a.field(), na, i2));
                    Vec pb = b.product(unit_vec(b.field(), nb, j1), unit_vec(b.field(), nb, j2));
                    Vec prod = kron_vec(pa, pb, a.field());
                    std::size_t col = (i1 * nb + j1) * n + (i2 * nb + j2);
                    for (std::size_t k = 0; k < n; ++k) m.at(k, col) = prod[k];
                }
    Vec u = kron_vec(a.unit, b.unit, a.field());
    return TestAlgebra(FinModule(a.field(), n, a.module.label + "(x)" + b.module.label), m, u);
}

// ---------------------------------------------------------------------------
// Universe: a finite diagram of test algebras.
// ---------------------------------------------------------------------------

struct UniverseMorphism {
    std::size_t src = 0, dst = 0;
    Matrix matrix;
};

/// Basis indices generating a as a unital algebra (greedy, deterministic).
inline std::vector<std::size_t> algebra_generators(const TestAlgebra& a) {
    const Field& f = a.field();
    const std::size_t n = a.dim();
    std::vector<std::size_t> gens;
    std::vector<Vec> span_vecs = {a.unit};
    auto span_matrix = [&] { return Matrix::from_columns(f, n, span_vecs); };
    auto close_span = [&] {
        bool grew = true;
        while (grew) {
            grew = false;
            Matrix sp = span_matrix();
            std::vector<Vec> fresh;
            for (std::size_t i = 0; i < span_vecs.size(); ++i)
                for (std::size_t j = 0; j <= i; ++j) {
                    Vec p = a.product(span_vecs[i], span_vecs[j]);
                    if (!in_span(sp, p)) {
                        fresh.push_back(p);
                        sp = sp.hstack(Matrix::from_columns(f, n, {p}));
                        grew = true;
                    }
                }
            span_vecs.insert(span_vecs.end(), fresh.begin(), fresh.end());
        }
    };
    close_span();
    for (std::size_t i = 0; i < n; ++i) {
        if (in_span(span_matrix(), unit_vec(f, n, i))) continue;
        gens.push_back(i);
        span_vecs.push_back(unit_vec(f, n, i));
        close_span();
    }
    return gens;
}

/// A finite stand-in for the category of commutative algebras over the base.
/// algebras[base_index] is the base ring (the field K for ordinary universes).
struct Universe {
    std::vector<TestAlgebra> algebras;
    std::vector<UniverseMorphism> morphisms;
    /// The arrows the diagram was generated from; composites are implied.
    /// Solvers may restrict naturality constraints to these.
    std::vector<UniverseMorphism> generator_morphisms;
    std::size_t base_index = 0;
    std::string name;

    const Field& field() const { return algebras.at(0).field(); }

    std::size_t find_morphism(std::size_t src, std::size_t dst, const Matrix& m) const {
        for (std::size_t k = 0; k < morphisms.size(); ++k)
            if (morphisms[k].src == src && morphisms[k].dst == dst && morphisms[k].matrix == m)
                return k;
        return morphisms.size();
    }

    bool has_morphism(std::size_t src, std::size_t dst, const Matrix& m) const {
        return find_morphism(src, dst, m) != morphisms.size();
    }

    /// Adds identities and all composites until a fixpoint; validates each
    /// arrow as an algebra morphism.
    void close() {
        generator_morphisms = morphisms;
        for (std::size_t i = 0; i < algebras.size(); ++i) {
            Matrix id = Matrix::identity(field(), algebras[i].dim());
            if (!has_morphism(i, i, id)) morphisms.push_back({i, i, id});
        }
        for (const auto& m : morphisms)
            AlgebraMorphism(algebras.at(m.src), algebras.at(m.dst), m.matrix);
        bool grew = true;
        std::size_t guard = 0;
        while (grew) {
            if (++guard > 64 || morphisms.size() > 4096)
                throw std::runtime_error("universe closure does not stabilize");
            grew = false;
            const std::size_t count = morphisms.size();
            for (std::size_t a = 0; a < count; ++a)
                for (std::size_t b = 0; b < count; ++b) {
                    if (morphisms[a].dst != morphisms[b].src) continue;
                    Matrix comp = morphisms[b].matrix * morphisms[a].matrix;
                    if (!has_morphism(morphisms[a].src, morphisms[b].dst, comp)) {
                        morphisms.push_back({morphisms[a].src, morphisms[b].dst, comp});
                        grew = true;
                    }
                }
        }
    }

    void validate() const {
        if (algebras.empty()) throw std::invalid_argument("universe: no algebras");
        if (algebras.at(base_index).dim() == 0)
            throw std::invalid_argument("universe: degenerate base");
        for (const auto& a : algebras) {
            require_same_field(a.field(), field());
            a.validate();
            // structural morphism base -> a must be listed
            Matrix st = structural_matrix(a);
            if (!has_morphism(base_index, index_of(a), st))
                throw std::invalid_argument("universe: missing structural morphism into " +
                                            a.module.label);
        }
        for (const auto& m : morphisms)
            AlgebraMorphism(algebras.at(m.src), algebras.at(m.dst), m.matrix);
        // closure under composition within the listed set
        for (const auto& a : morphisms)
            for (const auto& b : morphisms) {
                if (a.dst != b.src) continue;
                if (!has_morphism(a.src, b.dst, b.matrix * a.matrix))
                    throw std::invalid_argument("universe: morphisms not closed under composition");
            }
    }

private:
    std::size_t index_of(const TestAlgebra& a) const {
        for (std::size_t i = 0; i < algebras.size(); ++i)
            if (&algebras[i] == &a) return i;
        throw std::logic_error("algebra not in universe");
    }

    /// Base -> S, 1 |-> unit of S (base assumed 1-dimensional here; the
    /// S-relative case supplies its structural arrows explicitly).
    Matrix structural_matrix(const TestAlgebra& a) const {
        const TestAlgebra& base = algebras.at(base_index);
        if (base.dim() == 1)
            return Matrix::from_columns(field(), a.dim(), {a.unit});
        // Relative universe: accept any listed arrow base -> a as structural.
        for (const auto& m : morphisms)
            if (m.src == base_index && &algebras[m.dst] == &a) return m.matrix;
        throw std::invalid_argument("universe: no structural arrow from base");
    }
};

/// The reference universe: K, K[x]/(x^2), K[x]/(x^3), K[x,y]/(x,y)^2, KxK,
/// with unit inclusions, evaluations at 0, x |-> y and truncation maps,
/// the projections of KxK, and all composites.
inline Universe reference_universe(const Field& f) {
    Universe u;
    u.name = "reference";
    u.algebras = {field_algebra(f), truncated_polynomial_algebra(f, 2),
                  truncated_polynomial_algebra(f, 3), square_zero_two_vars_algebra(f),
                  product_field_algebra(f)};
    auto one = Scalar::one(f);
    auto col_unit = [&](std::size_t i) {
        return Matrix::from_columns(f, u.algebras[i].dim(), {u.algebras[i].unit});
    };
    for (std::size_t i = 1; i < u.algebras.size(); ++i)
        u.morphisms.push_back({0, i, col_unit(i)});
    // evaluations x |-> 0
    {
        Matrix e(f, 1, 2);
        e.at(0, 0) = one;
        u.morphisms.push_back({1, 0, e});
    }
    {
        Matrix e(f, 1, 3);
        e.at(0, 0) = one;
        u.morphisms.push_back({2, 0, e});
    }
    {
        Matrix e(f, 1, 3);
        e.at(0, 0) = one;
        u.morphisms.push_back({3, 0, e});
    }
    // truncation K[x]/(x^3) -> K[x]/(x^2)
    {
        Matrix t(f, 2, 3);
        t.at(0, 0) = one;
        t.at(1, 1) = one;
        u.morphisms.push_back({2, 1, t});
    }
    // K[x]/(x^2) -> K[x,y]/(x,y)^2: x |-> x and x |-> y
    {
        Matrix mx(f, 3, 2);
        mx.at(0, 0) = one;
        mx.at(1, 1) = one;
        u.morphisms.push_back({1, 3, mx});
        Matrix my(f, 3, 2);
        my.at(0, 0) = one;
        my.at(2, 1) = one;
        u.morphisms.push_back({1, 3, my});
    }
    // projections of KxK
    {
        Matrix p1(f, 1, 2);
        p1.at(0, 0) = one;
        u.morphisms.push_back({4, 0, p1});
        Matrix p2(f, 1, 2);
        p2.at(0, 1) = one;
        u.morphisms.push_back({4, 0, p2});
    }
    u.close();
    u.validate();
    return u;
}

}  // namespace reflexa
