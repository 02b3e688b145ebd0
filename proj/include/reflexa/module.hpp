#pragma once

#include <string>

#include "reflexa/matrix.hpp"

namespace reflexa {

/// Finite-rank free module over the base field. Over a field every module is
/// free, so a module is its rank plus a basis convention.
struct FinModule {
    Field field;
    std::size_t rank = 0;
    std::string label;

    FinModule() = default;
    FinModule(const Field& f, std::size_t r, std::string lbl = "")
        : field(f), rank(r), label(std::move(lbl)) {}

    bool operator==(const FinModule& o) const { return field == o.field && rank == o.rank; }
    bool operator!=(const FinModule& o) const { return !(*this == o); }
};

struct LinearMap {
    FinModule domain;
    FinModule codomain;
    Matrix matrix;  // rank(codomain) x rank(domain)

    LinearMap() = default;
    LinearMap(FinModule dom, FinModule cod, Matrix m)
        : domain(std::move(dom)), codomain(std::move(cod)), matrix(std::move(m)) {
        require_same_field(domain.field, codomain.field);
        require_same_field(domain.field, matrix.field());
        if (matrix.rows() != codomain.rank || matrix.cols() != domain.rank)
            throw std::invalid_argument("linear map shape does not match domain/codomain ranks");
    }

    static LinearMap identity(const FinModule& m) {
        return LinearMap(m, m, Matrix::identity(m.field, m.rank));
    }

    LinearMap compose_after(const LinearMap& inner) const {  // this . inner
        if (inner.codomain != domain)
            throw std::invalid_argument("composition: domain/codomain mismatch");
        return LinearMap(inner.domain, codomain, matrix * inner.matrix);
    }

    bool operator==(const LinearMap& o) const {
        return domain == o.domain && codomain == o.codomain && matrix == o.matrix;
    }
};

/// M* = Hom(M, K), carried on the dual basis of the standard basis.
inline FinModule dual_module(const FinModule& m) {
    return FinModule(m.field, m.rank, m.label.empty() ? "" : m.label + "*");
}

/// f |-> f*: transpose matrix, domain/codomain swapped and dualized.
inline LinearMap dual_map(const LinearMap& f) {
    return LinearMap(dual_module(f.codomain), dual_module(f.domain), f.matrix.transpose());
}

/// Unit M -> M**; the identity matrix under the dual-basis conventions.
inline LinearMap double_dual_unit(const FinModule& m) {
    return LinearMap(m, dual_module(dual_module(m)), Matrix::identity(m.field, m.rank));
}

/// Tensor index convention, fixed once for the whole library:
/// e_i (x) e_j |-> i * rank(n) + j.
inline FinModule tensor(const FinModule& m, const FinModule& n) {
    require_same_field(m.field, n.field);
    return FinModule(m.field, m.rank * n.rank);
}

inline LinearMap tensor_map(const LinearMap& f, const LinearMap& g) {
    return LinearMap(tensor(f.domain, g.domain), tensor(f.codomain, g.codomain),
                     kron(f.matrix, g.matrix));
}

/// Hom(m, n), coordinates = row-major flattening of the rank(n) x rank(m)
/// matrix of a map.
inline FinModule hom_module(const FinModule& m, const FinModule& n) {
    require_same_field(m.field, n.field);
    return FinModule(m.field, m.rank * n.rank);
}

/// dual(m) (x) n -> Hom(m, n):  w (x) v |-> (u |-> w(u) v).
/// A permutation matrix under the two flattening conventions above.
inline LinearMap tensor_to_hom(const FinModule& m, const FinModule& n) {
    const std::size_t a = m.rank, b = n.rank;
    Matrix p(m.field, a * b, a * b);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j)
            p.at(j * a + i, i * b + j) = Scalar::one(m.field);
    return LinearMap(tensor(dual_module(m), n), hom_module(m, n), p);
}

inline LinearMap hom_to_tensor(const FinModule& m, const FinModule& n) {
    const std::size_t a = m.rank, b = n.rank;
    Matrix p(m.field, a * b, a * b);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j)
            p.at(i * b + j, j * a + i) = Scalar::one(m.field);
    return LinearMap(hom_module(m, n), tensor(dual_module(m), n), p);
}

/// m (x) n -> Hom(dual(m), n):  u (x) v |-> (w |-> w(u) v).
/// The finite-rank identification of maps out of a dual with a tensor.
inline LinearMap hom_from_dual_source(const FinModule& m, const FinModule& n) {
    const std::size_t a = m.rank, b = n.rank;
    Matrix p(m.field, a * b, a * b);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j)
            p.at(j * a + i, i * b + j) = Scalar::one(m.field);
    return LinearMap(tensor(m, n), hom_module(dual_module(m), n), p);
}

/// Evaluation pairing M* (x) M -> K.
inline LinearMap evaluation_map(const FinModule& m) {
    Matrix e(m.field, 1, m.rank * m.rank);
    for (std::size_t i = 0; i < m.rank; ++i)
        e.at(0, i * m.rank + i) = Scalar::one(m.field);
    return LinearMap(tensor(dual_module(m), m), FinModule(m.field, 1), e);
}

/// Coevaluation K -> M (x) M*.
inline LinearMap coevaluation_map(const FinModule& m) {
    Matrix c(m.field, m.rank * m.rank, 1);
    for (std::size_t i = 0; i < m.rank; ++i)
        c.at(i * m.rank + i, 0) = Scalar::one(m.field);
    return LinearMap(FinModule(m.field, 1), tensor(m, dual_module(m)), c);
}

}  // namespace reflexa
