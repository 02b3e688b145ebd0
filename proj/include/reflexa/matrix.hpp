#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "reflexa/scalar.hpp"

namespace reflexa {

using Vec = std::vector<Scalar>;

/// Dense row-major matrix over one field. Immutable in spirit: all
/// operations return fresh values.
class Matrix {
public:
    Matrix() : field_(Field::rationals()), rows_(0), cols_(0) {}

    Matrix(const Field& f, std::size_t rows, std::size_t cols)
        : field_(f), rows_(rows), cols_(cols), e_(rows * cols, Scalar::zero(f)) {}

    static Matrix identity(const Field& f, std::size_t n) {
        Matrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = Scalar::one(f);
        return m;
    }

    static Matrix from_columns(const Field& f, std::size_t dim, const std::vector<Vec>& cols) {
        Matrix m(f, dim, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != dim) throw std::invalid_argument("column dimension mismatch");
            for (std::size_t i = 0; i < dim; ++i) m.at(i, j) = cols[j][i];
        }
        return m;
    }

    const Field& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Scalar& at(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

    bool operator==(const Matrix& o) const {
        return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : e_)
            if (!x.is_zero()) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    Matrix operator+(const Matrix& o) const {
        check_shape(o);
        Matrix r(*this);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] += o.e_[k];
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        check_shape(o);
        Matrix r(*this);
        for (std::size_t k = 0; k < e_.size(); ++k) r.e_[k] -= o.e_[k];
        return r;
    }

    Matrix operator*(const Matrix& o) const {
        require_same_field(field_, o.field_);
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        Matrix r(field_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Scalar& a = at(i, k);
                if (a.is_zero()) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    const Scalar& b = o.at(k, j);
                    if (!b.is_zero()) r.at(i, j) += a * b;
                }
            }
        return r;
    }

    Matrix scaled(const Scalar& c) const {
        Matrix r(*this);
        for (auto& x : r.e_) x *= c;
        return r;
    }

    Vec apply(const Vec& v) const {
        if (v.size() != cols_) throw std::invalid_argument("vector dimension mismatch");
        Vec r(rows_, Scalar::zero(field_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (!at(i, j).is_zero() && !v[j].is_zero()) r[i] += at(i, j) * v[j];
        return r;
    }

    Vec column(std::size_t j) const {
        Vec c(rows_, Scalar::zero(field_));
        for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
        return c;
    }

    Vec row(std::size_t i) const {
        Vec r(cols_, Scalar::zero(field_));
        for (std::size_t j = 0; j < cols_; ++j) r[j] = at(i, j);
        return r;
    }

    Matrix hstack(const Matrix& o) const {
        require_same_field(field_, o.field_);
        if (rows_ != o.rows_) throw std::invalid_argument("hstack row mismatch");
        Matrix r(field_, rows_, cols_ + o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
            for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
        }
        return r;
    }

    Matrix vstack(const Matrix& o) const {
        require_same_field(field_, o.field_);
        if (cols_ != o.cols_) throw std::invalid_argument("vstack column mismatch");
        Matrix r(field_, rows_ + o.rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
        for (std::size_t i = 0; i < o.rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(rows_ + i, j) = o.at(i, j);
        return r;
    }

    /// Row-major flattening; basis convention for every vec/unvec in the library.
    Vec vec() const { return e_; }

    static Matrix unvec(const Field& f, std::size_t rows, std::size_t cols, const Vec& v) {
        if (v.size() != rows * cols) throw std::invalid_argument("unvec size mismatch");
        Matrix m(f, rows, cols);
        m.e_ = v;
        return m;
    }

private:
    void check_shape(const Matrix& o) const {
        require_same_field(field_, o.field_);
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    Field field_;
    std::size_t rows_, cols_;
    std::vector<Scalar> e_;
};

// ---------------------------------------------------------------------------
// Elimination kernel.
// ---------------------------------------------------------------------------

/// Reduced row-echelon form plus pivot columns. Deterministic: leftmost pivot
/// column, first nonzero row. Exact field arithmetic (canonicalized rationals
/// over Q, residues over GF(p)) keeps entries as quotients of minors.
inline std::pair<Matrix, std::vector<std::size_t>> rref(const Matrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    Matrix a = m;
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pr = r;
        while (pr < rows && a.at(pr, c).is_zero()) ++pr;
        if (pr == rows) continue;
        if (pr != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a.at(r, j), a.at(pr, j));
        Scalar inv = a.at(r, c).inverse();
        for (std::size_t j = 0; j < cols; ++j) a.at(r, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a.at(i, c).is_zero()) continue;
            Scalar f = a.at(i, c);
            for (std::size_t j = 0; j < cols; ++j) a.at(i, j) -= f * a.at(r, j);
        }
        pivots.push_back(c);
        ++r;
    }
    return {a, pivots};
}

inline std::size_t rank(const Matrix& m) { return rref(m).second.size(); }

/// Basis of the null space, one vector per free column in increasing order.
inline std::vector<Vec> kernel_basis(const Matrix& m) {
    auto [r, pivots] = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<Vec> basis;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        if (is_pivot[j]) continue;
        Vec v(m.cols(), Scalar::zero(m.field()));
        v[j] = Scalar::one(m.field());
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -r.at(k, j);
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Some solution of m x = b (free variables set to zero), or absent.
inline std::optional<Vec> solve(const Matrix& m, const Vec& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("solve: rhs dimension mismatch");
    Matrix aug = m.hstack(Matrix::from_columns(m.field(), m.rows(), {b}));
    auto [r, pivots] = rref(aug);
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
    Vec x(m.cols(), Scalar::zero(m.field()));
    for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = r.at(k, m.cols());
    return x;
}

/// Kronecker product; e_i (x) e_j lands at index i*cols(b)+j.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    require_same_field(a.field(), b.field());
    Matrix r(a.field(), a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Scalar& s = a.at(i, j);
            if (s.is_zero()) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r.at(i * b.rows() + k, j * b.cols() + l) = s * b.at(k, l);
        }
    return r;
}

inline Vec kron_vec(const Vec& x, const Vec& y, const Field& f) {
    Vec r(x.size() * y.size(), Scalar::zero(f));
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) r[i * y.size() + j] = x[i] * y[j];
    return r;
}

/// Basis of the column space: the pivot columns of m, verbatim.
inline std::vector<Vec> image_basis(const Matrix& m) {
    auto pivots = rref(m).second;
    std::vector<Vec> basis;
    basis.reserve(pivots.size());
    for (auto c : pivots) basis.push_back(m.column(c));
    return basis;
}

/// Membership of v in the column space of basis columns B.
inline bool in_span(const Matrix& basis_cols, const Vec& v) {
    return solve(basis_cols, v).has_value();
}

/// Intersection of subspaces, each given by a spanning column matrix.
inline std::vector<Vec> intersect_subspaces(const std::vector<Matrix>& bases) {
    if (bases.empty()) throw std::invalid_argument("intersect_subspaces: empty input");
    const std::size_t dim = bases[0].rows();
    Matrix acc = bases[0];
    for (std::size_t k = 1; k < bases.size(); ++k) {
        const Matrix& b = bases[k];
        if (b.rows() != dim) throw std::invalid_argument("ambient dimension mismatch");
        if (acc.cols() == 0 || b.cols() == 0) {
            acc = Matrix(acc.field(), dim, 0);
            continue;
        }
        // Kernel of [acc | -b]: acc x = b y.
        Matrix stacked = acc.hstack(b.scaled(-Scalar::one(acc.field())));
        auto ker = kernel_basis(stacked);
        std::vector<Vec> vecs;
        for (const auto& kv : ker) {
            Vec x(kv.begin(), kv.begin() + static_cast<long>(acc.cols()));
            vecs.push_back(acc.apply(x));
        }
        Matrix span = Matrix::from_columns(acc.field(), dim, vecs);
        acc = Matrix::from_columns(acc.field(), dim, image_basis(span));
    }
    std::vector<Vec> out;
    for (std::size_t j = 0; j < acc.cols(); ++j) out.push_back(acc.column(j));
    return out;
}

/// Sparse row: sorted (column, coefficient) pairs, coefficients nonzero.
using SparseRow = std::vector<std::pair<std::size_t, Scalar>>;

namespace detail {

inline SparseRow sparse_axpy(const SparseRow& r, const Scalar& c, const SparseRow& p) {
    // r + c*p, merged
    SparseRow out;
    out.reserve(r.size() + p.size());
    std::size_t i = 0, j = 0;
    while (i < r.size() || j < p.size()) {
        if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
            out.push_back(r[i++]);
        } else if (i == r.size() || p[j].first < r[i].first) {
            out.emplace_back(p[j].first, c * p[j].second);
            ++j;
        } else {
            Scalar v = r[i].second + c * p[j].second;
            if (!v.is_zero()) out.emplace_back(r[i].first, v);
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace detail

/// Incremental sparse Gaussian eliminator; produces the same kernel basis as
/// rref-based elimination (free variables set to unit vectors, ascending).
class SparseEliminator {
public:
    SparseEliminator(const Field& f, std::size_t cols) : field_(f), cols_(cols) {}

    void add_row(SparseRow r) {
        while (!r.empty()) {
            auto it = pivots_.find(r.front().first);
            if (it == pivots_.end()) {
                Scalar inv = r.front().second.inverse();
                for (auto& [_, v] : r) v *= inv;
                pivots_.emplace(r.front().first, std::move(r));
                return;
            }
            r = detail::sparse_axpy(r, -r.front().second, it->second);
        }
    }

    std::size_t rank() const { return pivots_.size(); }

    std::vector<Vec> kernel() const {
        std::vector<Vec> basis;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (pivots_.count(j)) continue;
            Vec x(cols_, Scalar::zero(field_));
            x[j] = Scalar::one(field_);
            // back-substitute pivot columns in decreasing order
            for (auto it = pivots_.rbegin(); it != pivots_.rend(); ++it) {
                Scalar acc = Scalar::zero(field_);
                for (const auto& [col, v] : it->second)
                    if (col != it->first && !x[col].is_zero()) acc += v * x[col];
                x[it->first] = -acc;
            }
            basis.push_back(std::move(x));
        }
        return basis;
    }

private:
    Field field_;
    std::size_t cols_;
    std::map<std::size_t, SparseRow> pivots_;
};

inline Vec unit_vec(const Field& f, std::size_t dim, std::size_t i) {
    Vec v(dim, Scalar::zero(f));
    v[i] = Scalar::one(f);
    return v;
}

inline bool vec_is_zero(const Vec& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

inline Vec vec_add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec_add size mismatch");
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline Vec vec_sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec_sub size mismatch");
    Vec r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline Vec vec_scale(const Vec& a, const Scalar& c) {
    Vec r = a;
    for (auto& x : r) x *= c;
    return r;
}

}  // namespace reflexa
