#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "reflexa/algebra.hpp"

namespace reflexa {

/// On-demand materialization contract for towers that extend past their
/// stored prefix.
struct TowerGenerator {
    std::string name;
    std::function<FinModule(std::size_t)> level;       // level index -> module
    std::function<LinearMap(std::size_t)> map;         // n -> map level n+1 -> level n
};

/// N-indexed inverse system of finite-dimensional modules, stored as a finite
/// prefix. maps[n] goes from level n+1 down to level n.
struct Tower {
    std::vector<FinModule> levels;
    std::vector<LinearMap> maps;
    std::optional<TowerGenerator> generator;

    std::size_t depth() const { return levels.size(); }

    void validate() const {
        if (levels.empty()) throw std::invalid_argument("tower: empty");
        if (maps.size() + 1 != levels.size())
            throw std::invalid_argument("tower: map count must be level count - 1");
        for (std::size_t n = 0; n < maps.size(); ++n) {
            if (maps[n].domain != levels[n + 1] || maps[n].codomain != levels[n])
                throw std::invalid_argument("tower: maps do not chain");
            require_same_field(levels[n].field, levels[0].field);
        }
    }

    /// Composite map level `from` -> level `to` (from >= to).
    Matrix composite(std::size_t from, std::size_t to) const {
        Matrix m = Matrix::identity(levels[from].field, levels[from].rank);
        for (std::size_t n = from; n > to; --n) m = maps[n - 1].matrix * m;
        return m;
    }

    /// A deeper copy materialized through the generator.
    Tower deepened(std::size_t new_depth) const {
        if (new_depth <= depth()) return *this;
        if (!generator) throw std::invalid_argument("tower: no generator to deepen with");
        Tower t = *this;
        while (t.levels.size() < new_depth) {
            std::size_t n = t.levels.size();
            t.levels.push_back(generator->level(n));
            t.maps.push_back(generator->map(n - 1));
        }
        t.validate();
        return t;
    }
};

/// Compatible coordinate prefix of an element of the inverse limit.
struct TowerElement {
    std::vector<Vec> coords;

    void validate(const Tower& t) const {
        if (coords.size() != t.levels.size())
            throw std::invalid_argument("tower element: wrong prefix length");
        for (std::size_t n = 0; n + 1 < coords.size(); ++n)
            if (t.maps[n].matrix.apply(coords[n + 1]) != coords[n])
                throw std::invalid_argument("tower element: coordinates not compatible");
    }
};

/// Tower whose levels carry algebra structures and whose maps are algebra
/// morphisms.
struct AlgebraTower {
    Tower tower;
    std::vector<TestAlgebra> algebras;

    void validate() const {
        tower.validate();
        if (algebras.size() != tower.levels.size())
            throw std::invalid_argument("algebra tower: algebra count mismatch");
        for (std::size_t n = 0; n < algebras.size(); ++n) {
            algebras[n].validate();
            if (algebras[n].module != tower.levels[n])
                throw std::invalid_argument("algebra tower: module mismatch");
        }
        for (std::size_t n = 0; n < tower.maps.size(); ++n)
            AlgebraMorphism(algebras[n + 1], algebras[n], tower.maps[n].matrix);
    }
};

/// Direct system with injective connecting maps, e.g. the dual of a
/// stabilized tower.
struct DirectSystem {
    std::vector<FinModule> levels;
    std::vector<LinearMap> maps;  // maps[n]: level n -> level n+1

    void validate() const {
        if (maps.size() + 1 != levels.size())
            throw std::invalid_argument("direct system: map count mismatch");
        for (std::size_t n = 0; n < maps.size(); ++n) {
            if (maps[n].domain != levels[n] || maps[n].codomain != levels[n + 1])
                throw std::invalid_argument("direct system: maps do not chain");
            if (rank(maps[n].matrix) != levels[n].rank)
                throw std::invalid_argument("direct system: map not injective");
        }
    }
};

inline bool tower_maps_surjective(const Tower& t) {
    for (std::size_t n = 0; n < t.maps.size(); ++n)
        if (rank(t.maps[n].matrix) != t.levels[n].rank) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Mittag-Leffler stabilization: replace each level by the image from the
// deepest materialized level.
// ---------------------------------------------------------------------------

struct StabilizedTower {
    Tower tower;
    /// Columns embed the new level n into the old level n.
    std::vector<Matrix> inclusions;
    /// True when adding the last materialized level changed no image dims.
    bool prefix_stable = false;
    std::size_t depth_used = 0;
};

inline StabilizedTower stabilized_images(const Tower& t) {
    t.validate();
    const Field& f = t.levels[0].field;
    const std::size_t last = t.depth() - 1;
    StabilizedTower out;
    out.depth_used = t.depth();
    out.tower.generator = t.generator;
    for (std::size_t n = 0; n <= last; ++n) {
        Matrix b = Matrix::from_columns(f, t.levels[n].rank, image_basis(t.composite(last, n)));
        out.inclusions.push_back(b);
        out.tower.levels.emplace_back(f, b.cols(), t.levels[n].label);
    }
    for (std::size_t n = 0; n + 1 <= last; ++n) {
        // restricted map in the chosen image bases
        const Matrix& bn = out.inclusions[n];
        Matrix img = t.maps[n].matrix * out.inclusions[n + 1];
        Matrix m(f, bn.cols(), img.cols());
        for (std::size_t c = 0; c < img.cols(); ++c) {
            auto x = solve(bn, img.column(c));
            if (!x) throw std::logic_error("stabilized_images: image not nested");
            for (std::size_t i = 0; i < x->size(); ++i) m.at(i, c) = (*x)[i];
        }
        out.tower.maps.emplace_back(out.tower.levels[n + 1], out.tower.levels[n], m);
    }
    out.prefix_stable = true;
    if (last >= 1)
        for (std::size_t n = 0; n + 1 <= last; ++n)
            if (rank(t.composite(last - 1, n)) != out.tower.levels[n].rank)
                out.prefix_stable = false;
    out.tower.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Product decomposition of a surjective tower: level k = (+)_{n<=k} H_n with
// the connecting maps becoming coordinate truncations.
// ---------------------------------------------------------------------------

struct ProductDecomposition {
    std::vector<FinModule> pieces;     // H_n
    std::vector<Matrix> splittings;    // level k  ~  (+)_{n<=k} H_n (invertible)
};

inline ProductDecomposition product_decomposition(const Tower& t) {
    t.validate();
    if (!tower_maps_surjective(t))
        throw std::invalid_argument("product_decomposition: tower maps must be surjective");
    const Field& f = t.levels[0].field;
    ProductDecomposition out;
    std::vector<Matrix> kernels;  // H_n included in level n
    kernels.push_back(Matrix::identity(f, t.levels[0].rank));
    out.pieces.emplace_back(f, t.levels[0].rank);
    for (std::size_t n = 1; n < t.depth(); ++n) {
        Matrix k = Matrix::from_columns(f, t.levels[n].rank, kernel_basis(t.maps[n - 1].matrix));
        out.pieces.emplace_back(f, k.cols());
        kernels.push_back(std::move(k));
    }
    // sections with free variables zero: the complement spanned by the
    // non-pivot coordinates of the surjection's rref
    std::vector<Matrix> sections;
    for (std::size_t n = 0; n + 1 < t.depth(); ++n) {
        const Matrix& m = t.maps[n].matrix;
        Matrix s(f, m.cols(), m.rows());
        for (std::size_t c = 0; c < m.rows(); ++c) {
            auto x = solve(m, unit_vec(f, m.rows(), c));
            if (!x) throw std::logic_error("product_decomposition: section failed");
            for (std::size_t i = 0; i < x->size(); ++i) s.at(i, c) = (*x)[i];
        }
        sections.push_back(std::move(s));
    }
    for (std::size_t k = 0; k < t.depth(); ++k) {
        std::size_t total = 0;
        for (std::size_t n = 0; n <= k; ++n) total += out.pieces[n].rank;
        if (total != t.levels[k].rank)
            throw std::logic_error("product_decomposition: dimension bookkeeping failed");
        Matrix phi(f, t.levels[k].rank, total);
        std::size_t col0 = 0;
        for (std::size_t n = 0; n <= k; ++n) {
            Matrix block = kernels[n];
            for (std::size_t j = n; j < k; ++j) block = sections[j] * block;
            for (std::size_t c = 0; c < block.cols(); ++c)
                for (std::size_t i = 0; i < block.rows(); ++i)
                    phi.at(i, col0 + c) = block.at(i, c);
            col0 += block.cols();
        }
        if (rank(phi) != t.levels[k].rank)
            throw std::logic_error("product_decomposition: splitting not invertible");
        out.splittings.push_back(std::move(phi));
    }
    return out;
}

/// Coordinate truncation (+)_{n<=k} H_n -> (+)_{n<=k-1} H_n.
inline Matrix truncation_matrix(const ProductDecomposition& d, std::size_t k, const Field& f) {
    std::size_t hi = 0, lo = 0;
    for (std::size_t n = 0; n <= k; ++n) hi += d.pieces[n].rank;
    for (std::size_t n = 0; n < k; ++n) lo += d.pieces[n].rank;
    Matrix t(f, lo, hi);
    for (std::size_t i = 0; i < lo; ++i) t.at(i, i) = Scalar::one(f);
    return t;
}

// ---------------------------------------------------------------------------
// Duality: M* = colim M_i*.
// ---------------------------------------------------------------------------

inline DirectSystem dual_tower(const Tower& t) {
    t.validate();
    if (!tower_maps_surjective(t))
        throw std::invalid_argument("dual_tower: tower must be stabilized (surjective maps)");
    DirectSystem d;
    for (const auto& l : t.levels) d.levels.push_back(dual_module(l));
    for (const auto& m : t.maps) d.maps.push_back(dual_map(m));
    d.validate();
    return d;
}

/// Dualize the dual system back and compare with the original levelwise,
/// through the canonical double-dual identifications.
inline bool reflexivity_roundtrip(const Tower& t) {
    DirectSystem d = dual_tower(t);
    for (std::size_t n = 0; n < t.maps.size(); ++n) {
        LinearMap dd = dual_map(d.maps[n]);  // level n+1 ** -> level n **
        LinearMap lhs = dd.compose_after(double_dual_unit(t.levels[n + 1]));
        LinearMap expected = LinearMap(t.levels[n + 1], dual_module(dual_module(t.levels[n])),
                                       double_dual_unit(t.levels[n]).matrix * t.maps[n].matrix);
        if (lhs.matrix != expected.matrix) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Kernel of a functional: P = Ker f (+) K.v, with Ker f as a quotient tower.
// ---------------------------------------------------------------------------

struct KernelTower {
    Tower kernel;                    // levels = ker f_n in chosen bases
    std::vector<Matrix> kernel_bases;  // columns embed ker f_n into level n
    std::optional<TowerElement> pivot;  // v with f(v) != 0, when f != 0
    bool is_zero_functional = false;
};

inline KernelTower kernel_tower(const std::vector<Vec>& functionals, const Tower& t) {
    t.validate();
    if (!tower_maps_surjective(t))
        throw std::invalid_argument("kernel_tower: tower must be stabilized");
    const Field& f = t.levels[0].field;
    if (functionals.size() != t.depth())
        throw std::invalid_argument("kernel_tower: one functional per level required");
    std::vector<Matrix> rows;
    for (std::size_t n = 0; n < t.depth(); ++n) {
        if (functionals[n].size() != t.levels[n].rank)
            throw std::invalid_argument("kernel_tower: functional dimension mismatch");
        rows.push_back(Matrix::from_columns(f, t.levels[n].rank, {functionals[n]}).transpose());
    }
    for (std::size_t n = 0; n + 1 < t.depth(); ++n)
        if (rows[n] * t.maps[n].matrix != rows[n + 1])
            throw std::invalid_argument("kernel_tower: functionals not compatible with tower maps");

    KernelTower out;
    bool zero = true;
    for (const auto& r : rows)
        if (!r.is_zero()) zero = false;
    if (zero) {
        out.is_zero_functional = true;
        out.kernel = t;
        for (const auto& l : t.levels)
            out.kernel_bases.push_back(Matrix::identity(f, l.rank));
        return out;
    }

    // pivot element: searched at the deepest level, propagated down
    const std::size_t last = t.depth() - 1;
    std::size_t pick = t.levels[last].rank;
    for (std::size_t i = 0; i < t.levels[last].rank; ++i)
        if (!rows[last].at(0, i).is_zero()) {
            pick = i;
            break;
        }
    if (pick == t.levels[last].rank)
        throw std::logic_error("kernel_tower: functional vanishes at the deepest level only");
    TowerElement v;
    v.coords.assign(t.depth(), Vec{});
    v.coords[last] = unit_vec(f, t.levels[last].rank, pick);
    for (std::size_t n = last; n > 0; --n)
        v.coords[n - 1] = t.maps[n - 1].matrix.apply(v.coords[n]);
    v.validate(t);
    out.pivot = v;

    for (std::size_t n = 0; n < t.depth(); ++n) {
        // f_n != 0 everywhere: f_n(v_n) = f_last(v_last) by compatibility
        Matrix kb = Matrix::from_columns(f, t.levels[n].rank, kernel_basis(rows[n]));
        out.kernel_bases.push_back(kb);
        out.kernel.levels.emplace_back(f, kb.cols());
        // direct-sum check: [ker basis | v_n] spans the level
        Matrix joint = kb.hstack(Matrix::from_columns(f, t.levels[n].rank, {v.coords[n]}));
        if (joint.cols() != t.levels[n].rank || rank(joint) != t.levels[n].rank)
            throw std::logic_error("kernel_tower: level does not split as ker (+) K.v");
    }
    for (std::size_t n = 0; n + 1 < t.depth(); ++n) {
        // induced map ker f_{n+1} -> ker f_n in the chosen bases
        Matrix img = t.maps[n].matrix * out.kernel_bases[n + 1];
        Matrix m(f, out.kernel_bases[n].cols(), img.cols());
        for (std::size_t c = 0; c < img.cols(); ++c) {
            auto x = solve(out.kernel_bases[n], img.column(c));
            if (!x) throw std::logic_error("kernel_tower: kernel not preserved by tower maps");
            for (std::size_t i = 0; i < x->size(); ++i) m.at(i, c) = (*x)[i];
        }
        out.kernel.maps.emplace_back(out.kernel.levels[n + 1], out.kernel.levels[n], m);
    }
    out.kernel.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Completed tensor product of algebra towers (diagonal reindexing).
// ---------------------------------------------------------------------------

inline AlgebraTower completed_tensor(const AlgebraTower& a, const AlgebraTower& b) {
    a.validate();
    b.validate();
    require_same_field(a.tower.levels[0].field, b.tower.levels[0].field);
    if (a.tower.depth() != b.tower.depth())
        throw std::invalid_argument("completed_tensor: depth mismatch");
    AlgebraTower out;
    for (std::size_t n = 0; n < a.tower.depth(); ++n) {
        out.algebras.push_back(tensor_algebra(a.algebras[n], b.algebras[n]));
        out.tower.levels.push_back(out.algebras.back().module);
    }
    for (std::size_t n = 0; n + 1 < a.tower.depth(); ++n)
        out.tower.maps.emplace_back(out.tower.levels[n + 1], out.tower.levels[n],
                                    kron(a.tower.maps[n].matrix, b.tower.maps[n].matrix));
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Power series: the tower K[x]/(x^(n+1)) and truncated arithmetic.
// ---------------------------------------------------------------------------

inline AlgebraTower power_series_tower(const Field& f, std::size_t depth) {
    AlgebraTower out;
    for (std::size_t n = 0; n <= depth; ++n) {
        out.algebras.push_back(truncated_polynomial_algebra(f, n + 1));
        out.tower.levels.push_back(out.algebras.back().module);
    }
    for (std::size_t n = 0; n < depth; ++n) {
        Matrix trunc(f, n + 1, n + 2);
        for (std::size_t i = 0; i <= n; ++i) trunc.at(i, i) = Scalar::one(f);
        out.tower.maps.emplace_back(out.tower.levels[n + 1], out.tower.levels[n], trunc);
    }
    TowerGenerator gen;
    gen.name = "power-series";
    gen.level = [f](std::size_t n) { return FinModule(f, n + 1); };
    gen.map = [f](std::size_t n) {
        Matrix trunc(f, n + 1, n + 2);
        for (std::size_t i = 0; i <= n; ++i) trunc.at(i, i) = Scalar::one(f);
        return LinearMap(FinModule(f, n + 2), FinModule(f, n + 1), trunc);
    };
    out.tower.generator = gen;
    out.validate();
    return out;
}

inline Tower constant_tower(const FinModule& m, std::size_t depth) {
    Tower t;
    for (std::size_t n = 0; n <= depth; ++n) t.levels.push_back(m);
    for (std::size_t n = 0; n < depth; ++n) t.maps.push_back(LinearMap::identity(m));
    t.validate();
    return t;
}

/// Truncated convolution of coefficient vectors (same length).
inline Vec ps_mul(const Vec& a, const Vec& b, const Field& f) {
    if (a.size() != b.size()) throw std::invalid_argument("ps_mul: length mismatch");
    Vec c(a.size(), Scalar::zero(f));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

/// Multiplicative inverse to the given truncation depth; unit constant term
/// required.
inline Vec ps_invert(const Vec& a, const Field& f) {
    if (a.empty() || a[0].is_zero())
        throw std::domain_error("ps_invert: constant term must be a unit");
    Vec r(a.size(), Scalar::zero(f));
    Scalar inv0 = a[0].inverse();
    r[0] = inv0;
    for (std::size_t n = 1; n < a.size(); ++n) {
        Scalar acc = Scalar::zero(f);
        for (std::size_t k = 1; k <= n; ++k) acc += a[k] * r[n - k];
        r[n] = -(acc * inv0);
    }
    return r;
}

}  // namespace reflexa
