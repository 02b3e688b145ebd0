#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

#include "reflexa/matrix.hpp"
#include "reflexa/module.hpp"

namespace reflexa {

/// Finite-dimensional associative unital algebra by structure constants.
/// Commutativity is not required (group algebras of nonabelian groups live
/// here); mult column index i*dim+j = e_i (x) e_j.
struct FinAlgebra {
    FinModule module;
    Matrix mult;  // dim x dim^2
    Vec unit;

    std::size_t dim() const { return module.rank; }
    const Field& field() const { return module.field; }

    Vec product(const Vec& x, const Vec& y) const { return mult.apply(kron_vec(x, y, field())); }

    Matrix left_mult(const Vec& x) const {
        const std::size_t n = dim();
        Matrix l(field(), n, n);
        for (std::size_t j = 0; j < n; ++j) {
            Vec col = product(x, unit_vec(field(), n, j));
            for (std::size_t i = 0; i < n; ++i) l.at(i, j) = col[i];
        }
        return l;
    }

    bool is_commutative() const {
        const std::size_t n = dim();
        Matrix swap(field(), n * n, n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                swap.at(i * n + j, j * n + i) = Scalar::one(field());
        return mult * swap == mult;
    }

    void validate() const {
        const std::size_t n = dim();
        if (mult.rows() != n || mult.cols() != n * n)
            throw std::invalid_argument("algebra: bad mult shape");
        if (unit.size() != n) throw std::invalid_argument("algebra: bad unit size");
        Matrix id = Matrix::identity(field(), n);
        if (mult * kron(mult, id) != mult * kron(id, mult))
            throw std::invalid_argument("algebra: not associative");
        Matrix u = Matrix::from_columns(field(), n, {unit});
        if (mult * kron(u, id) != id || mult * kron(id, u) != id)
            throw std::invalid_argument("algebra: unit law fails");
    }
};

/// Comultiplication stored sparsely: Delta(e_i) = sum of coeff * e_j (x) e_k.
struct ComultTerm {
    std::size_t left, right;
    Scalar coeff;
};

struct FinCoalgebra {
    FinModule module;
    std::vector<std::vector<ComultTerm>> comult;  // per basis index
    Vec counit;

    std::size_t dim() const { return module.rank; }
    const Field& field() const { return module.field; }

    /// Dense n^2 x n matrix of Delta; column i = Delta(e_i), index j*n+k.
    Matrix comult_matrix() const {
        const std::size_t n = dim();
        Matrix c(field(), n * n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& t : comult[i]) c.at(t.left * n + t.right, i) += t.coeff;
        return c;
    }

    void validate() const {
        const std::size_t n = dim();
        if (comult.size() != n) throw std::invalid_argument("coalgebra: bad comult size");
        if (counit.size() != n) throw std::invalid_argument("coalgebra: bad counit size");
        Matrix c = comult_matrix();
        Matrix id = Matrix::identity(field(), n);
        if (kron(c, id) * c != kron(id, c) * c)
            throw std::invalid_argument("coalgebra: not coassociative");
        Matrix eps = Matrix::from_columns(field(), n, {counit}).transpose();  // 1 x n
        if (kron(eps, id) * c != id || kron(id, eps) * c != id)
            throw std::invalid_argument("coalgebra: counit law fails");
    }

    bool is_cocommutative() const {
        const std::size_t n = dim();
        Matrix swap(field(), n * n, n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                swap.at(i * n + j, j * n + i) = Scalar::one(field());
        Matrix c = comult_matrix();
        return swap * c == c;
    }
};

inline std::vector<std::vector<ComultTerm>> comult_from_matrix(const Matrix& c) {
    const std::size_t n = c.cols();
    std::vector<std::vector<ComultTerm>> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (!c.at(j * n + k, i).is_zero())
                    out[i].push_back({j, k, c.at(j * n + k, i)});
    return out;
}

struct FinBialgebra {
    FinAlgebra algebra;
    FinCoalgebra coalgebra;

    std::size_t dim() const { return algebra.dim(); }
    const Field& field() const { return algebra.field(); }

    void validate() const {
        algebra.validate();
        coalgebra.validate();
        if (algebra.module != coalgebra.module)
            throw std::invalid_argument("bialgebra: algebra and coalgebra on different modules");
        const std::size_t n = dim();
        Matrix c = coalgebra.comult_matrix();
        // Delta is an algebra morphism into A (x) A
        Matrix mult2(field(), n * n, n * n * n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t x = 0; x < n; ++x)
                    for (std::size_t y = 0; y < n; ++y) {
                        Vec p = kron_vec(
                            algebra.product(unit_vec(field(), n, a), unit_vec(field(), n, x)),
                            algebra.product(unit_vec(field(), n, b), unit_vec(field(), n, y)),
                            field());
                        std::size_t col = (a * n + b) * n * n + (x * n + y);
                        for (std::size_t t = 0; t < p.size(); ++t)
                            if (!p[t].is_zero()) mult2.at(t, col) = p[t];
                    }
        if (c * algebra.mult != mult2 * kron(c, c))
            throw std::invalid_argument("bialgebra: comultiplication is not multiplicative");
        if (c.apply(algebra.unit) != kron_vec(algebra.unit, algebra.unit, field()))
            throw std::invalid_argument("bialgebra: Delta(1) != 1 (x) 1");
        Matrix eps = Matrix::from_columns(field(), n, {coalgebra.counit}).transpose();
        if (eps * algebra.mult != kron(eps, eps))
            throw std::invalid_argument("bialgebra: counit is not multiplicative");
        Vec e1 = eps.apply(algebra.unit);
        if (!e1[0].is_one()) throw std::invalid_argument("bialgebra: counit(1) != 1");
    }
};

// ---------------------------------------------------------------------------
// Duality: transpose the structure tensors.
// ---------------------------------------------------------------------------

/// Convolution algebra C* on the dual basis; mult = transpose of Delta.
inline FinAlgebra dual_algebra(const FinCoalgebra& c) {
    FinAlgebra a;
    a.module = dual_module(c.module);
    a.mult = c.comult_matrix().transpose();
    a.unit = c.counit;
    a.validate();
    return a;
}

/// A* with Delta = transpose of the multiplication, counit = evaluation at 1.
inline FinCoalgebra dual_coalgebra(const FinAlgebra& a) {
    FinCoalgebra c;
    c.module = dual_module(a.module);
    c.comult = comult_from_matrix(a.mult.transpose());
    c.counit = a.unit;
    c.validate();
    return c;
}

inline FinBialgebra dual_bialgebra(const FinBialgebra& b) {
    FinBialgebra d;
    d.algebra = dual_algebra(b.coalgebra);
    d.coalgebra = dual_coalgebra(b.algebra);
    d.validate();  // guaranteed by the anti-equivalence; failure is a bug
    return d;
}

// ---------------------------------------------------------------------------
// Morphisms.
// ---------------------------------------------------------------------------

inline bool is_bialgebra_morphism(const FinBialgebra& src, const FinBialgebra& dst,
                                  const Matrix& m) {
    if (m.rows() != dst.dim() || m.cols() != src.dim()) return false;
    if (m * src.algebra.mult != dst.algebra.mult * kron(m, m)) return false;
    if (m.apply(src.algebra.unit) != dst.algebra.unit) return false;
    if (dst.coalgebra.comult_matrix() * m != kron(m, m) * src.coalgebra.comult_matrix())
        return false;
    Matrix eps_src =
        Matrix::from_columns(src.field(), src.dim(), {src.coalgebra.counit}).transpose();
    Matrix eps_dst =
        Matrix::from_columns(dst.field(), dst.dim(), {dst.coalgebra.counit}).transpose();
    return eps_dst * m == eps_src;
}

/// f: A -> B* gives f^t: B -> A*, f^t(b)(a) = f(a)(b); the matrix transposes.
inline Matrix transpose_bialgebra_morphism(const FinBialgebra& a, const FinBialgebra& b,
                                           const Matrix& f) {
    if (!is_bialgebra_morphism(a, dual_bialgebra(b), f))
        throw std::invalid_argument("transpose: input is not a bialgebra morphism into B*");
    Matrix ft = f.transpose();
    if (!is_bialgebra_morphism(b, dual_bialgebra(a), ft))
        throw std::logic_error("transpose: transposed map fails verification");
    return ft;
}

// ---------------------------------------------------------------------------
// Group and function bialgebras.
// ---------------------------------------------------------------------------

inline void validate_group_table(const std::vector<std::vector<std::size_t>>& table) {
    const std::size_t n = table.size();
    if (n == 0) throw std::invalid_argument("group: empty table");
    for (const auto& row : table) {
        if (row.size() != n) throw std::invalid_argument("group: table not square");
        for (auto v : row)
            if (v >= n) throw std::invalid_argument("group: entry out of range");
    }
    for (std::size_t g = 0; g < n; ++g)
        if (table[0][g] != g || table[g][0] != g)
            throw std::invalid_argument("group: element 0 is not the identity");
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]])
                    throw std::invalid_argument("group: table not associative");
    for (std::size_t a = 0; a < n; ++a) {
        bool inv = false;
        for (std::size_t b = 0; b < n; ++b) inv = inv || table[a][b] == 0;
        if (!inv) throw std::invalid_argument("group: missing inverse");
    }
}

/// K[G]: basis = group elements, grouplike comultiplication.
inline FinBialgebra group_bialgebra(const std::vector<std::vector<std::size_t>>& table,
                                    const Field& f) {
    validate_group_table(table);
    const std::size_t n = table.size();
    FinBialgebra b;
    b.algebra.module = FinModule(f, n, "K[G]");
    b.algebra.mult = Matrix(f, n, n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b.algebra.mult.at(table[i][j], i * n + j) = Scalar::one(f);
    b.algebra.unit = unit_vec(f, n, 0);
    b.coalgebra.module = b.algebra.module;
    b.coalgebra.comult.resize(n);
    for (std::size_t i = 0; i < n; ++i) b.coalgebra.comult[i] = {{i, i, Scalar::one(f)}};
    b.coalgebra.counit = Vec(n, Scalar::one(f));
    b.validate();
    return b;
}

/// K^G: pointwise product, Delta(d_g) = sum over hk = g of d_h (x) d_k.
inline FinBialgebra function_bialgebra(const std::vector<std::vector<std::size_t>>& table,
                                       const Field& f) {
    validate_group_table(table);
    const std::size_t n = table.size();
    FinBialgebra b;
    b.algebra.module = FinModule(f, n, "K^G");
    b.algebra.mult = Matrix(f, n, n * n);
    for (std::size_t i = 0; i < n; ++i) b.algebra.mult.at(i, i * n + i) = Scalar::one(f);
    b.algebra.unit = Vec(n, Scalar::one(f));
    b.coalgebra.module = b.algebra.module;
    b.coalgebra.comult.resize(n);
    for (std::size_t h = 0; h < n; ++h)
        for (std::size_t k = 0; k < n; ++k)
            b.coalgebra.comult[table[h][k]].push_back({h, k, Scalar::one(f)});
    b.coalgebra.counit = unit_vec(f, n, 0);
    b.validate();
    return b;
}

// ---------------------------------------------------------------------------
// Grouplike elements: enumerated as algebra homomorphisms from the dual
// algebra to K (simultaneous left eigenvectors of its multiplication
// operators).
// ---------------------------------------------------------------------------

namespace detail {

inline Scalar determinant(Matrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
    const Field& f = m.field();
    Scalar det = Scalar::one(f);
    const std::size_t n = m.rows();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pr = c;
        while (pr < n && m.at(pr, c).is_zero()) ++pr;
        if (pr == n) return Scalar::zero(f);
        if (pr != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m.at(c, j), m.at(pr, j));
            det = -det;
        }
        det *= m.at(c, c);
        Scalar inv = m.at(c, c).inverse();
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m.at(i, c).is_zero()) continue;
            Scalar fct = m.at(i, c) * inv;
            for (std::size_t j = c; j < n; ++j) m.at(i, j) -= fct * m.at(c, j);
        }
    }
    return det;
}

inline std::vector<mpz_class> divisors(const mpz_class& v) {
    std::vector<mpz_class> out;
    mpz_class a = abs(v);
    if (a == 0) return out;
    for (mpz_class d = 1; d * d <= a; ++d)
        if (a % d == 0) {
            out.push_back(d);
            if (d * d != a) out.push_back(a / d);
        }
    return out;
}

/// Candidate eigenvalues of m lying in the base field.
inline std::vector<Scalar> field_eigenvalues(const Matrix& m) {
    const Field& f = m.field();
    const std::size_t n = m.rows();
    std::vector<Scalar> out;
    auto is_ev = [&](const Scalar& t) {
        Matrix shifted = m - Matrix::identity(f, n).scaled(t);
        return determinant(shifted).is_zero();
    };
    if (!f.is_rational()) {
        for (unsigned long r = 0; r < f.p; ++r) {
            Scalar t = Scalar::modular(r, f);
            if (is_ev(t)) out.push_back(t);
        }
        return out;
    }
    // char poly by interpolation at integer points, then rational roots
    std::vector<mpq_class> ys;
    for (std::size_t k = 0; k <= n; ++k) {
        Scalar t(f, static_cast<long>(k));
        ys.push_back(determinant(m - Matrix::identity(f, n).scaled(t)).rational_value());
    }
    // Newton's divided differences -> coefficients
    std::vector<std::vector<mpq_class>> dd(n + 1);
    dd[0] = ys;
    for (std::size_t lvl = 1; lvl <= n; ++lvl) {
        dd[lvl].resize(n + 1 - lvl);
        for (std::size_t i = 0; i + lvl <= n; ++i)
            dd[lvl][i] = (dd[lvl - 1][i + 1] - dd[lvl - 1][i]) / lvl;
    }
    // expand sum dd[lvl][0] * x(x-1)...(x-lvl+1)
    std::vector<mpq_class> acc(n + 1, 0), basis = {1};
    for (std::size_t lvl = 0; lvl <= n; ++lvl) {
        for (std::size_t i = 0; i < basis.size(); ++i) acc[i] += dd[lvl][0] * basis[i];
        if (lvl == n) break;
        // basis *= (x - lvl)
        std::vector<mpq_class> nb(basis.size() + 1, 0);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            nb[i + 1] += basis[i];
            nb[i] -= basis[i] * static_cast<long>(lvl);
        }
        basis = nb;
    }
    // clear denominators to an integer polynomial
    mpz_class lcm = 1;
    for (const auto& c : acc) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
    std::vector<mpz_class> ip;
    for (const auto& c : acc) ip.push_back(mpz_class(c * lcm));
    while (ip.size() > 1 && ip.back() == 0) ip.pop_back();
    std::size_t low = 0;
    while (low < ip.size() && ip[low] == 0) ++low;
    if (low == ip.size()) return out;  // zero polynomial: should not happen
    if (low > 0) out.push_back(Scalar::zero(f));
    auto eval = [&](const mpq_class& x) {
        mpq_class v = 0;
        for (std::size_t i = ip.size(); i-- > 0;) v = v * x + ip[i];
        return v;
    };
    for (const auto& pnum : divisors(ip[low]))
        for (const auto& qden : divisors(ip.back()))
            for (int sign : {1, -1}) {
                mpq_class cand(pnum * sign, qden);
                cand.canonicalize();
                if (eval(cand) == 0) {
                    Scalar t = Scalar::rational(cand);
                    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
                }
            }
    return out;
}

/// All algebra homomorphisms A -> K as row vectors (phi(e_i))_i.
inline std::vector<Vec> algebra_homs_to_field(const FinAlgebra& a) {
    const Field& f = a.field();
    const std::size_t n = a.dim();
    std::vector<Vec> results;
    // recursively intersect left-eigenspaces of the multiplication operators
    std::vector<Matrix> lmul;
    for (std::size_t i = 0; i < n; ++i) lmul.push_back(a.left_mult(unit_vec(f, n, i)));
    std::function<void(Matrix, std::size_t)> recurse = [&](Matrix rows, std::size_t i) {
        if (rows.rows() == 0) return;
        if (i == n) {
            // candidates: each row subspace of simultaneous eigenvectors;
            // normalize phi(unit) = 1 and verify multiplicativity
            for (std::size_t r = 0; r < rows.rows(); ++r) {
                Vec phi = rows.row(r);
                Scalar at_unit = Scalar::zero(f);
                for (std::size_t k = 0; k < n; ++k) at_unit += phi[k] * a.unit[k];
                if (at_unit.is_zero()) continue;
                phi = vec_scale(phi, at_unit.inverse());
                bool ok = true;
                for (std::size_t x = 0; x < n && ok; ++x)
                    for (std::size_t y = 0; y < n && ok; ++y) {
                        Vec p = a.product(unit_vec(f, n, x), unit_vec(f, n, y));
                        Scalar lhs = Scalar::zero(f);
                        for (std::size_t k = 0; k < n; ++k) lhs += phi[k] * p[k];
                        ok = lhs == phi[x] * phi[y];
                    }
                if (ok && std::find(results.begin(), results.end(), phi) == results.end())
                    results.push_back(phi);
            }
            return;
        }
        for (const Scalar& t : field_eigenvalues(lmul[i])) {
            // rows c with (c . rows) (L_i - tI) = 0
            Matrix m = rows * (lmul[i] - Matrix::identity(f, n).scaled(t));
            auto combos = kernel_basis(m.transpose());
            if (combos.empty()) continue;
            std::vector<Vec> nb;
            for (const auto& c : combos) {
                Vec v(n, Scalar::zero(f));
                for (std::size_t r = 0; r < rows.rows(); ++r)
                    if (!c[r].is_zero()) v = vec_add(v, vec_scale(rows.row(r), c[r]));
                nb.push_back(v);
            }
            recurse(Matrix::from_columns(f, n, nb).transpose(), i + 1);
        }
    };
    recurse(Matrix::identity(f, n), 0);
    std::sort(results.begin(), results.end(), [](const Vec& x, const Vec& y) {
        for (std::size_t k = 0; k < x.size(); ++k) {
            if (x[k] == y[k]) continue;
            return x[k].str() < y[k].str();
        }
        return false;
    });
    return results;
}

}  // namespace detail

/// All grouplike elements of b that are rational over the base field.
inline std::vector<Vec> grouplike_elements(const FinBialgebra& b) {
    return detail::algebra_homs_to_field(dual_algebra(b.coalgebra));
}

// ---------------------------------------------------------------------------
// Isomorphism search: sound, not complete. Tries the identity, then matching
// of grouplike bases; absence of a result means "unknown".
// ---------------------------------------------------------------------------

inline std::optional<Matrix> bialgebra_isomorphic(const FinBialgebra& b1,
                                                  const FinBialgebra& b2) {
    if (b1.dim() != b2.dim() || b1.field() != b2.field()) return std::nullopt;
    const Field& f = b1.field();
    const std::size_t n = b1.dim();
    Matrix id = Matrix::identity(f, n);
    if (is_bialgebra_morphism(b1, b2, id)) return id;

    auto g1 = grouplike_elements(b1);
    auto g2 = grouplike_elements(b2);
    if (g1.size() != g2.size() || g1.size() < n) return std::nullopt;
    if (g1.size() > n) return std::nullopt;  // grouplikes exceed dimension: bug upstream

    Matrix basis1 = Matrix::from_columns(f, n, g1);
    Matrix basis2 = Matrix::from_columns(f, n, g2);
    if (rank(basis1) != n || rank(basis2) != n) return std::nullopt;

    // grouplikes multiply into grouplikes; build the product tables
    auto table = [&](const FinBialgebra& b, const std::vector<Vec>& g) {
        std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n, n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Vec p = b.algebra.product(g[i], g[j]);
                for (std::size_t k = 0; k < n; ++k)
                    if (p == g[k]) t[i][j] = k;
            }
        return t;
    };
    auto t1 = table(b1, g1);
    auto t2 = table(b2, g2);
    for (const auto& row : t1)
        for (auto v : row)
            if (v >= n) return std::nullopt;
    for (const auto& row : t2)
        for (auto v : row)
            if (v >= n) return std::nullopt;

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = 0; j < n && ok; ++j)
                ok = perm[t1[i][j]] == t2[perm[i]][perm[j]];
        if (!ok) continue;
        // linear map sending grouplike basis to matched grouplike basis
        std::vector<Vec> img_cols;
        for (std::size_t i = 0; i < n; ++i) img_cols.push_back(g2[perm[i]]);
        Matrix rhs = Matrix::from_columns(f, n, img_cols);
        // m . basis1 = rhs  =>  m = rhs . basis1^{-1}; solve columnwise
        Matrix binv(f, n, n);
        for (std::size_t c = 0; c < n; ++c) {
            auto x = solve(basis1, unit_vec(f, n, c));
            if (!x) return std::nullopt;
            for (std::size_t i = 0; i < n; ++i) binv.at(i, c) = (*x)[i];
        }
        Matrix m = rhs * binv;
        if (is_bialgebra_morphism(b1, b2, m) && rank(m) == n) return m;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Stock group tables.
// ---------------------------------------------------------------------------

inline std::vector<std::vector<std::size_t>> cyclic_group_table(std::size_t n) {
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t[i][j] = (i + j) % n;
    return t;
}

inline std::vector<std::vector<std::size_t>> klein_four_table() {
    return {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
}

/// S3 as permutations of {0,1,2}; element 0 is the identity.
inline std::vector<std::vector<std::size_t>> symmetric3_table() {
    const std::vector<std::array<int, 3>> perms = {
        {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
    auto compose = [&](std::size_t a, std::size_t b) {
        std::array<int, 3> c{};
        for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
        for (std::size_t k = 0; k < perms.size(); ++k)
            if (perms[k] == c) return k;
        throw std::logic_error("S3 table");
    };
    std::vector<std::vector<std::size_t>> t(6, std::vector<std::size_t>(6));
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) t[a][b] = compose(a, b);
    return t;
}

}  // namespace reflexa
