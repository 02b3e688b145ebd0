#pragma once

#include <optional>
#include <vector>

#include "reflexa/matrix.hpp"

namespace reflexa {

/// Which bialgebra structure on K[x] induces the product of functionals:
/// primitive (Delta x = x (x) 1 + 1 (x) x, binomial convolution) or
/// grouplike (Delta x = x (x) x, Hadamard product).
enum class FunctionalModel { primitive, grouplike };

inline const char* model_name(FunctionalModel m) {
    return m == FunctionalModel::primitive ? "primitive" : "grouplike";
}

/// A linearly recursive functional on K[x]: lambda(x^n) satisfies the monic
/// recurrence given by `annihilator` (coefficients c_0..c_d, c_d = 1, d >= 1),
/// seeded by `values` = lambda(1), lambda(x), ..., lambda(x^{d-1}).
struct RecursiveFunctional {
    FunctionalModel model = FunctionalModel::grouplike;
    Field field;
    std::vector<Scalar> annihilator;
    std::vector<Scalar> values;

    std::size_t degree() const { return annihilator.size() - 1; }

    void validate() const {
        if (annihilator.size() < 2)
            throw std::invalid_argument("functional: annihilator must have degree >= 1");
        if (!annihilator.back().is_one())
            throw std::invalid_argument("functional: annihilator must be monic");
        if (values.size() != degree())
            throw std::invalid_argument("functional: need exactly degree-many seed values");
        for (const auto& c : annihilator) require_same_field(c.field(), field);
        for (const auto& v : values) require_same_field(v.field(), field);
    }
};

/// First `count` terms lambda(1), lambda(x), ... by recurrence unrolling.
inline std::vector<Scalar> functional_prefix(const RecursiveFunctional& r, std::size_t count) {
    r.validate();
    std::vector<Scalar> s = r.values;
    s.resize(std::max(count, s.size()), Scalar::zero(r.field));
    const std::size_t d = r.degree();
    for (std::size_t n = d; n < count; ++n) {
        Scalar acc = Scalar::zero(r.field);
        for (std::size_t i = 0; i < d; ++i) acc += r.annihilator[i] * s[n - d + i];
        s[n] = -acc;
    }
    s.resize(count, Scalar::zero(r.field));
    return s;
}

inline Scalar evaluate(const RecursiveFunctional& r, std::size_t n) {
    return functional_prefix(r, n + 1)[n];
}

namespace detail {

/// Smallest monic recurrence of degree in [1, max_degree] annihilating the
/// whole term list, found as a Hankel-system solution; free unknowns are set
/// to zero, so the result is canonical for a fixed term list.
inline std::optional<std::vector<Scalar>> fit_recurrence(const std::vector<Scalar>& terms,
                                                         std::size_t max_degree,
                                                         const Field& f) {
    for (std::size_t e = 1; e <= max_degree; ++e) {
        if (e > terms.size()) break;  // cannot even seed the values
        const std::size_t rows = terms.size() - e;
        Matrix m(f, rows, e);
        Vec rhs(rows, Scalar::zero(f));
        for (std::size_t n = 0; n < rows; ++n) {
            for (std::size_t i = 0; i < e; ++i) m.at(n, i) = terms[n + i];
            rhs[n] = -terms[n + e];
        }
        auto c = rows == 0 ? std::optional<Vec>(Vec(e, Scalar::zero(f))) : solve(m, rhs);
        if (!c) continue;
        std::vector<Scalar> ann = *c;
        ann.push_back(Scalar::one(f));
        return ann;
    }
    return std::nullopt;
}

inline bool all_zero(const std::vector<Scalar>& terms) {
    for (const auto& t : terms)
        if (!t.is_zero()) return false;
    return true;
}

inline RecursiveFunctional zero_functional(FunctionalModel model, const Field& f) {
    return RecursiveFunctional{model, f, {Scalar::zero(f), Scalar::one(f)}, {Scalar::zero(f)}};
}

}  // namespace detail

/// Canonical representative: the minimal-degree monic annihilator; the zero
/// functional normalizes to annihilator x, values [0].
inline RecursiveFunctional minimize(const RecursiveFunctional& r) {
    r.validate();
    const std::size_t d = r.degree();
    auto terms = functional_prefix(r, 3 * d);
    if (detail::all_zero(terms)) return detail::zero_functional(r.model, r.field);
    auto ann = detail::fit_recurrence(terms, d, r.field);
    if (!ann) throw std::logic_error("minimize: input annihilator does not refit");
    RecursiveFunctional out{r.model, r.field, *ann, {}};
    out.values.assign(terms.begin(), terms.begin() + (ann->size() - 1));
    out.validate();
    return out;
}

inline std::vector<Scalar> poly_mul(const std::vector<Scalar>& a, const std::vector<Scalar>& b,
                                    const Field& f) {
    std::vector<Scalar> out(a.size() + b.size() - 1, Scalar::zero(f));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

inline RecursiveFunctional add(const RecursiveFunctional& a, const RecursiveFunctional& b) {
    if (a.model != b.model) throw std::invalid_argument("add: model mismatch");
    require_same_field(a.field, b.field);
    a.validate();
    b.validate();
    const std::size_t d = a.degree() + b.degree();
    auto ta = functional_prefix(a, d);
    auto tb = functional_prefix(b, d);
    RecursiveFunctional sum{a.model, a.field, poly_mul(a.annihilator, b.annihilator, a.field), {}};
    for (std::size_t i = 0; i < d; ++i) sum.values.push_back(ta[i] + tb[i]);
    return minimize(sum);
}

/// Pascal triangle row n of binomial coefficients, computed in the field
/// (over GF(p) this is the binomial mod p).
inline std::vector<Scalar> binomial_row(std::size_t n, const Field& f) {
    std::vector<Scalar> row = {Scalar::one(f)};
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<Scalar> next(k + 1, Scalar::one(f));
        for (std::size_t i = 1; i < k; ++i) next[i] = row[i - 1] + row[i];
        row = next;
    }
    return row;
}

inline RecursiveFunctional multiply(const RecursiveFunctional& a, const RecursiveFunctional& b) {
    if (a.model != b.model) throw std::invalid_argument("multiply: model mismatch");
    require_same_field(a.field, b.field);
    a.validate();
    b.validate();
    const std::size_t bound = a.degree() * b.degree();
    const std::size_t total = 5 * bound;  // 2d to fit, 3d margin to verify
    auto ta = functional_prefix(a, total);
    auto tb = functional_prefix(b, total);
    std::vector<Scalar> c(total, Scalar::zero(a.field));
    if (a.model == FunctionalModel::grouplike) {
        for (std::size_t n = 0; n < total; ++n) c[n] = ta[n] * tb[n];
    } else {
        std::vector<Scalar> binom = {Scalar::one(a.field)};  // Pascal row, grown in place
        for (std::size_t n = 0; n < total; ++n) {
            for (std::size_t k = 0; k <= n; ++k) c[n] += binom[k] * ta[k] * tb[n - k];
            std::vector<Scalar> next(n + 2, Scalar::one(a.field));
            for (std::size_t i = 1; i <= n; ++i) next[i] = binom[i - 1] + binom[i];
            binom = std::move(next);
        }
    }
    if (detail::all_zero(c)) return detail::zero_functional(a.model, a.field);
    std::vector<Scalar> fit_terms(c.begin(), c.begin() + 2 * bound);
    auto ann = detail::fit_recurrence(fit_terms, bound, a.field);
    if (!ann)
        throw std::logic_error("multiply: no recurrence within the degree bound d1*d2");
    const std::size_t e = ann->size() - 1;
    for (std::size_t n = 0; n + e < total; ++n) {
        Scalar acc = Scalar::zero(a.field);
        for (std::size_t i = 0; i <= e; ++i) acc += (*ann)[i] * c[n + i];
        if (!acc.is_zero())
            throw std::logic_error("multiply: fitted recurrence fails on verification margin");
    }
    RecursiveFunctional prod{a.model, a.field, *ann, {}};
    prod.values.assign(c.begin(), c.begin() + e);
    return minimize(prod);
}

/// Smallest functional of degree <= max_degree whose values reproduce the
/// whole prefix, or absent if none exists.
inline std::optional<RecursiveFunctional> from_prefix(const std::vector<Scalar>& prefix,
                                                      std::size_t max_degree,
                                                      FunctionalModel model, const Field& f) {
    if (prefix.empty()) return std::nullopt;
    if (detail::all_zero(prefix)) return detail::zero_functional(model, f);
    for (std::size_t e = 1; e <= max_degree && e <= prefix.size(); ++e) {
        auto ann = detail::fit_recurrence(
            std::vector<Scalar>(prefix.begin(), prefix.end()), e, f);
        if (!ann || ann->size() - 1 != e) continue;
        RecursiveFunctional r{model, f, *ann,
                              std::vector<Scalar>(prefix.begin(), prefix.begin() + e)};
        if (functional_prefix(r, prefix.size()) == prefix) return r;
    }
    return std::nullopt;
}

/// Multiplicative unit: ones for the grouplike model, the delta functional
/// at 0 for the primitive model.
inline RecursiveFunctional model_unit(FunctionalModel model, const Field& f) {
    if (model == FunctionalModel::grouplike)
        return RecursiveFunctional{model, f, {-Scalar::one(f), Scalar::one(f)}, {Scalar::one(f)}};
    return RecursiveFunctional{model, f, {Scalar::zero(f), Scalar::one(f)}, {Scalar::one(f)}};
}

inline RecursiveFunctional geometric(const Scalar& ratio, FunctionalModel model) {
    const Field& f = ratio.field();
    return RecursiveFunctional{model, f, {-ratio, Scalar::one(f)}, {Scalar::one(f)}};
}

inline RecursiveFunctional fibonacci_functional(FunctionalModel model, const Field& f) {
    return RecursiveFunctional{
        model, f, {-Scalar::one(f), -Scalar::one(f), Scalar::one(f)},
        {Scalar::zero(f), Scalar::one(f)}};
}

inline bool functionals_equal(const RecursiveFunctional& a, const RecursiveFunctional& b) {
    if (a.model != b.model || a.field != b.field) return false;
    auto ma = minimize(a), mb = minimize(b);
    return ma.annihilator == mb.annihilator && ma.values == mb.values;
}

}  // namespace reflexa
