#pragma once

#include <chrono>
#include <utility>

#include "reflexa/adjunction.hpp"
#include "reflexa/bialgebra.hpp"
#include "reflexa/finite_dual.hpp"
#include "reflexa/functor.hpp"
#include "reflexa/json_io.hpp"
#include "reflexa/report.hpp"
#include "reflexa/rng.hpp"
#include "reflexa/tower.hpp"

namespace reflexa {

using CheckResult = std::pair<bool, std::string>;  // (passed, witness)

// ---------------------------------------------------------------------------
// 1. Module-level double duality: the unit M -> M** is the identity matrix
//    and dualizing twice returns every map on the nose.
// ---------------------------------------------------------------------------

inline CheckResult check_module_double_dual(const Field&, Rng& rng) {
    for (Field f : {Field::rationals(), Field::gf(7)}) {
        for (int t = 0; t < 100; ++t) {
            FinModule m(f, rng.index(8) + 1);
            FinModule n(f, rng.index(8) + 1);
            LinearMap g(m, n, rng.matrix(f, n.rank, m.rank));
            if (double_dual_unit(m).matrix != Matrix::identity(f, m.rank))
                return {false, "unit not the identity at rank " + std::to_string(m.rank)};
            LinearMap gdd = dual_map(dual_map(g));
            // naturality square: unit_n . g = g** . unit_m
            if (double_dual_unit(n).matrix * g.matrix !=
                gdd.matrix * double_dual_unit(m).matrix)
                return {false, "naturality square fails: " + matrix_to_json(g.matrix).dump()};
        }
    }
    return {true, ""};
}

// ---------------------------------------------------------------------------
// 2. Hom-tensor identity on the reference universe: Nat(M*, N~) has dimension
//    rank(M).rank(N) and the canonical embedding of M (x) N is bijective.
// ---------------------------------------------------------------------------

inline CheckResult check_hom_tensor_identity(const Field& f, Rng&) {
    auto u = std::make_shared<Universe>(reference_universe(f));
    for (std::size_t a = 1; a <= 4; ++a)
        for (std::size_t b = 1; b <= 4; ++b) {
            auto e = hom_tensor_embedding(FinModule(f, a), FinModule(f, b), u);
            if (e.hom_basis.size() != a * b)
                return {false, "dim " + std::to_string(e.hom_basis.size()) + " at ranks " +
                                   std::to_string(a) + "," + std::to_string(b)};
            if (!e.bijective)
                return {false, "embedding not bijective at ranks " + std::to_string(a) + "," +
                                   std::to_string(b)};
        }
    return {true, ""};
}

// ---------------------------------------------------------------------------
// 3. Quasi-coherent Hom reduction: restriction-to-base of the solved space is
//    bijective onto Hom(M, N) for random quasi-coherent pairs.
// ---------------------------------------------------------------------------

inline CheckResult check_quasicoherent_hom_reduction(const Field& f, Rng& rng) {
    auto u = std::make_shared<Universe>(reference_universe(f));
    const std::size_t base = u->base_index;
    for (int t = 0; t < 50; ++t) {
        const std::size_t a = rng.index(4) + 1, b = rng.index(4) + 1;
        auto F = quasicoherent_on_universe(FinModule(f, a), u);
        auto G = quasicoherent_on_universe(FinModule(f, b), u);
        auto basis = nat_hom_space(F, G);
        if (basis.size() != a * b)
            return {false, "dim " + std::to_string(basis.size()) + " at ranks " +
                               std::to_string(a) + "," + std::to_string(b)};
        std::vector<Vec> cols;
        for (const auto& fam : basis) cols.push_back(fam.comps[base].vec());
        Matrix r = Matrix::from_columns(f, a * b, cols);
        if (rank(r) != a * b)
            return {false, "restriction to the base is not bijective at ranks " +
                               std::to_string(a) + "," + std::to_string(b)};
    }
    return {true, ""};
}

// ---------------------------------------------------------------------------
// 4. Base-change adjunction Hom_S(i^*F, G) = Hom_K(F, i_*G) for
//    S = K[x]/(x^2): the two assignment maps are mutually inverse.
// ---------------------------------------------------------------------------

inline CheckResult check_base_change_adjunction(const Field& f, Rng&) {
    {
        auto st = adjunction_setup(truncated_polynomial_algebra(f, 2));
        auto F1 = quasicoherent_on_universe(FinModule(f, 1), st.full);
        auto G1 = quasicoherent_on_universe(FinModule(f, 1), st.rel);
        auto v = verify_adjunction(st, F1, G1);
        if (!v.holds || v.dim_relative != 2)
            return {false, "rank-1 pair over K[x]/(x^2): " + v.detail + " dims " +
                               std::to_string(v.dim_relative) + "," +
                               std::to_string(v.dim_base)};
        auto F2 = quasicoherent_on_universe(FinModule(f, 2), st.full);
        auto v2 = verify_adjunction(st, F2, G1);
        if (!v2.holds || v2.dim_relative != 4) return {false, "rank-2 source: " + v2.detail};
        auto v0 = verify_adjunction(st, F1, zero_functor(st.rel));
        if (!v0.holds || v0.dim_relative != 0) return {false, "zero target: " + v0.detail};
    }
    {
        auto st = adjunction_setup(field_algebra(f));  // S = K: both maps identities
        auto F1 = quasicoherent_on_universe(FinModule(f, 2), st.full);
        auto G1 = quasicoherent_on_universe(FinModule(f, 2), st.rel);
        auto v = verify_adjunction(st, F1, G1);
        if (!v.holds || v.dim_relative != 4) return {false, "trivial S = K case: " + v.detail};
    }
    return {true, ""};
}

// ---------------------------------------------------------------------------
// 5. Determination by the base component: quasi-coherent functors pass, the
//    nilpotent-part functor fails with a printed witness.
// ---------------------------------------------------------------------------

inline CheckResult check_dpq_detection(const Field& f, Rng&) {
    auto u = std::make_shared<Universe>(reference_universe(f));
    for (std::size_t r = 1; r <= 3; ++r) {
        auto v = check_d_proquasicoherent(quasicoherent_on_universe(FinModule(f, r), u));
        if (!v.holds)
            return {false, "quasi-coherent rank " + std::to_string(r) + " flagged"};
    }
    auto bad = check_d_proquasicoherent(nilpotent_part_functor(u));
    if (bad.holds) return {false, "nilpotent-part functor not detected"};
    if (!bad.witness) return {false, "no witness produced"};
    std::size_t at = 0;
    for (std::size_t s = 0; s < bad.witness->comps.size(); ++s)
        if (!bad.witness->comps[s].is_zero()) {
            at = s;
            break;
        }
    std::string w = "nonzero family with zero base component, target rank " +
                    std::to_string(bad.failing_rank) + ", component at algebra " +
                    std::to_string(at) + ": " +
                    matrix_to_json(bad.witness->comps[at]).dump();
    return {true, w};
}

// ---------------------------------------------------------------------------
// 6. Tower calculus: stabilization, product decomposition bookkeeping,
//    splittings conjugating the maps to truncations, and duality round-trip.
// ---------------------------------------------------------------------------

inline Tower random_tower(const Field& f, Rng& rng, std::size_t max_len = 6,
                          std::size_t max_dim = 5) {
    Tower t;
    const std::size_t len = rng.index(max_len - 1) + 2;
    for (std::size_t n = 0; n < len; ++n) t.levels.emplace_back(f, rng.index(max_dim) + 1);
    for (std::size_t n = 0; n + 1 < len; ++n)
        t.maps.emplace_back(t.levels[n + 1], t.levels[n],
                            rng.matrix(f, t.levels[n].rank, t.levels[n + 1].rank, -3, 3));
    t.validate();
    return t;
}

inline CheckResult check_tower_calculus(const Field& f, Rng& rng) {
    for (int t = 0; t < 100; ++t) {
        Tower raw = random_tower(f, rng);
        StabilizedTower st = stabilized_images(raw);
        const Tower& s = st.tower;
        if (!tower_maps_surjective(s)) return {false, "stabilized maps not surjective"};
        ProductDecomposition d = product_decomposition(s);  // bookkeeping asserted inside
        for (std::size_t k = 1; k < s.depth(); ++k) {
            // the splitting conjugates the connecting map to the truncation
            Matrix lhs = s.maps[k - 1].matrix * d.splittings[k];
            Matrix rhs = d.splittings[k - 1] * truncation_matrix(d, k, f);
            if (lhs != rhs)
                return {false, "splitting does not conjugate map " + std::to_string(k) +
                                   " to a truncation"};
        }
        if (!reflexivity_roundtrip(s)) return {false, "dual-of-dual does not recover tower"};
    }
    return {true, ""};
}

// ---------------------------------------------------------------------------
// 7. Kernel splitting P = Ker f (+) K.v on the power-series tower and random
//    stabilized towers.
// ---------------------------------------------------------------------------

inline CheckResult check_kernel_splitting(const Field& f, Rng& rng) {
    {
        AlgebraTower ps = power_series_tower(f, 8);
        const Tower& t = ps.tower;
        std::vector<Vec> fs;
        // evaluation of the constant term, one row per level
        for (std::size_t n = 0; n < t.depth(); ++n) {
            Vec v(t.levels[n].rank, Scalar::zero(f));
            v[0] = Scalar::one(f);
            fs.push_back(std::move(v));
        }
        KernelTower k = kernel_tower(fs, t);
        for (std::size_t n = 0; n < t.depth(); ++n)
            if (k.kernel.levels[n].rank + 1 != t.levels[n].rank)
                return {false, "power-series kernel has wrong codimension"};
    }
    for (int t = 0; t < 50; ++t) {
        Tower s = stabilized_images(random_tower(f, rng)).tower;
        // compatible functionals: pick one at the bottom and pull it up
        Vec f0 = rng.vector(f, s.levels[0].rank, -3, 3);
        std::vector<Vec> fs;
        for (std::size_t n = 0; n < s.depth(); ++n) {
            Matrix row = Matrix::from_columns(f, s.levels[0].rank, {f0}).transpose() *
                         s.composite(n, 0);
            fs.push_back(row.row(0));
        }
        KernelTower k = kernel_tower(fs, s);  // splitting asserted inside
        if (!k.is_zero_functional && !k.pivot) return {false, "missing pivot element"};
    }
    return {true, ""};
}

// ---------------------------------------------------------------------------
// 8. Bialgebra duality: duals of all fixtures validate, double duals are
//    isomorphic to the originals, and the group/function pairing is found.
// ---------------------------------------------------------------------------

inline std::vector<std::pair<std::string, std::vector<std::vector<std::size_t>>>>
bialgebra_fixture_groups() {
    return {{"Z1", cyclic_group_table(1)},
            {"Z2", cyclic_group_table(2)},
            {"Z3", cyclic_group_table(3)},
            {"Z2xZ2", klein_four_table()},
            {"S3", symmetric3_table()}};
}

inline CheckResult check_bialgebra_duality(const Field& f, Rng&) {
    for (const auto& [name, table] : bialgebra_fixture_groups()) {
        for (bool functions : {false, true}) {
            FinBialgebra b =
                functions ? function_bialgebra(table, f) : group_bialgebra(table, f);
            FinBialgebra d = dual_bialgebra(b);   // validates internally
            FinBialgebra dd = dual_bialgebra(d);  // validates internally
            if (!bialgebra_isomorphic(dd, b))
                return {false, name + (functions ? " functions" : " group") +
                                   ": double dual not matched"};
        }
        if (!bialgebra_isomorphic(dual_bialgebra(group_bialgebra(table, f)),
                                  function_bialgebra(table, f)))
            return {false, name + ": dual of the group bialgebra not matched to functions"};
    }
    return {true, ""};
}

// ---------------------------------------------------------------------------
// 9. Transpose duality: transposes of verified fixture morphisms into duals
//    are verified morphisms, and double transpose recovers the original.
// ---------------------------------------------------------------------------

inline CheckResult check_transpose_duality(const Field& f, Rng&) {
    for (const auto& [name, table] : bialgebra_fixture_groups()) {
        FinBialgebra kg = group_bialgebra(table, f);
        FinBialgebra fg = function_bialgebra(table, f);
        // identity K[G] -> (K^G)* (the two sides share structure constants)
        Matrix id = Matrix::identity(f, kg.dim());
        Matrix t = transpose_bialgebra_morphism(kg, fg, id);  // verifies both directions
        if (t.transpose() != id) return {false, name + ": double transpose drifts"};
        // unit morphism K -> (K^G)* sending 1 to the counit
        FinBialgebra unit_b = group_bialgebra(cyclic_group_table(1), f);
        Matrix eps = Matrix::from_columns(f, fg.dim(), {dual_bialgebra(fg).algebra.unit});
        Matrix te = transpose_bialgebra_morphism(unit_b, fg, eps);
        if (te.transpose() != eps) return {false, name + ": unit transpose drifts"};
    }
    return {true, ""};
}

// ---------------------------------------------------------------------------
// 10. Finite dual of K[x]: product identities, Fibonacci-squared recurrence
//     against a brute-force minimal-recurrence oracle, and the degree bound.
// ---------------------------------------------------------------------------

/// Brute-force minimal recurrence degree over all windows of the terms.
inline std::size_t oracle_min_recurrence_degree(const std::vector<Scalar>& terms,
                                                const Field& f) {
    for (std::size_t e = 1; e <= terms.size(); ++e) {
        const std::size_t rows = terms.size() - e;
        Matrix m(f, rows, e);
        Vec rhs(rows, Scalar::zero(f));
        for (std::size_t n = 0; n < rows; ++n) {
            for (std::size_t i = 0; i < e; ++i) m.at(n, i) = terms[n + i];
            rhs[n] = -terms[n + e];
        }
        if (solve(m, rhs)) return e;
    }
    return terms.size();
}

inline CheckResult check_finite_dual(const Field& f, Rng& rng) {
    // grouplike: geometric(r) . geometric(s) = geometric(rs)
    for (int t = 0; t < 20; ++t) {
        Scalar r = rng.nonzero_scalar(f), s = rng.nonzero_scalar(f);
        auto prod = multiply(geometric(r, FunctionalModel::grouplike),
                             geometric(s, FunctionalModel::grouplike));
        if (!functionals_equal(prod, geometric(r * s, FunctionalModel::grouplike)))
            return {false, "geometric(" + r.str() + ").geometric(" + s.str() + ")"};
    }
    // primitive: ones . ones = 2^n
    auto ones = geometric(Scalar::one(f), FunctionalModel::primitive);
    auto doubles = multiply(ones, ones);
    if (!functionals_equal(doubles, geometric(Scalar(f, 2), FunctionalModel::primitive)))
        return {false, "ones.ones is not 2^n"};
    // grouplike Fibonacci squared vs brute-force oracle over 20 terms
    auto fib = fibonacci_functional(FunctionalModel::grouplike, f);
    auto fib2 = multiply(fib, fib);
    if (fib2.degree() > 4) return {false, "Fibonacci^2 exceeds degree 4"};
    std::vector<Scalar> sq;
    for (std::size_t n = 0; n < 20; ++n) {
        Scalar v = evaluate(fib, n);
        sq.push_back(v * v);
    }
    if (oracle_min_recurrence_degree(sq, f) != fib2.degree())
        return {false, "Fibonacci^2 degree disagrees with the oracle"};
    if (functional_prefix(fib2, 20) != sq)
        return {false, "Fibonacci^2 values disagree with direct squaring"};
    // degree bound across 500 random products; multiply throws if exceeded
    for (int t = 0; t < 500; ++t) {
        FunctionalModel model =
            rng.index(2) == 0 ? FunctionalModel::grouplike : FunctionalModel::primitive;
        auto rand_fn = [&] {
            RecursiveFunctional r;
            r.model = model;
            r.field = f;
            const std::size_t d = rng.index(4) + 1;
            for (std::size_t i = 0; i < d; ++i) r.annihilator.push_back(rng.scalar(f, -3, 3));
            r.annihilator.push_back(Scalar::one(f));
            r.values = rng.vector(f, d, -3, 3);
            return r;
        };
        auto a = rand_fn(), b = rand_fn();
        RecursiveFunctional p = multiply(a, b);
        if (p.degree() > a.degree() * b.degree())
            return {false, "product degree exceeds the d1*d2 bound"};
        // spot-check the first terms against the defining formula
        auto ta = functional_prefix(a, 8), tb = functional_prefix(b, 8);
        std::vector<Scalar> binom = {Scalar::one(f)};
        for (std::size_t n = 0; n < 8; ++n) {
            Scalar expect = Scalar::zero(f);
            if (model == FunctionalModel::grouplike) {
                expect = ta[n] * tb[n];
            } else {
                for (std::size_t k = 0; k <= n; ++k) expect += binom[k] * ta[k] * tb[n - k];
            }
            if (evaluate(p, n) != expect) return {false, "product value drifts"};
            std::vector<Scalar> next(n + 2, Scalar::one(f));
            for (std::size_t i = 1; i <= n; ++i) next[i] = binom[i - 1] + binom[i];
            binom = std::move(next);
        }
    }
    return {true, ""};
}

// ---------------------------------------------------------------------------
// 11. Power series: invert(1-x) = sum x^k to depth 10; completed tensor of
//     power-series towers has level dims (n+1)^2 and validates per level.
// ---------------------------------------------------------------------------

inline CheckResult check_power_series(const Field& f, Rng&) {
    Vec one_minus_x(11, Scalar::zero(f));
    one_minus_x[0] = Scalar::one(f);
    one_minus_x[1] = -Scalar::one(f);
    Vec inv = ps_invert(one_minus_x, f);
    for (const auto& c : inv)
        if (!c.is_one()) return {false, "invert(1-x) is not the all-ones series"};
    if (ps_mul(one_minus_x, inv, f) != unit_vec(f, 11, 0))
        return {false, "inverse does not multiply back to 1"};
    AlgebraTower a = power_series_tower(f, 3);
    AlgebraTower c = completed_tensor(a, a);  // per-level validation inside
    for (std::size_t n = 0; n < c.tower.depth(); ++n)
        if (c.tower.levels[n].rank != (n + 1) * (n + 1))
            return {false, "completed tensor level " + std::to_string(n) + " has rank " +
                               std::to_string(c.tower.levels[n].rank)};
    return {true, ""};
}

// ---------------------------------------------------------------------------
// Suite assembly.
// ---------------------------------------------------------------------------

struct SuiteCheck {
    std::string name;
    std::string anchor;
    CheckResult (*run)(const Field&, Rng&);
};

inline const std::vector<SuiteCheck>& acceptance_checks() {
    static const std::vector<SuiteCheck> checks = {
        {"module-double-dual", "M** = M", check_module_double_dual},
        {"hom-tensor-identity", "Hom(M*, N~) = M (x) N", check_hom_tensor_identity},
        {"quasicoherent-hom-reduction", "Nat(M~, N~) = Hom(M, N)",
         check_quasicoherent_hom_reduction},
        {"base-change-adjunction", "Hom_S(i*F, G) = Hom_K(F, i_*G)",
         check_base_change_adjunction},
        {"base-determination", "F* -> F(K)* injective", check_dpq_detection},
        {"tower-calculus", "lim M_n = prod H_n and (lim M_n)** = lim M_n",
         check_tower_calculus},
        {"kernel-splitting", "P = Ker f (+) K.v", check_kernel_splitting},
        {"bialgebra-duality", "B |-> B* is an anti-equivalence", check_bialgebra_duality},
        {"transpose-duality", "Hom(A, B*) = Hom(B, A*)", check_transpose_duality},
        {"finite-dual", "K[x]o = linearly recursive functionals", check_finite_dual},
        {"power-series", "K[[x]] = lim K[x]/(x^n)", check_power_series},
    };
    return checks;
}

inline Report run_acceptance_suite(const Field& f, const std::string& only = "all") {
    Report rep;
    rep.seed = suite_seed();
    for (const auto& c : acceptance_checks()) {
        if (only != "all" && only != c.name) continue;
        Rng rng(rep.seed);  // each check reproducible in isolation
        CheckRecord rec;
        rec.name = c.name;
        rec.anchor = c.anchor;
        auto t0 = std::chrono::steady_clock::now();
        try {
            auto [ok, witness] = c.run(f, rng);
            rec.status = ok ? "pass" : "fail";
            rec.witness = witness;
        } catch (const std::exception& e) {
            rec.status = "fail";
            rec.witness = std::string("exception: ") + e.what();
        }
        if (rec.status != "pass") {
            const std::string flag = f.is_rational() ? "Q" : "GF:" + std::to_string(f.p);
            rec.reproduce = "REFLEXA_SEED=" + std::to_string(rep.seed) +
                            " reflexa report --suite " + c.name + " --field " + flag;
        }
        rec.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.records.push_back(std::move(rec));
    }
    return rep;
}

}  // namespace reflexa
