#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "reflexa/algebra.hpp"

namespace reflexa {

/// A natural family (f_S)_S: one matrix per universe algebra.
struct NatFamily {
    std::vector<Matrix> comps;

    bool operator==(const NatFamily& o) const { return comps == o.comps; }
};

/// A functor of modules presented as finite data on a universe: a module and
/// an action map S (x) M_S -> M_S per algebra (column index k*rank+i for
/// s_k (x) e_i), and a transition map per listed morphism.
struct FunctorOnUniverse {
    std::shared_ptr<const Universe> universe;
    std::vector<FinModule> modules;
    std::vector<Matrix> actions;
    std::vector<Matrix> transitions;  // aligned with universe->morphisms

    const Field& field() const { return universe->field(); }
    std::size_t rank_at(std::size_t s) const { return modules.at(s).rank; }

    void validate() const {
        const Universe& u = *universe;
        if (modules.size() != u.algebras.size() || actions.size() != u.algebras.size() ||
            transitions.size() != u.morphisms.size())
            throw std::invalid_argument("functor: data not aligned with universe");
        for (std::size_t s = 0; s < modules.size(); ++s) {
            const std::size_t n = u.algebras[s].dim(), m = modules[s].rank;
            const Matrix& act = actions[s];
            if (act.rows() != m || act.cols() != n * m)
                throw std::invalid_argument("functor: bad action shape");
            Matrix idm = Matrix::identity(field(), m);
            Matrix un = Matrix::from_columns(field(), n, {u.algebras[s].unit});
            if (act * kron(un, idm) != idm)
                throw std::invalid_argument("functor: action not unital");
            Matrix idn = Matrix::identity(field(), n);
            if (act * kron(idn, act) != act * kron(u.algebras[s].mult, idm))
                throw std::invalid_argument("functor: action not associative");
        }
        for (std::size_t k = 0; k < transitions.size(); ++k) {
            const auto& mor = u.morphisms[k];
            const Matrix& t = transitions[k];
            if (t.rows() != modules[mor.dst].rank || t.cols() != modules[mor.src].rank)
                throw std::invalid_argument("functor: bad transition shape");
            if (mor.src == mor.dst && mor.matrix == Matrix::identity(field(), u.algebras[mor.src].dim()))
                if (t != Matrix::identity(field(), modules[mor.src].rank))
                    throw std::invalid_argument("functor: identity morphism has non-identity transition");
            // semilinearity: t . act_src = act_dst . (phi (x) t)
            if (t * actions[mor.src] != actions[mor.dst] * kron(mor.matrix, t))
                throw std::invalid_argument("functor: transition not semilinear");
        }
        // functoriality on composites
        for (std::size_t a = 0; a < transitions.size(); ++a)
            for (std::size_t b = 0; b < transitions.size(); ++b) {
                const auto& ma = u.morphisms[a];
                const auto& mb = u.morphisms[b];
                if (ma.dst != mb.src) continue;
                std::size_t c = u.find_morphism(ma.src, mb.dst, mb.matrix * ma.matrix);
                if (c == u.morphisms.size())
                    throw std::invalid_argument("functor: universe not closed");
                if (transitions[c] != transitions[b] * transitions[a])
                    throw std::invalid_argument("functor: transitions not functorial");
            }
    }
};

/// The quasi-coherent functor of m: S |-> m (x) S (index i*dim(S)+j) with the
/// multiplication action and transitions id (x) phi.
inline FunctorOnUniverse quasicoherent_on_universe(const FinModule& m,
                                                   std::shared_ptr<const Universe> u) {
    require_same_field(m.field, u->field());
    FunctorOnUniverse f;
    f.universe = u;
    const Field& fld = m.field;
    for (const auto& alg : u->algebras) {
        const std::size_t n = alg.dim(), r = m.rank * n;
        f.modules.emplace_back(fld, r);
        // act(s_k (x) (e_i (x) s_j)) = e_i (x) (s_k s_j)
        Matrix act(fld, r, n * r);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < m.rank; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    Vec p = alg.product(unit_vec(fld, n, k), unit_vec(fld, n, j));
                    std::size_t col = k * r + i * n + j;
                    for (std::size_t l = 0; l < n; ++l) act.at(i * n + l, col) = p[l];
                }
        f.actions.push_back(std::move(act));
    }
    Matrix idm = Matrix::identity(fld, m.rank);
    for (const auto& mor : u->morphisms) f.transitions.push_back(kron(idm, mor.matrix));
    f.validate();
    return f;
}

/// Zero functor.
inline FunctorOnUniverse zero_functor(std::shared_ptr<const Universe> u) {
    FinModule zero(u->field(), 0);
    return quasicoherent_on_universe(zero, std::move(u));
}

// ---------------------------------------------------------------------------
// The solver: basis of all S-linear natural families F -> G.
// ---------------------------------------------------------------------------

inline std::vector<NatFamily> nat_hom_space(const FunctorOnUniverse& F,
                                            const FunctorOnUniverse& G) {
    if (F.universe != G.universe)
        throw std::invalid_argument("nat_hom_space: universe mismatch");
    require_same_field(F.field(), G.field());
    const Universe& u = *F.universe;
    const Field& fld = F.field();
    const std::size_t na = u.algebras.size();

    // unknown layout: row-major vec of f_S, blocks per algebra
    std::vector<std::size_t> off(na + 1, 0);
    for (std::size_t s = 0; s < na; ++s)
        off[s + 1] = off[s] + G.rank_at(s) * F.rank_at(s);

    SparseEliminator elim(fld, off[na]);
    auto acc = [&](std::map<std::size_t, Scalar>& row, std::size_t idx, const Scalar& v) {
        row.try_emplace(idx, Scalar::zero(fld)).first->second += v;
    };
    auto emit = [&](std::map<std::size_t, Scalar>& row) {
        SparseRow r;
        for (auto& [c, v] : row)
            if (!v.is_zero()) r.emplace_back(c, v);
        if (!r.empty()) elim.add_row(std::move(r));
        row.clear();
    };

    // S-linearity along algebra generators; linearity for products and sums
    // follows from the validated action axioms.
    for (std::size_t s = 0; s < na; ++s) {
        const std::size_t mF = F.rank_at(s), mG = G.rank_at(s);
        const Matrix& actF = F.actions[s];
        const Matrix& actG = G.actions[s];
        std::map<std::size_t, Scalar> row;
        for (std::size_t k : algebra_generators(u.algebras[s]))
            for (std::size_t i = 0; i < mG; ++i)
                for (std::size_t j = 0; j < mF; ++j) {
                    // (f_S . actF)(i, k*mF+j) - (actG . (I (x) f_S))(i, k*mF+j) = 0
                    for (std::size_t b = 0; b < mF; ++b) {
                        const Scalar& c = actF.at(b, k * mF + j);
                        if (!c.is_zero()) acc(row, off[s] + i * mF + b, c);
                    }
                    for (std::size_t a = 0; a < mG; ++a) {
                        const Scalar& c = actG.at(i, k * mG + a);
                        if (!c.is_zero()) acc(row, off[s] + a * mF + j, -c);
                    }
                    emit(row);
                }
    }

    // naturality along generator morphisms; composites are implied by the
    // validated functoriality of the transitions.
    const auto& gens = u.generator_morphisms.empty() ? u.morphisms : u.generator_morphisms;
    for (const auto& mor : gens) {
        const std::size_t idx = u.find_morphism(mor.src, mor.dst, mor.matrix);
        if (idx == u.morphisms.size())
            throw std::logic_error("nat_hom_space: generator morphism not listed");
        const Matrix& tF = F.transitions[idx];
        const Matrix& tG = G.transitions[idx];
        const std::size_t mFs = F.rank_at(mor.src), mGd = G.rank_at(mor.dst);
        const std::size_t mGs = G.rank_at(mor.src), mFd = F.rank_at(mor.dst);
        std::map<std::size_t, Scalar> row;
        for (std::size_t i = 0; i < mGd; ++i)
            for (std::size_t j = 0; j < mFs; ++j) {
                // (tG . f_src)(i,j) - (f_dst . tF)(i,j) = 0
                for (std::size_t a = 0; a < mGs; ++a)
                    if (!tG.at(i, a).is_zero())
                        acc(row, off[mor.src] + a * mFs + j, tG.at(i, a));
                for (std::size_t b = 0; b < mFd; ++b)
                    if (!tF.at(b, j).is_zero())
                        acc(row, off[mor.dst] + i * mFd + b, -tF.at(b, j));
                emit(row);
            }
    }

    std::vector<NatFamily> basis;
    for (const auto& kv : elim.kernel()) {
        NatFamily fam;
        for (std::size_t s = 0; s < na; ++s) {
            Vec block(kv.begin() + static_cast<long>(off[s]),
                      kv.begin() + static_cast<long>(off[s + 1]));
            fam.comps.push_back(Matrix::unvec(fld, G.rank_at(s), F.rank_at(s), block));
        }
        basis.push_back(std::move(fam));
    }
    return basis;
}

inline Vec nat_family_vec(const NatFamily& fam) {
    Vec v;
    for (const auto& c : fam.comps) {
        Vec cv = c.vec();
        v.insert(v.end(), cv.begin(), cv.end());
    }
    return v;
}

/// Coordinates of g in the span of basis families, if it lies there.
inline std::optional<Vec> coordinates_in_basis(const std::vector<NatFamily>& basis,
                                               const NatFamily& g, const Field& fld) {
    Vec gv = nat_family_vec(g);
    std::vector<Vec> cols;
    cols.reserve(basis.size());
    for (const auto& b : basis) cols.push_back(nat_family_vec(b));
    Matrix B = Matrix::from_columns(fld, gv.size(), cols);
    return solve(B, gv);
}

// ---------------------------------------------------------------------------
// Dual functor on the universe: (F*)(S) = Nat(F, quasicoherent(S)).
// ---------------------------------------------------------------------------

struct DualOnUniverse {
    FunctorOnUniverse functor;
    /// Basis of Nat(F, quasicoherent(S_module)) per algebra S; coordinates of
    /// functor data refer to these bases.
    std::vector<std::vector<NatFamily>> bases;
};

inline DualOnUniverse dual_on_universe(const FunctorOnUniverse& F) {
    const Universe& u = *F.universe;
    const Field& fld = F.field();
    DualOnUniverse d;
    d.functor.universe = F.universe;

    std::vector<FunctorOnUniverse> qc;  // quasicoherent(S_module) per algebra
    for (const auto& alg : u.algebras)
        qc.push_back(quasicoherent_on_universe(FinModule(fld, alg.dim()), F.universe));
    for (std::size_t s = 0; s < u.algebras.size(); ++s)
        d.bases.push_back(nat_hom_space(F, qc[s]));

    auto coords_or_throw = [&](std::size_t s, const NatFamily& g) {
        auto c = coordinates_in_basis(d.bases[s], g, fld);
        if (!c)
            throw std::domain_error(
                "dual_on_universe: universe not closed under the needed tensor algebras");
        return *c;
    };

    for (std::size_t s = 0; s < u.algebras.size(); ++s) {
        const TestAlgebra& alg = u.algebras[s];
        const std::size_t n = alg.dim(), r = d.bases[s].size();
        d.functor.modules.emplace_back(fld, r);
        // action: (s_k . w)_T = (leftmult(s_k) (x) id_T) . w_T
        Matrix act(fld, r, n * r);
        for (std::size_t k = 0; k < n; ++k) {
            Matrix lm = alg.left_mult(unit_vec(fld, n, k));
            for (std::size_t c = 0; c < r; ++c) {
                NatFamily moved;
                for (std::size_t t = 0; t < u.algebras.size(); ++t)
                    moved.comps.push_back(
                        kron(lm, Matrix::identity(fld, u.algebras[t].dim())) *
                        d.bases[s][c].comps[t]);
                Vec coords = coords_or_throw(s, moved);
                for (std::size_t i = 0; i < r; ++i) act.at(i, k * r + c) = coords[i];
            }
        }
        d.functor.actions.push_back(std::move(act));
    }
    for (const auto& mor : u.morphisms) {
        const std::size_t rs = d.bases[mor.src].size(), rd = d.bases[mor.dst].size();
        Matrix t(fld, rd, rs);
        for (std::size_t c = 0; c < rs; ++c) {
            NatFamily moved;
            for (std::size_t tt = 0; tt < u.algebras.size(); ++tt)
                moved.comps.push_back(
                    kron(mor.matrix, Matrix::identity(fld, u.algebras[tt].dim())) *
                    d.bases[mor.src][c].comps[tt]);
            Vec coords = coords_or_throw(mor.dst, moved);
            for (std::size_t i = 0; i < rd; ++i) t.at(i, c) = coords[i];
        }
        d.functor.transitions.push_back(std::move(t));
    }
    d.functor.validate();
    return d;
}

// ---------------------------------------------------------------------------
// Reflexivity of F on the universe: the unit F -> F** is bijective at every S.
// ---------------------------------------------------------------------------

struct ReflexiveVerdict {
    bool reflexive = true;
    std::size_t failing_algebra = 0;
    std::optional<Vec> kernel_witness;    // element of F(S) killed by the unit
    std::optional<Vec> cokernel_witness;  // element of F**(S) outside the image
    std::vector<Matrix> unit_matrices;    // per algebra
};

/// Index swap U (x) S -> S (x) U.
inline Matrix tensor_swap(const Field& f, std::size_t du, std::size_t ds) {
    Matrix p(f, du * ds, du * ds);
    for (std::size_t i = 0; i < du; ++i)
        for (std::size_t j = 0; j < ds; ++j)
            p.at(j * du + i, i * ds + j) = Scalar::one(f);
    return p;
}

inline ReflexiveVerdict check_reflexive(const FunctorOnUniverse& F) {
    F.validate();
    const Universe& u = *F.universe;
    const Field& fld = F.field();
    DualOnUniverse d1 = dual_on_universe(F);
    DualOnUniverse d2 = dual_on_universe(d1.functor);

    ReflexiveVerdict v;
    for (std::size_t s = 0; s < u.algebras.size(); ++s) {
        const std::size_t mS = F.rank_at(s), dimS = u.algebras[s].dim();
        const std::size_t rdd = d2.bases[s].size();
        Matrix unit(fld, rdd, mS);
        for (std::size_t x = 0; x < mS; ++x) {
            // eta^x: F* -> quasicoherent(S_module), component at U sends the
            // basis family w to swap(w_S(e_x)).
            NatFamily eta;
            for (std::size_t t = 0; t < u.algebras.size(); ++t) {
                const std::size_t dimU = u.algebras[t].dim(), rU = d1.bases[t].size();
                Matrix comp(fld, dimS * dimU, rU);
                Matrix sw = tensor_swap(fld, dimU, dimS);
                for (std::size_t c = 0; c < rU; ++c) {
                    Vec img = sw.apply(d1.bases[t][c].comps[s].column(x));
                    for (std::size_t i = 0; i < img.size(); ++i) comp.at(i, c) = img[i];
                }
                eta.comps.push_back(std::move(comp));
            }
            auto coords = coordinates_in_basis(d2.bases[s], eta, fld);
            if (!coords)
                throw std::logic_error("check_reflexive: unit image escapes the solved space");
            for (std::size_t i = 0; i < rdd; ++i) unit.at(i, x) = (*coords)[i];
        }
        auto ker = kernel_basis(unit);
        bool onto = rank(unit) == rdd;
        if (!ker.empty() || !onto) {
            v.reflexive = false;
            v.failing_algebra = s;
            if (!ker.empty()) v.kernel_witness = ker.front();
            if (!onto) {
                Matrix img = Matrix::from_columns(fld, rdd, image_basis(unit));
                for (std::size_t i = 0; i < rdd; ++i) {
                    Vec e = unit_vec(fld, rdd, i);
                    if (!in_span(img, e)) {
                        v.cokernel_witness = e;
                        break;
                    }
                }
            }
            v.unit_matrices.push_back(std::move(unit));
            return v;
        }
        v.unit_matrices.push_back(std::move(unit));
    }
    return v;
}

// ---------------------------------------------------------------------------
// D-proquasi-coherence: restriction-to-base of Nat(F, quasicoherent(N)) is
// injective for every N up to the rank bound.
// ---------------------------------------------------------------------------

struct DpqVerdict {
    bool holds = true;
    std::size_t failing_rank = 0;
    std::optional<NatFamily> witness;  // nonzero family with zero base component
};

inline DpqVerdict check_d_proquasicoherent(const FunctorOnUniverse& F,
                                           std::size_t rank_bound = 4) {
    const Field& fld = F.field();
    const std::size_t base = F.universe->base_index;
    for (std::size_t r = 1; r <= rank_bound; ++r) {
        auto basis =
            nat_hom_space(F, quasicoherent_on_universe(FinModule(fld, r), F.universe));
        if (basis.empty()) continue;
        std::vector<Vec> cols;
        for (const auto& b : basis) cols.push_back(b.comps[base].vec());
        Matrix R = Matrix::from_columns(fld, cols.empty() ? 0 : cols[0].size(), cols);
        auto ker = kernel_basis(R);
        if (!ker.empty()) {
            DpqVerdict v;
            v.holds = false;
            v.failing_rank = r;
            NatFamily w;
            for (std::size_t s = 0; s < F.universe->algebras.size(); ++s) {
                Matrix comp(fld, basis[0].comps[s].rows(), basis[0].comps[s].cols());
                for (std::size_t c = 0; c < basis.size(); ++c)
                    comp = comp + basis[c].comps[s].scaled(ker.front()[c]);
                w.comps.push_back(std::move(comp));
            }
            v.witness = std::move(w);
            return v;
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Factorization of a family F -> quasicoherent(N) through the image of its
// base component.
// ---------------------------------------------------------------------------

struct ImageFactorization {
    FinModule image_module;
    Matrix inclusion;   // N.rank x image rank
    NatFamily epi;      // F -> quasicoherent(image)
    NatFamily mono;     // quasicoherent(image) -> quasicoherent(N)
};

inline ImageFactorization factor_through_image(const FunctorOnUniverse& F,
                                               const FinModule& n, const NatFamily& fam) {
    const Universe& u = *F.universe;
    const Field& fld = F.field();
    const std::size_t base = u.base_index;
    if (u.algebras[base].dim() != 1)
        throw std::invalid_argument("factor_through_image: base must be the field");
    Matrix fK = fam.comps[base];  // n.rank x F(K).rank
    Matrix B = Matrix::from_columns(fld, n.rank, image_basis(fK));
    ImageFactorization out;
    out.image_module = FinModule(fld, B.cols());
    out.inclusion = B;
    for (std::size_t s = 0; s < u.algebras.size(); ++s) {
        Matrix BS = kron(B, Matrix::identity(fld, u.algebras[s].dim()));
        out.mono.comps.push_back(BS);
        Matrix epi(fld, BS.cols(), fam.comps[s].cols());
        for (std::size_t c = 0; c < fam.comps[s].cols(); ++c) {
            auto x = solve(BS, fam.comps[s].column(c));
            if (!x)
                throw std::domain_error(
                    "factor_through_image: family does not factor through its base image "
                    "(source is not D-proquasi-coherent)");
            for (std::size_t i = 0; i < x->size(); ++i) epi.at(i, c) = (*x)[i];
        }
        if (BS * epi != fam.comps[s])
            throw std::logic_error("factor_through_image: verification failed");
        out.epi.comps.push_back(std::move(epi));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Submodule and module-morphism criteria: base-level statements vs their
// universe-level counterparts, both computed independently.
// ---------------------------------------------------------------------------

struct CriterionVerdict {
    bool base_holds = true;
    bool universe_holds = true;
    bool equivalent() const { return base_holds == universe_holds; }
    std::size_t failing_algebra = 0;
    std::optional<Vec> witness;
};

/// Action of the algebra A (x) S on M (x) S induced by act: A (x) M -> M.
inline Matrix induced_action(const TestAlgebra& a, const Matrix& act, std::size_t m,
                             const TestAlgebra& s) {
    const Field& fld = a.field();
    const std::size_t na = a.dim(), ns = s.dim();
    Matrix out(fld, m * ns, (na * ns) * (m * ns));
    for (std::size_t k = 0; k < na; ++k)
        for (std::size_t l = 0; l < ns; ++l)
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < ns; ++j) {
                    Vec am = act.apply(
                        kron_vec(unit_vec(fld, na, k), unit_vec(fld, m, i), fld));
                    Vec ss = s.product(unit_vec(fld, ns, l), unit_vec(fld, ns, j));
                    Vec res = kron_vec(am, ss, fld);
                    std::size_t col = (k * ns + l) * (m * ns) + (i * ns + j);
                    for (std::size_t t = 0; t < res.size(); ++t) out.at(t, col) = res[t];
                }
    return out;
}

inline CriterionVerdict submodule_criterion(const TestAlgebra& a, const Matrix& act,
                                            std::size_t m, const Matrix& subspace_gens,
                                            const Universe& u) {
    const Field& fld = a.field();
    if (act.rows() != m || act.cols() != a.dim() * m)
        throw std::invalid_argument("submodule_criterion: bad action shape");
    if (subspace_gens.rows() != m)
        throw std::invalid_argument("submodule_criterion: generators not in the module");
    Matrix W = Matrix::from_columns(fld, m, image_basis(subspace_gens));
    CriterionVerdict v;
    // base level: stability under the A-action
    for (std::size_t k = 0; k < a.dim() && v.base_holds; ++k)
        for (std::size_t c = 0; c < W.cols(); ++c) {
            Vec r = act.apply(kron_vec(unit_vec(fld, a.dim(), k), W.column(c), fld));
            if (!in_span(W, r)) {
                v.base_holds = false;
                v.witness = r;
                break;
            }
        }
    // universe level: stability of W (x) S under the (A (x) S)-action, every S
    for (std::size_t s = 0; s < u.algebras.size() && v.universe_holds; ++s) {
        const TestAlgebra& alg = u.algebras[s];
        Matrix actS = induced_action(a, act, m, alg);
        Matrix WS = kron(W, Matrix::identity(fld, alg.dim()));
        const std::size_t nAS = a.dim() * alg.dim();
        for (std::size_t g = 0; g < nAS && v.universe_holds; ++g)
            for (std::size_t c = 0; c < WS.cols(); ++c) {
                Vec r = actS.apply(kron_vec(unit_vec(fld, nAS, g), WS.column(c), fld));
                if (!in_span(WS, r)) {
                    v.universe_holds = false;
                    v.failing_algebra = s;
                    if (!v.witness) v.witness = r;
                    break;
                }
            }
    }
    return v;
}

inline CriterionVerdict module_morphism_criterion(const TestAlgebra& a, const Matrix& actM,
                                                  const Matrix& actN, const Matrix& f,
                                                  const Universe& u) {
    const Field& fld = a.field();
    const std::size_t m = actM.rows(), n = actN.rows();
    if (f.rows() != n || f.cols() != m)
        throw std::invalid_argument("module_morphism_criterion: bad map shape");
    CriterionVerdict v;
    v.base_holds =
        f * actM == actN * kron(Matrix::identity(fld, a.dim()), f);
    for (std::size_t s = 0; s < u.algebras.size(); ++s) {
        const TestAlgebra& alg = u.algebras[s];
        Matrix fS = kron(f, Matrix::identity(fld, alg.dim()));
        Matrix actMS = induced_action(a, actM, m, alg);
        Matrix actNS = induced_action(a, actN, n, alg);
        bool ok = fS * actMS ==
                  actNS * kron(Matrix::identity(fld, a.dim() * alg.dim()), fS);
        if (!ok) {
            v.universe_holds = false;
            v.failing_algebra = s;
            break;
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Canonical embedding M (x) N -> Nat(M*, quasicoherent(N)): the finite-rank
// identification Hom(M*, N) = M (x) N realized through the solver.
// ---------------------------------------------------------------------------

struct HomTensorEmbedding {
    std::vector<NatFamily> hom_basis;  // solver basis of Nat(M*, qc(N))
    Matrix embedding;                  // hom_basis coords of each e_i (x) e_j
    bool bijective = false;
};

inline HomTensorEmbedding hom_tensor_embedding(const FinModule& m, const FinModule& n,
                                               std::shared_ptr<const Universe> u) {
    const Field& fld = m.field;
    const Universe& uni = *u;
    const std::size_t base = uni.base_index;
    FunctorOnUniverse qcM = quasicoherent_on_universe(m, u);
    DualOnUniverse dm = dual_on_universe(qcM);
    FunctorOnUniverse qcN = quasicoherent_on_universe(n, u);
    HomTensorEmbedding out;
    out.hom_basis = nat_hom_space(dm.functor, qcN);
    out.embedding = Matrix(fld, out.hom_basis.size(), m.rank * n.rank);
    for (std::size_t i = 0; i < m.rank; ++i)
        for (std::size_t j = 0; j < n.rank; ++j) {
            // family: w |-> e_j (x) w_K(e_i), per algebra S
            NatFamily fam;
            for (std::size_t s = 0; s < uni.algebras.size(); ++s) {
                const std::size_t dimS = uni.algebras[s].dim();
                const std::size_t rS = dm.bases[s].size();
                Matrix comp(fld, n.rank * dimS, rS);
                for (std::size_t c = 0; c < rS; ++c) {
                    // w_K: M -> S (x) K; column e_i gives a vector in K^dimS
                    Vec wk = dm.bases[s][c].comps[base].column(i);
                    for (std::size_t l = 0; l < dimS; ++l) comp.at(j * dimS + l, c) = wk[l];
                }
                fam.comps.push_back(std::move(comp));
            }
            auto coords = coordinates_in_basis(out.hom_basis, fam, fld);
            if (!coords)
                throw std::logic_error("hom_tensor_embedding: canonical family not natural");
            for (std::size_t r = 0; r < coords->size(); ++r)
                out.embedding.at(r, i * n.rank + j) = (*coords)[r];
        }
    out.bijective = out.hom_basis.size() == m.rank * n.rank &&
                    rank(out.embedding) == out.hom_basis.size();
    return out;
}

// ---------------------------------------------------------------------------
// Subfunctors of quasi-coherent functors cut out by per-algebra subspaces.
// ---------------------------------------------------------------------------

/// Builds the functor S |-> span(inclusions[S]) with action and transitions
/// obtained by solving through the inclusion columns. The subspaces must be
/// multiplication-stable and respected by every universe morphism.
inline FunctorOnUniverse subfunctor_from_subspaces(std::shared_ptr<const Universe> u,
                                                   const std::vector<Matrix>& inclusions) {
    const Universe& uni = *u;
    const Field& fld = uni.field();
    if (inclusions.size() != uni.algebras.size())
        throw std::invalid_argument("subfunctor: one inclusion per algebra required");
    auto factor = [&](const Matrix& incl, const Matrix& img) {
        Matrix out(fld, incl.cols(), img.cols());
        for (std::size_t c = 0; c < img.cols(); ++c) {
            auto x = solve(incl, img.column(c));
            if (!x)
                throw std::invalid_argument("subfunctor: subspaces are not stable");
            for (std::size_t i = 0; i < x->size(); ++i) out.at(i, c) = (*x)[i];
        }
        return out;
    };
    FunctorOnUniverse f;
    f.universe = u;
    for (std::size_t s = 0; s < uni.algebras.size(); ++s) {
        const TestAlgebra& alg = uni.algebras[s];
        const Matrix& j = inclusions[s];
        if (j.rows() != alg.dim())
            throw std::invalid_argument("subfunctor: inclusion has wrong ambient dimension");
        f.modules.emplace_back(fld, j.cols());
        // action: the multiplication S (x) span -> span in span coordinates
        Matrix prod = alg.mult * kron(Matrix::identity(fld, alg.dim()), j);
        f.actions.push_back(factor(j, prod));
    }
    for (std::size_t k = 0; k < uni.morphisms.size(); ++k) {
        const auto& mor = uni.morphisms[k];
        f.transitions.push_back(factor(inclusions[mor.dst], mor.matrix * inclusions[mor.src]));
    }
    f.validate();
    return f;
}

/// The nilpotent-part functor on the reference universe: S |-> nilradical(S).
/// Its value at the base field is zero while higher values are not, so any
/// nonzero natural family into a quasi-coherent target has zero base
/// component — the stock counterexample to D-proquasi-coherence.
inline FunctorOnUniverse nilpotent_part_functor(std::shared_ptr<const Universe> u) {
    const Field& fld = u->field();
    if (u->algebras.size() != 5 || u->algebras[1].dim() != 2 || u->algebras[2].dim() != 3 ||
        u->algebras[3].dim() != 3 || u->algebras[4].dim() != 2)
        throw std::invalid_argument("nilpotent_part_functor: expects the reference universe");
    auto cols = [&](std::size_t dim, const std::vector<std::size_t>& idx) {
        std::vector<Vec> v;
        for (auto i : idx) v.push_back(unit_vec(fld, dim, i));
        return Matrix::from_columns(fld, dim, v);
    };
    std::vector<Matrix> incl = {
        cols(1, {}),        // K: 0
        cols(2, {1}),       // K[x]/(x^2): span(x)
        cols(3, {1, 2}),    // K[x]/(x^3): span(x, x^2)
        cols(3, {1, 2}),    // K[x,y]/(x,y)^2: span(x, y)
        cols(2, {}),        // K x K: reduced, 0
    };
    return subfunctor_from_subspaces(std::move(u), incl);
}

}  // namespace reflexa
