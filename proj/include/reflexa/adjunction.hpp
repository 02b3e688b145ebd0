#pragma once

#include <memory>
#include <string>
#include <vector>

#include "reflexa/functor.hpp"

namespace reflexa {

/// The finite stage on which the base-change adjunction
///   Hom_S(i^*F, G) = Hom_K(F, i_*G)
/// is verified for a chosen algebra S. Three diagrams are needed:
///   full:  K, S, S(x)S, S(x)S(x)S over K (F lives here),
///   small: K, S, S(x)S over K (the Hom_K side is solved here, so that
///          i_*G only ever needs G at tensor degrees the stage contains),
///   rel:   S, S(x)S, S(x)S(x)S as S-algebras via the first tensor factor
///          (G lives here and the Hom_S side is solved here).
struct AdjunctionSetup {
    TestAlgebra s;
    std::shared_ptr<const Universe> full;
    std::shared_ptr<const Universe> small;
    std::shared_ptr<const Universe> rel;
    /// q_T: T -> S(x)T (t |-> 1(x)t), one per small object, as full morphisms.
    std::vector<UniverseMorphism> q_embed;
    /// p_{S'}: S(x)S' -> S' (first-factor multiplication), for the first two
    /// rel objects, as rel morphisms.
    std::vector<UniverseMorphism> p_mult;
};

inline AdjunctionSetup adjunction_setup(const TestAlgebra& s) {
    const Field& f = s.field();
    AdjunctionSetup st;
    st.s = s;
    TestAlgebra k = field_algebra(f);
    TestAlgebra a2 = tensor_algebra(s, s);
    TestAlgebra a3 = tensor_algebra(s, a2);
    const std::size_t d = s.dim();
    Matrix u_col = Matrix::from_columns(f, d, {s.unit});
    Matrix id_s = Matrix::identity(f, d);
    Matrix id_s2 = Matrix::identity(f, d * d);

    Universe full;
    full.name = "adjunction-stage";
    full.algebras = {k, s, a2, a3};
    full.base_index = 0;
    full.morphisms.push_back({0, 1, u_col});                          // unit K -> S
    full.morphisms.push_back({1, 2, kron(u_col, id_s)});              // s |-> 1(x)s
    full.morphisms.push_back({1, 2, kron(id_s, u_col)});              // s |-> s(x)1
    full.morphisms.push_back({2, 1, s.mult});                         // multiplication
    full.morphisms.push_back({2, 3, kron(u_col, id_s2)});             // y |-> 1(x)y
    full.morphisms.push_back({2, 3, kron(id_s2, u_col)});             // y |-> y(x)1
    full.morphisms.push_back({2, 3, kron(id_s, kron(u_col, id_s))});  // a(x)b |-> a(x)1(x)b
    full.morphisms.push_back({3, 2, kron(s.mult, id_s)});             // mult (x) id
    full.morphisms.push_back({3, 2, kron(id_s, s.mult)});             // id (x) mult
    full.close();
    full.validate();

    // small = restriction to { K, S, S(x)S }; already closed as a filter of a
    // closed diagram, so keep the filtered generators instead of re-closing.
    Universe small;
    small.name = "adjunction-stage-small";
    small.algebras = {k, s, a2};
    small.base_index = 0;
    for (const auto& m : full.morphisms)
        if (m.src <= 2 && m.dst <= 2) small.morphisms.push_back(m);
    for (const auto& m : full.generator_morphisms)
        if (m.src <= 2 && m.dst <= 2) small.generator_morphisms.push_back(m);
    small.validate();

    // rel = the S-algebra morphisms among { S, S(x)S, S(x)S(x)S }; a morphism
    // is S-linear when it commutes with the first-factor structural arrows.
    std::vector<Matrix> structural = {id_s, kron(id_s, u_col),
                                      kron(id_s, Matrix::from_columns(f, d * d, {a2.unit}))};
    Universe rel;
    rel.name = "adjunction-stage-relative";
    rel.algebras = {s, a2, a3};
    rel.base_index = 0;
    for (const auto& m : full.morphisms) {
        if (m.src < 1 || m.dst < 1) continue;
        if (m.matrix * structural[m.src - 1] != structural[m.dst - 1]) continue;
        rel.morphisms.push_back({m.src - 1, m.dst - 1, m.matrix});
    }
    rel.validate();

    st.full = std::make_shared<Universe>(std::move(full));
    st.small = std::make_shared<Universe>(std::move(small));
    st.rel = std::make_shared<Universe>(std::move(rel));

    st.q_embed = {{0, 1, u_col}, {1, 2, kron(u_col, id_s)}, {2, 3, kron(u_col, id_s2)}};
    st.p_mult = {{1, 0, s.mult}, {2, 1, kron(s.mult, id_s)}};
    return st;
}

/// Restriction of a functor to a sub-diagram; obj_map sends sub-universe
/// object indices to indices in f's universe.
inline FunctorOnUniverse restrict_functor(const FunctorOnUniverse& f,
                                          std::shared_ptr<const Universe> sub,
                                          const std::vector<std::size_t>& obj_map) {
    FunctorOnUniverse out;
    out.universe = sub;
    for (std::size_t t = 0; t < sub->algebras.size(); ++t) {
        out.modules.push_back(f.modules.at(obj_map.at(t)));
        out.actions.push_back(f.actions.at(obj_map.at(t)));
    }
    for (const auto& m : sub->morphisms) {
        std::size_t idx =
            f.universe->find_morphism(obj_map.at(m.src), obj_map.at(m.dst), m.matrix);
        if (idx == f.universe->morphisms.size())
            throw std::domain_error("restrict_functor: arrow missing from the ambient diagram");
        out.transitions.push_back(f.transitions[idx]);
    }
    out.validate();
    return out;
}

/// i_*G over the small diagram: (i_*G)(T) = G(S (x) T), with the T-action
/// restricted along q_T and transitions G(id_S (x) psi).
inline FunctorOnUniverse pushforward(const AdjunctionSetup& st, const FunctorOnUniverse& g) {
    if (g.universe != st.rel)
        throw std::invalid_argument("pushforward: G must live on the relative diagram");
    const Field& f = st.s.field();
    FunctorOnUniverse out;
    out.universe = st.small;
    for (std::size_t t = 0; t < st.small->algebras.size(); ++t) {
        const std::size_t r = g.rank_at(t);  // rel index of S(x)T equals t
        out.modules.push_back(g.modules[t]);
        out.actions.push_back(g.actions[t] *
                              kron(st.q_embed[t].matrix, Matrix::identity(f, r)));
    }
    Matrix id_s = Matrix::identity(f, st.s.dim());
    for (const auto& psi : st.small->morphisms) {
        std::size_t idx = st.rel->find_morphism(psi.src, psi.dst, kron(id_s, psi.matrix));
        if (idx == st.rel->morphisms.size())
            throw std::domain_error(
                "pushforward: stage not closed under the arrows the proof diagrams need");
        out.transitions.push_back(g.transitions[idx]);
    }
    out.validate();
    return out;
}

struct AdjunctionVerdict {
    bool holds = false;
    std::size_t dim_relative = 0;  // dim Hom_S(i^*F, G)
    std::size_t dim_base = 0;      // dim Hom_K(F, i_*G)
    std::string detail;
};

namespace detail {

inline NatFamily family_combo(const std::vector<NatFamily>& basis, const Vec& coords) {
    if (basis.empty()) return {};
    NatFamily out;
    for (std::size_t s = 0; s < basis[0].comps.size(); ++s) {
        Matrix acc(basis[0].comps[s].field(), basis[0].comps[s].rows(),
                   basis[0].comps[s].cols());
        for (std::size_t c = 0; c < basis.size(); ++c)
            acc = acc + basis[c].comps[s].scaled(coords[c]);
        out.comps.push_back(std::move(acc));
    }
    return out;
}

}  // namespace detail

/// Verifies that the two proof assignments
///   w  |->  phi,  phi_T = w_{S(x)T} . F(q_T)
///   phi |->  w,   w_{S'} = G(p_{S'}) . phi_{S'}
/// are mutually inverse bijections between the two solver-computed spaces.
/// F lives on st.full, G on st.rel.
inline AdjunctionVerdict verify_adjunction(const AdjunctionSetup& st,
                                           const FunctorOnUniverse& F,
                                           const FunctorOnUniverse& G) {
    if (F.universe != st.full)
        throw std::invalid_argument("verify_adjunction: F must live on the full stage");
    const Field& f = st.s.field();
    FunctorOnUniverse f_rel = restrict_functor(F, st.rel, {1, 2, 3});
    FunctorOnUniverse f_small = restrict_functor(F, st.small, {0, 1, 2});
    FunctorOnUniverse ig = pushforward(st, G);

    auto w_basis = nat_hom_space(f_rel, G);       // Hom_S(i^*F, G)
    auto phi_basis = nat_hom_space(f_small, ig);  // Hom_K(F, i_*G)

    AdjunctionVerdict v;
    v.dim_relative = w_basis.size();
    v.dim_base = phi_basis.size();
    if (v.dim_relative != v.dim_base) {
        v.detail = "the two solved spaces have different dimensions";
        return v;
    }

    // F(q_T) transitions, looked up in the full diagram.
    std::vector<Matrix> fq;
    for (const auto& q : st.q_embed) {
        std::size_t idx = st.full->find_morphism(q.src, q.dst, q.matrix);
        if (idx == st.full->morphisms.size())
            throw std::logic_error("verify_adjunction: embedding arrow missing");
        fq.push_back(F.transitions[idx]);
    }
    // G(p_{S'}) transitions for the two determined relative objects.
    std::vector<Matrix> gp;
    for (const auto& p : st.p_mult) {
        std::size_t idx = st.rel->find_morphism(p.src, p.dst, p.matrix);
        if (idx == st.rel->morphisms.size())
            throw std::domain_error("verify_adjunction: multiplication arrow missing");
        gp.push_back(G.transitions[idx]);
    }

    auto to_phi = [&](const NatFamily& w) {
        NatFamily phi;
        for (std::size_t t = 0; t < 3; ++t) phi.comps.push_back(w.comps[t] * fq[t]);
        return phi;
    };

    // phi |-> w: the first two components of w are forced by the diagram; the
    // top component is the unique solved family extending them.
    auto to_w = [&](const NatFamily& phi) -> std::optional<NatFamily> {
        std::vector<Matrix> partial = {gp[0] * phi.comps[1], gp[1] * phi.comps[2]};
        Vec target;
        for (const auto& m : partial) {
            Vec mv = m.vec();
            target.insert(target.end(), mv.begin(), mv.end());
        }
        std::vector<Vec> cols;
        for (const auto& w : w_basis) {
            Vec col;
            for (std::size_t r = 0; r < 2; ++r) {
                Vec mv = w.comps[r].vec();
                col.insert(col.end(), mv.begin(), mv.end());
            }
            cols.push_back(std::move(col));
        }
        Matrix B = Matrix::from_columns(f, target.size(), cols);
        if (rank(B) != w_basis.size()) return std::nullopt;  // extension not unique
        auto c = solve(B, target);
        if (!c) return std::nullopt;
        return detail::family_combo(w_basis, *c);
    };

    for (const auto& w : w_basis) {
        NatFamily phi = to_phi(w);
        if (!coordinates_in_basis(phi_basis, phi, f)) {
            v.detail = "w |-> phi leaves the solved space";
            return v;
        }
        auto back = to_w(phi);
        if (!back || !(*back == w)) {
            v.detail = "phi |-> w does not invert w |-> phi";
            return v;
        }
    }
    for (const auto& phi : phi_basis) {
        auto w = to_w(phi);
        if (!w) {
            v.detail = "phi |-> w has no unique solved extension";
            return v;
        }
        if (!(to_phi(*w) == phi)) {
            v.detail = "w |-> phi does not invert phi |-> w";
            return v;
        }
    }
    v.holds = true;
    return v;
}

}  // namespace reflexa
