#pragma once

#include <string>

#include <json.hpp>

#include "reflexa/algebra.hpp"
#include "reflexa/bialgebra.hpp"
#include "reflexa/finite_dual.hpp"
#include "reflexa/tower.hpp"

namespace reflexa {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Field and scalars.
// ---------------------------------------------------------------------------

inline json field_to_json(const Field& f) {
    if (f.is_rational()) return json("Q");
    json j;
    j["GF"] = f.p;
    return j;
}

inline Field field_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "Q") return Field::rationals();
    if (j.is_object() && j.contains("GF")) return Field::gf(j.at("GF").get<unsigned long>());
    throw std::invalid_argument("field: expected \"Q\" or {\"GF\": p}");
}

/// Parse a field spec like "Q" or "GF:7" from the command line.
inline Field field_from_flag(const std::string& s) {
    if (s == "Q" || s == "q") return Field::rationals();
    if (s.rfind("GF:", 0) == 0) return Field::gf(std::stoul(s.substr(3)));
    if (s.rfind("GF", 0) == 0) return Field::gf(std::stoul(s.substr(2)));
    throw std::invalid_argument("field flag: expected Q or GF:p, got " + s);
}

inline json scalar_to_json(const Scalar& s) { return json(s.str()); }

inline Scalar scalar_from_json(const json& j, const Field& f) {
    if (j.is_number_integer()) return Scalar(f, j.get<long>());
    if (j.is_string()) return Scalar::parse(j.get<std::string>(), f);
    throw std::invalid_argument("scalar: expected string or integer");
}

// ---------------------------------------------------------------------------
// Matrices, modules, vectors.
// ---------------------------------------------------------------------------

inline json vec_to_json(const Vec& v) {
    json j = json::array();
    for (const auto& s : v) j.push_back(scalar_to_json(s));
    return j;
}

inline Vec vec_from_json(const json& j, const Field& f) {
    if (!j.is_array()) throw std::invalid_argument("vector: expected array");
    Vec v;
    for (const auto& e : j) v.push_back(scalar_from_json(e, f));
    return v;
}

inline json matrix_to_json(const Matrix& m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    json e = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m.at(i, c)));
        e.push_back(std::move(row));
    }
    j["entries"] = std::move(e);
    return j;
}

inline Matrix matrix_from_json(const json& j, const Field& f) {
    const std::size_t rows = j.at("rows").get<std::size_t>();
    const std::size_t cols = j.at("cols").get<std::size_t>();
    Matrix m(f, rows, cols);
    const json& e = j.at("entries");
    if (!e.is_array() || e.size() != rows)
        throw std::invalid_argument("matrix: entries row count mismatch");
    for (std::size_t i = 0; i < rows; ++i) {
        if (!e[i].is_array() || e[i].size() != cols)
            throw std::invalid_argument("matrix: entries column count mismatch");
        for (std::size_t c = 0; c < cols; ++c) m.at(i, c) = scalar_from_json(e[i][c], f);
    }
    return m;
}

inline json module_to_json(const FinModule& m) {
    json j;
    j["field"] = field_to_json(m.field);
    j["rank"] = m.rank;
    return j;
}

inline FinModule module_from_json(const json& j) {
    return FinModule(field_from_json(j.at("field")), j.at("rank").get<std::size_t>());
}

// ---------------------------------------------------------------------------
// Algebras and universes.
// ---------------------------------------------------------------------------

inline json algebra_to_json(const TestAlgebra& a) {
    const std::size_t n = a.dim();
    json j;
    j["dim"] = n;
    json mult = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < n; ++k) {
            json coeffs = json::array();
            for (std::size_t l = 0; l < n; ++l)
                coeffs.push_back(scalar_to_json(a.mult.at(l, i * n + k)));
            row.push_back(std::move(coeffs));
        }
        mult.push_back(std::move(row));
    }
    j["mult"] = std::move(mult);
    j["unit"] = vec_to_json(a.unit);
    return j;
}

inline TestAlgebra algebra_from_json(const json& j, const Field& f) {
    const std::size_t n = j.at("dim").get<std::size_t>();
    Matrix mult(f, n, n * n);
    const json& m = j.at("mult");
    if (!m.is_array() || m.size() != n) throw std::invalid_argument("algebra: bad mult table");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const json& coeffs = m.at(i).at(k);
            if (!coeffs.is_array() || coeffs.size() != n)
                throw std::invalid_argument("algebra: bad structure-constant row");
            for (std::size_t l = 0; l < n; ++l)
                mult.at(l, i * n + k) = scalar_from_json(coeffs[l], f);
        }
    return TestAlgebra(FinModule(f, n), std::move(mult), vec_from_json(j.at("unit"), f));
}

inline json universe_to_json(const Universe& u) {
    json j;
    json algs = json::array();
    for (const auto& a : u.algebras) algs.push_back(algebra_to_json(a));
    j["algebras"] = std::move(algs);
    json mors = json::array();
    for (const auto& m : u.morphisms) {
        json mj;
        mj["src"] = m.src;
        mj["dst"] = m.dst;
        mj["matrix"] = matrix_to_json(m.matrix);
        mors.push_back(std::move(mj));
    }
    j["morphisms"] = std::move(mors);
    return j;
}

inline Universe universe_from_json(const json& j, const Field& f) {
    Universe u;
    for (const auto& a : j.at("algebras")) u.algebras.push_back(algebra_from_json(a, f));
    for (const auto& m : j.at("morphisms"))
        u.morphisms.push_back({m.at("src").get<std::size_t>(), m.at("dst").get<std::size_t>(),
                               matrix_from_json(m.at("matrix"), f)});
    u.close();
    u.validate();
    return u;
}

// ---------------------------------------------------------------------------
// Towers.
// ---------------------------------------------------------------------------

inline json tower_to_json(const Tower& t) {
    json j;
    j["field"] = field_to_json(t.levels[0].field);
    json levels = json::array();
    for (const auto& l : t.levels) levels.push_back(l.rank);
    j["levels"] = std::move(levels);
    json maps = json::array();
    for (const auto& m : t.maps) maps.push_back(matrix_to_json(m.matrix));
    j["maps"] = std::move(maps);
    return j;
}

inline Tower tower_from_json(const json& j) {
    Field f = field_from_json(j.at("field"));
    Tower t;
    for (const auto& r : j.at("levels")) t.levels.emplace_back(f, r.get<std::size_t>());
    std::size_t n = 0;
    for (const auto& m : j.at("maps")) {
        if (n + 1 >= t.levels.size()) throw std::invalid_argument("tower: too many maps");
        t.maps.emplace_back(t.levels[n + 1], t.levels[n], matrix_from_json(m, f));
        ++n;
    }
    t.validate();
    return t;
}

// ---------------------------------------------------------------------------
// Bialgebras and groups.
// ---------------------------------------------------------------------------

inline json bialgebra_to_json(const FinBialgebra& b) {
    const std::size_t n = b.dim();
    json j;
    j["field"] = field_to_json(b.field());
    j["dim"] = n;
    json mult = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < n; ++k) {
            json coeffs = json::array();
            for (std::size_t l = 0; l < n; ++l)
                coeffs.push_back(scalar_to_json(b.algebra.mult.at(l, i * n + k)));
            row.push_back(std::move(coeffs));
        }
        mult.push_back(std::move(row));
    }
    j["mult"] = std::move(mult);
    j["unit"] = vec_to_json(b.algebra.unit);
    json comult = json::array();
    for (const auto& terms : b.coalgebra.comult) {
        json per = json::array();
        for (const auto& t : terms)
            per.push_back(json::array({json(t.left), json(t.right), scalar_to_json(t.coeff)}));
        comult.push_back(std::move(per));
    }
    j["comult"] = std::move(comult);
    j["counit"] = vec_to_json(b.coalgebra.counit);
    return j;
}

inline FinBialgebra bialgebra_from_json(const json& j, const Field& f) {
    const std::size_t n = j.at("dim").get<std::size_t>();
    FinBialgebra b;
    b.algebra.module = FinModule(f, n);
    b.algebra.mult = Matrix(f, n, n * n);
    const json& m = j.at("mult");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l)
                b.algebra.mult.at(l, i * n + k) = scalar_from_json(m.at(i).at(k).at(l), f);
    b.algebra.unit = vec_from_json(j.at("unit"), f);
    b.coalgebra.module = b.algebra.module;
    const json& cj = j.at("comult");
    if (!cj.is_array() || cj.size() != n)
        throw std::invalid_argument("bialgebra: comult must list terms per basis index");
    for (const auto& per : cj) {
        std::vector<ComultTerm> terms;
        for (const auto& t : per)
            terms.push_back({t.at(0).get<std::size_t>(), t.at(1).get<std::size_t>(),
                             scalar_from_json(t.at(2), f)});
        b.coalgebra.comult.push_back(std::move(terms));
    }
    b.coalgebra.counit = vec_from_json(j.at("counit"), f);
    b.validate();
    return b;
}

inline json group_to_json(const std::vector<std::vector<std::size_t>>& table) {
    json j;
    j["order"] = table.size();
    j["table"] = table;
    return j;
}

inline std::vector<std::vector<std::size_t>> group_from_json(const json& j) {
    auto table = j.at("table").get<std::vector<std::vector<std::size_t>>>();
    if (table.size() != j.at("order").get<std::size_t>())
        throw std::invalid_argument("group: order does not match table");
    validate_group_table(table);
    return table;
}

// ---------------------------------------------------------------------------
// Recursive functionals.
// ---------------------------------------------------------------------------

inline json functional_to_json(const RecursiveFunctional& r) {
    json j;
    j["field"] = field_to_json(r.field);
    j["model"] = model_name(r.model);
    json ann = json::array();
    for (const auto& c : r.annihilator) ann.push_back(scalar_to_json(c));
    j["annihilator"] = std::move(ann);
    j["values"] = vec_to_json(r.values);
    return j;
}

inline RecursiveFunctional functional_from_json(const json& j) {
    Field f = field_from_json(j.at("field"));
    RecursiveFunctional r;
    r.field = f;
    std::string model = j.at("model").get<std::string>();
    if (model == "primitive")
        r.model = FunctionalModel::primitive;
    else if (model == "grouplike")
        r.model = FunctionalModel::grouplike;
    else
        throw std::invalid_argument("functional: model must be primitive or grouplike");
    for (const auto& c : j.at("annihilator")) r.annihilator.push_back(scalar_from_json(c, f));
    r.values = vec_from_json(j.at("values"), f);
    r.validate();
    return r;
}

/// Built-in group tables by name.
inline std::vector<std::vector<std::size_t>> builtin_group(const std::string& name) {
    if (name == "Z1") return cyclic_group_table(1);
    if (name == "Z2") return cyclic_group_table(2);
    if (name == "Z3") return cyclic_group_table(3);
    if (name == "Z2xZ2") return klein_four_table();
    if (name == "S3") return symmetric3_table();
    throw std::invalid_argument("unknown group name: " + name +
                                " (known: Z1, Z2, Z3, Z2xZ2, S3)");
}

}  // namespace reflexa
