#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "majorize/abelian_family.hpp"
#include "majorize/complex_matrix.hpp"
#include "majorize/demos.hpp"
#include "majorize/doubly_stochastic.hpp"
#include "majorize/errors.hpp"
#include "majorize/fields.hpp"
#include "majorize/mixtures.hpp"

namespace majorize {

using Json = nlohmann::ordered_json;

namespace json_detail {

inline const Json& expect(const Json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(Errc::ParseError, where + ": missing field '" + key + "'");
    return *it;
}

inline Complex parse_entry(const Json& e, const std::string& where) {
    if (e.is_number()) return Complex(e.get<double>(), 0.0);
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return Complex(e[0].get<double>(), e[1].get<double>());
    fail(Errc::ParseError, where + ": entry must be a number or an [re, im] pair");
}

inline ComplexMatrix parse_square(const Json& flat, std::size_t n, const std::string& where) {
    if (!flat.is_array() || flat.size() != n * n)
        fail(Errc::ParseError, where + ": expected " + std::to_string(n * n) +
                                   " row-major entries");
    std::vector<Complex> entries;
    entries.reserve(n * n);
    for (std::size_t k = 0; k < flat.size(); ++k)
        entries.push_back(parse_entry(flat[k], where + "[" + std::to_string(k) + "]"));
    return ComplexMatrix(n, n, std::move(entries));
}

inline Json emit_member(const ComplexMatrix& a) {
    bool real = true;
    for (const auto& e : a.entries())
        if (e.imag() != 0.0) {
            real = false;
            break;
        }
    Json out = Json::array();
    for (const auto& e : a.entries()) {
        if (real)
            out.push_back(e.real());
        else
            out.push_back(Json::array({e.real(), e.imag()}));
    }
    return out;
}

inline Json emit_matrix_rows(const ComplexMatrix& a) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < a.cols(); ++j)
            row.push_back(Json::array({a(i, j).real(), a(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline ComplexMatrix parse_matrix_rows(const Json& rows, const std::string& where) {
    if (!rows.is_array() || rows.empty())
        fail(Errc::ParseError, where + ": expected matrix rows");
    const std::size_t n = rows.size();
    std::vector<Complex> entries;
    entries.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n)
            fail(Errc::ParseError, where + ": row " + std::to_string(i) + " has wrong length");
        for (std::size_t j = 0; j < n; ++j)
            entries.push_back(parse_entry(rows[i][j], where + "(" + std::to_string(i) + "," +
                                                          std::to_string(j) + ")"));
    }
    return ComplexMatrix(n, n, std::move(entries));
}

}  // namespace json_detail

inline Json parse_json_text(const std::string& text, const std::string& where) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(Errc::ParseError, where + ": " + e.what());
    }
}

// ---- abelian families: {"n", "m", "members": [flat row-major entries, ...]}

inline Json family_to_json(const AbelianFamily& f) {
    Json j;
    j["n"] = f.dim();
    j["m"] = f.size();
    Json members = Json::array();
    for (std::size_t k = 0; k < f.size(); ++k)
        members.push_back(json_detail::emit_member(f.member(k)));
    j["members"] = std::move(members);
    return j;
}

inline AbelianFamily family_from_json(const Json& j, const std::string& where = "family") {
    const std::size_t n = json_detail::expect(j, "n", where).get<std::size_t>();
    const std::size_t m = json_detail::expect(j, "m", where).get<std::size_t>();
    const Json& members = json_detail::expect(j, "members", where);
    if (!members.is_array() || members.size() != m)
        fail(Errc::ParseError, where + ": expected " + std::to_string(m) + " members");
    std::vector<ComplexMatrix> mats;
    mats.reserve(m);
    for (std::size_t k = 0; k < m; ++k)
        mats.push_back(json_detail::parse_square(members[k], n,
                                                 where + ".members[" + std::to_string(k) + "]"));
    return AbelianFamily(std::move(mats));
}

// ---- fields: {"space": {"dim": 1, "coords": [...]}, "n", "m", "families"}

inline Json field_to_json(const MatrixField& f) {
    Json j;
    Json space;
    space["dim"] = 1;
    Json coords = Json::array();
    for (std::size_t k = 0; k < f.points(); ++k) coords.push_back(f.space().coordinate(k));
    space["coords"] = std::move(coords);
    j["space"] = std::move(space);
    j["n"] = f.n();
    j["m"] = f.m();
    Json fams = Json::array();
    for (std::size_t k = 0; k < f.points(); ++k) {
        Json fam = Json::array();
        for (std::size_t jm = 0; jm < f.m(); ++jm)
            fam.push_back(json_detail::emit_member(f.at(k).member(jm)));
        fams.push_back(std::move(fam));
    }
    j["families"] = std::move(fams);
    return j;
}

inline GridSpace space_from_json(const Json& j, const std::string& where = "space") {
    const std::size_t dim = json_detail::expect(j, "dim", where).get<std::size_t>();
    if (dim != 1) fail(Errc::ParseError, where + ": only dim = 1 grids are supported");
    const Json& coords = json_detail::expect(j, "coords", where);
    if (!coords.is_array() || coords.empty())
        fail(Errc::ParseError, where + ": coords must be a nonempty array");
    std::vector<std::vector<double>> pts;
    pts.reserve(coords.size());
    for (const auto& c : coords) {
        if (!c.is_number()) fail(Errc::ParseError, where + ": coordinates must be numbers");
        pts.push_back({c.get<double>()});
    }
    return GridSpace(std::move(pts));
}

inline MatrixField field_from_json(const Json& j, const std::string& where = "field") {
    GridSpace space = space_from_json(json_detail::expect(j, "space", where), where + ".space");
    const std::size_t n = json_detail::expect(j, "n", where).get<std::size_t>();
    const std::size_t m = json_detail::expect(j, "m", where).get<std::size_t>();
    const Json& fams = json_detail::expect(j, "families", where);
    if (!fams.is_array() || fams.size() != space.size())
        fail(Errc::ParseError, where + ": expected one family per grid point");
    std::vector<AbelianFamily> families;
    families.reserve(fams.size());
    for (std::size_t k = 0; k < fams.size(); ++k) {
        const Json& fam = fams[k];
        const std::string fw = where + ".families[" + std::to_string(k) + "]";
        if (!fam.is_array() || fam.size() != m)
            fail(Errc::ParseError, fw + ": expected " + std::to_string(m) + " members");
        std::vector<ComplexMatrix> mats;
        mats.reserve(m);
        for (std::size_t jm = 0; jm < m; ++jm)
            mats.push_back(
                json_detail::parse_square(fam[jm], n, fw + "[" + std::to_string(jm) + "]"));
        families.emplace_back(std::move(mats));
    }
    return MatrixField(std::move(space), std::move(families));
}

// ---- doubly stochastic matrices: {"n", "entries": [[row]...]}

inline Json ds_to_json(const DoublyStochastic& x) {
    Json j;
    j["n"] = x.dim();
    Json rows = Json::array();
    for (std::size_t i = 0; i < x.dim(); ++i) {
        Json row = Json::array();
        for (std::size_t c = 0; c < x.dim(); ++c) row.push_back(x(i, c));
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j;
}

inline DoublyStochastic ds_from_json(const Json& j, const std::string& where = "matrix") {
    const std::size_t n = json_detail::expect(j, "n", where).get<std::size_t>();
    const Json& rows = json_detail::expect(j, "entries", where);
    if (!rows.is_array() || rows.size() != n)
        fail(Errc::ParseError, where + ": expected " + std::to_string(n) + " rows");
    std::vector<double> entries;
    entries.reserve(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].size() != n)
            fail(Errc::ParseError, where + ": row " + std::to_string(i) + " has wrong length");
        for (const auto& e : rows[i]) {
            if (!e.is_number()) fail(Errc::ParseError, where + ": entries must be numbers");
            entries.push_back(e.get<double>());
        }
    }
    return DoublyStochastic(n, std::move(entries));
}

// ---- certificates: {"weights", "unitaries", "residual", "construction"}

inline Json certificate_to_json(const UnitaryMixture& mix, double residual,
                                const std::string& construction) {
    Json j;
    Json weights = Json::array();
    for (double w : mix.weights.weights()) weights.push_back(w);
    j["weights"] = std::move(weights);
    Json unitaries = Json::array();
    for (const auto& u : mix.unitaries)
        unitaries.push_back(json_detail::emit_matrix_rows(u.matrix()));
    j["unitaries"] = std::move(unitaries);
    j["residual"] = residual;
    j["construction"] = construction;
    return j;
}

struct CertificateData {
    UnitaryMixture mixture;
    double residual;
    std::string construction;
};

inline CertificateData certificate_from_json(const Json& j,
                                             const std::string& where = "certificate") {
    const Json& weights = json_detail::expect(j, "weights", where);
    const Json& unitaries = json_detail::expect(j, "unitaries", where);
    if (!weights.is_array() || !unitaries.is_array() || weights.size() != unitaries.size())
        fail(Errc::ParseError, where + ": weights and unitaries must pair up");
    std::vector<double> w;
    for (const auto& e : weights) w.push_back(e.get<double>());
    std::vector<Unitary> us;
    for (std::size_t k = 0; k < unitaries.size(); ++k)
        us.emplace_back(json_detail::parse_matrix_rows(
                            unitaries[k], where + ".unitaries[" + std::to_string(k) + "]"),
                        1e-8);
    return CertificateData{
        UnitaryMixture(ProbabilityVector(std::move(w)), std::move(us)),
        json_detail::expect(j, "residual", where).get<double>(),
        json_detail::expect(j, "construction", where).get<std::string>()};
}

// ---- mixture fields: {"weights", "cells", "unitaries"[term][point], ...}

inline Json mixture_field_to_json(const MixtureField& mf, double residual,
                                  const std::string& construction) {
    Json j;
    Json weights = Json::array();
    for (double w : mf.weights().weights()) weights.push_back(w);
    j["weights"] = std::move(weights);
    Json cells = Json::array();
    for (const auto& cell : mf.cells()) {
        Json c = Json::array();
        for (std::size_t p : cell) c.push_back(p);
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    Json terms = Json::array();
    for (std::size_t t = 0; t < mf.terms(); ++t) {
        Json per_point = Json::array();
        for (std::size_t p = 0; p < mf.points(); ++p)
            per_point.push_back(json_detail::emit_matrix_rows(mf.unitary(t, p).matrix()));
        terms.push_back(std::move(per_point));
    }
    j["unitaries"] = std::move(terms);
    j["residual"] = residual;
    j["construction"] = construction;
    return j;
}

struct MixtureFieldData {
    MixtureField mixture;
    double residual;
    std::string construction;
};

inline MixtureFieldData mixture_field_from_json(const Json& j,
                                                const std::string& where = "mixture-field") {
    const Json& weights = json_detail::expect(j, "weights", where);
    const Json& unitaries = json_detail::expect(j, "unitaries", where);
    const Json& cells = json_detail::expect(j, "cells", where);
    if (!weights.is_array() || !unitaries.is_array() || weights.size() != unitaries.size())
        fail(Errc::ParseError, where + ": weights and unitary fields must pair up");
    std::vector<double> w;
    for (const auto& e : weights) w.push_back(e.get<double>());
    std::vector<std::vector<Unitary>> fields;
    std::size_t points = 0;
    for (std::size_t t = 0; t < unitaries.size(); ++t) {
        const Json& per_point = unitaries[t];
        if (!per_point.is_array() || per_point.empty())
            fail(Errc::ParseError, where + ": term " + std::to_string(t) + " has no points");
        if (t == 0) points = per_point.size();
        if (per_point.size() != points)
            fail(Errc::ParseError, where + ": terms cover different point counts");
        std::vector<Unitary> uf;
        uf.reserve(points);
        for (std::size_t p = 0; p < points; ++p)
            uf.emplace_back(json_detail::parse_matrix_rows(
                                per_point[p], where + "[" + std::to_string(t) + "][" +
                                                  std::to_string(p) + "]"),
                            1e-8);
        fields.push_back(std::move(uf));
    }
    std::vector<std::vector<std::size_t>> cell_list;
    for (const auto& cell : cells) {
        std::vector<std::size_t> c;
        for (const auto& e : cell) c.push_back(e.get<std::size_t>());
        cell_list.push_back(std::move(c));
    }
    return MixtureFieldData{
        MixtureField(ProbabilityVector(std::move(w)), std::move(fields), std::move(cell_list),
                     points),
        json_detail::expect(j, "residual", where).get<double>(),
        json_detail::expect(j, "construction", where).get<std::string>()};
}

// ---- demo reports

inline Json demo_report_to_json(const DemoReport& r) {
    Json j;
    j["demo"] = r.name;
    j["grid_step"] = r.grid_step;
    j["points"] = r.xs.size();
    if (r.ran_pair) {
        Json pw;
        pw["label"] = "proof";
        pw["all_points_majorized"] = r.pointwise_all;
        Json fails = Json::array();
        for (std::size_t k = 0; k < r.pointwise_ok.size(); ++k)
            if (!r.pointwise_ok[k]) fails.push_back(r.xs[k]);
        pw["failing_points"] = std::move(fails);
        j["pointwise"] = std::move(pw);

        Json probe;
        probe["label"] = "heuristic evidence";
        probe["max_jump"] = r.max_jump;
        probe["jump_between"] = Json::array({r.jump_from_x, r.jump_to_x});
        j["continuation"] = std::move(probe);

        Json cert;
        cert["label"] = "proof";
        cert["epsilon"] = r.epsilon;
        cert["residual"] = r.cert_residual;
        cert["residual_bound"] = 4.0 * r.epsilon;
        j["certificate"] = std::move(cert);
    }
    if (r.ran_witness_field) {
        Json wf;
        wf["label"] = "proof";
        std::size_t ds_all = 0, non_unistochastic = 0;
        for (int v : r.ds_ok) ds_all += static_cast<std::size_t>(v);
        for (int v : r.us3_ok) non_unistochastic += static_cast<std::size_t>(v == 0);
        wf["doubly_stochastic_points"] = ds_all;
        wf["non_unistochastic_points"] = non_unistochastic;
        j["witness_field"] = std::move(wf);
    }
    return j;
}

}  // namespace majorize
