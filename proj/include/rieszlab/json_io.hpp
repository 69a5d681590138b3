#pragma once

// JSON and CSV forms of the library's value types. Keys are validated
// strictly: unknown keys are rejected so config typos fail loudly.

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "classifier.hpp"
#include "dales_davie.hpp"
#include "gleason_shift.hpp"
#include "operator.hpp"
#include "selfmap.hpp"
#include "spectra.hpp"

namespace rieszlab {

using json = nlohmann::json;

inline void require_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw std::invalid_argument(what + ": unknown key '" + it.key() + "'");
    }
}

// PolyMap: {"coeffs":[...], "domain":[lo,hi]} (domain defaults to [0,1])
inline json polymap_to_json(const PolyMap& m) {
    return json{{"coeffs", m.poly().coeffs()}, {"domain", {m.domain().lo, m.domain().hi}}};
}

inline PolyMap polymap_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("map: expected a JSON object");
    require_keys(j, {"coeffs", "domain"}, "map");
    if (!j.contains("coeffs")) throw std::invalid_argument("map: missing 'coeffs'");
    std::vector<double> coeffs = j.at("coeffs").get<std::vector<double>>();
    Interval dom{0.0, 1.0};
    if (j.contains("domain")) {
        auto d = j.at("domain").get<std::vector<double>>();
        if (d.size() != 2) throw std::invalid_argument("map: 'domain' must be [lo, hi]");
        dom = {d[0], d[1]};
    }
    return PolyMap(Poly(std::move(coeffs)), dom);
}

// WeightSequence: {"kind":"factorial_sq","N":n} | {"kind":"factorial_pow",
// "param":p,"N":n} | {"kind":"explicit","values":[...]}
inline WeightSequence weights_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("weights: expected a JSON object");
    require_keys(j, {"kind", "param", "N", "values"}, "weights");
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "factorial_sq") return WeightSequence::factorial_sq(j.at("N").get<int>());
    if (kind == "factorial_pow")
        return WeightSequence::factorial_pow(j.at("param").get<double>(), j.at("N").get<int>());
    if (kind == "explicit")
        return WeightSequence::from_values(j.at("values").get<std::vector<double>>());
    throw std::invalid_argument("weights: unknown kind '" + kind + "'");
}

// ShiftPoint: dense array with truncation header
inline json shift_point_to_json(const ShiftPoint& p) {
    json rows = json::array();
    for (int j = 1; j <= p.J; ++j) {
        json row = json::array();
        for (int k = 1; k <= p.K; ++k) {
            cd v = p.at(j, k);
            row.push_back({v.real(), v.imag()});
        }
        rows.push_back(std::move(row));
    }
    return json{{"truncation", {p.J, p.K}}, {"values", std::move(rows)}};
}

inline ShiftPoint shift_point_from_json(const json& j) {
    require_keys(j, {"truncation", "values"}, "shift point");
    auto tr = j.at("truncation").get<std::vector<int>>();
    if (tr.size() != 2) throw std::invalid_argument("shift point: truncation must be [J, K]");
    ShiftPoint p = ShiftPoint::zeros(tr[0], tr[1]);
    const json& rows = j.at("values");
    for (int jj = 1; jj <= p.J; ++jj) {
        const json& row = rows.at(static_cast<std::size_t>(jj - 1));
        for (int k = 1; k <= p.K; ++k) {
            const json& e = row.at(static_cast<std::size_t>(k - 1));
            p.set(jj, k, cd(e.at(0).get<double>(), e.at(1).get<double>()));
        }
    }
    return p;
}

inline json classify_config_to_json(const ClassifyConfig& c) {
    return json{{"deriv_zero_tol", c.deriv_zero_tol},
                {"constancy_cap", c.constancy_cap},
                {"constancy_rel_tol", c.constancy_rel_tol},
                {"max_iterate_degree", c.max_iterate_degree},
                {"picard_seeds", c.picard_seeds},
                {"shrink_ratio", c.shrink_ratio},
                {"shrink_window", c.shrink_window},
                {"stall_ratio", c.stall_ratio},
                {"stall_floor_rel", c.stall_floor_rel},
                {"essrad_nmax", c.essrad_nmax},
                {"grid_size", c.grid_size},
                {"dd_chain_check_nmax", c.dd_chain_check_nmax}};
}

inline json classification_to_json(const Classification& c) {
    json ev = json::array();
    for (const EvidenceFact& f : c.evidence) {
        json e{{"name", f.name}, {"value", f.value}, {"rule", f.rule}};
        if (f.bracket) e["bracket"] = {(*f.bracket)[0], (*f.bracket)[1]};
        ev.push_back(std::move(e));
    }
    json out{{"verdict", verdict_name(c.verdict)},
             {"algebra", c.algebra},
             {"evidence", std::move(ev)},
             {"assumptions", c.assumptions},
             {"config", classify_config_to_json(c.config)}};
    if (c.verdict == Verdict::PowerCompact) out["power"] = c.power;
    if (c.fixed_point.seeds_total > 0) {
        out["fixed_point"] = json{{"found", c.fixed_point.found},
                                  {"x0", c.fixed_point.x0},
                                  {"residual", c.fixed_point.residual},
                                  {"derivative_at_x0", c.fixed_point.derivative_at_x0},
                                  {"seeds_agreeing", c.fixed_point.seeds_agreeing},
                                  {"seeds_total", c.fixed_point.seeds_total}};
    }
    return out;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string matrix_to_csv(const OperatorMatrix& m) {
    std::string s = "row,col,re,im\n";
    for (int i = 0; i <= m.degree; ++i)
        for (int j = 0; j <= m.degree; ++j) {
            cd v = m.entries(i, j);
            s += std::to_string(i) + "," + std::to_string(j) + "," + format_double(v.real()) +
                 "," + format_double(v.imag()) + "\n";
        }
    return s;
}

inline json matrix_to_json(const OperatorMatrix& m) {
    json rows = json::array();
    for (int i = 0; i <= m.degree; ++i) {
        json row = json::array();
        for (int j = 0; j <= m.degree; ++j)
            row.push_back({m.entries(i, j).real(), m.entries(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return json{{"degree", m.degree},
                {"x0", m.x0},
                {"map", polymap_to_json(m.map)},
                {"truncated_columns", m.truncated_columns},
                {"entries", std::move(rows)}};
}

inline std::string essrad_to_csv(const std::vector<EssRadPoint>& seq) {
    std::string s = "n,log_lower,log_upper\n";
    for (const EssRadPoint& p : seq)
        s += std::to_string(p.n) + "," + format_double(p.log_lower) + "," +
             format_double(p.log_upper) + "\n";
    return s;
}

inline std::string spectrum_to_csv(const SpectrumReport& rep) {
    std::vector<int> match_of(rep.computed.size(), -1);
    for (auto [pi, ci] : rep.matched_pairs) match_of[static_cast<std::size_t>(ci)] = pi;
    std::string s = "re,im,matched_predicted_index\n";
    for (std::size_t i = 0; i < rep.computed.size(); ++i)
        s += format_double(rep.computed[i].real()) + "," + format_double(rep.computed[i].imag()) +
             "," + std::to_string(match_of[i]) + "\n";
    return s;
}

inline json spectrum_report_to_json(const SpectrumReport& rep) {
    json computed = json::array(), predicted = json::array(), pairs = json::array();
    for (const cd& v : rep.computed) computed.push_back({v.real(), v.imag()});
    for (const cd& v : rep.predicted) predicted.push_back({v.real(), v.imag()});
    for (auto [pi, ci] : rep.matched_pairs) pairs.push_back({pi, ci});
    return json{{"computed", std::move(computed)},
                {"predicted", std::move(predicted)},
                {"matched_pairs", std::move(pairs)},
                {"unmatched_predicted", rep.unmatched_predicted},
                {"multiplicity_table", rep.multiplicity_table},
                {"max_mismatch", rep.max_mismatch},
                {"tol", rep.tol},
                {"all_matched", rep.all_matched},
                {"multiplicities_ok", rep.multiplicities_ok}};
}

inline std::string witness_to_csv(const std::vector<WitnessPair>& pairs) {
    std::string s = "j,jp,distance\n";
    for (const WitnessPair& p : pairs)
        s += std::to_string(p.j) + "," + std::to_string(p.jp) + "," +
             format_double(p.distance) + "\n";
    return s;
}

inline std::string riesz_certificate_to_csv(const std::vector<RieszCertRow>& rows) {
    std::string s = "n,c_upper,c_root\n";
    for (const RieszCertRow& r : rows)
        s += std::to_string(r.n) + "," + format_double(r.c_upper) + "," +
             format_double(r.c_root) + "\n";
    return s;
}

inline json admissibility_to_json(const AdmissibilityReport& rep) {
    json out{{"binomial_ok", rep.binomial_ok},
             {"nonanalytic_ok", rep.nonanalytic_ok},
             {"nonanalytic_tail", rep.nonanalytic_tail},
             {"window", rep.window},
             {"tail_threshold", rep.tail_threshold},
             {"certified_at_window", rep.window}};
    if (rep.first_violation)
        out["first_violation"] = {rep.first_violation->first, rep.first_violation->second};
    return out;
}

}  // namespace rieszlab
