#pragma once

// Batch front-end: map/weight parsing (inline JSON, file path, or a small
// polynomial expression form), subcommand drivers, and report writers.
// Reports embed the full effective configuration; identical config and seed
// give byte-identical output.

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "json_io.hpp"

namespace rieszlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInconclusive = 3;

class usage_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// polynomial expression parsing: sums of terms like "0.25", "x", "x^2/2",
// "0.5*x", "3*x^4/8"

namespace detail {

struct Tokenizer {
    std::string s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }
    bool eat(char c) {
        if (!peek(c)) return false;
        ++pos;
        return true;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    double number() {
        skip_ws();
        std::size_t end = 0;
        double v = 0.0;
        try {
            v = std::stod(s.substr(pos), &end);
        } catch (const std::exception&) {
            throw usage_error("map expression: expected a number near '" + s.substr(pos) + "'");
        }
        pos += end;
        return v;
    }
    int integer() {
        double v = number();
        int i = static_cast<int>(v);
        if (static_cast<double>(i) != v || i < 0)
            throw usage_error("map expression: exponent must be a nonnegative integer");
        return i;
    }
};

}  // namespace detail

/// Parses sums of monomial terms in x into coefficients.
inline Poly parse_poly_expression(const std::string& text) {
    detail::Tokenizer tk{text};
    std::vector<double> coeffs;
    auto add = [&](int power, double c) {
        if (static_cast<std::size_t>(power) >= coeffs.size())
            coeffs.resize(static_cast<std::size_t>(power) + 1, 0.0);
        coeffs[static_cast<std::size_t>(power)] += c;
    };
    bool first = true;
    while (!tk.done()) {
        double sign = 1.0;
        if (tk.eat('+')) {
        } else if (tk.eat('-')) {
            sign = -1.0;
        } else if (!first) {
            throw usage_error("map expression: expected '+' or '-' between terms");
        }
        first = false;
        double coeff = sign;
        int power = 0;
        bool saw_factor = false;
        for (;;) {
            tk.skip_ws();
            if (tk.peek('x')) {
                tk.eat('x');
                int e = 1;
                if (tk.eat('^')) e = tk.integer();
                power += e;
                saw_factor = true;
            } else if (!tk.done() && (std::isdigit(static_cast<unsigned char>(tk.s[tk.pos])) ||
                                      tk.s[tk.pos] == '.')) {
                coeff *= tk.number();
                saw_factor = true;
            } else {
                break;
            }
            if (tk.eat('*')) continue;
            if (tk.eat('/')) {
                double den = tk.number();
                if (den == 0.0) throw usage_error("map expression: division by zero");
                coeff /= den;
                continue;
            }
            break;
        }
        if (!saw_factor) throw usage_error("map expression: empty term in '" + text + "'");
        add(power, coeff);
    }
    if (first) throw usage_error("map expression: empty input");
    return Poly(std::move(coeffs));
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot write file: " + path);
    out << content;
}

inline bool file_exists(const std::string& path) {
    std::ifstream in(path);
    return static_cast<bool>(in);
}

/// Map spec: inline JSON object, path to a JSON file, the shorthands
/// "identity" / "constant" / "constant:<c>", or a polynomial expression.
inline PolyMap parse_map_spec(const std::string& spec, Interval domain = {0.0, 1.0}) {
    if (spec.empty()) throw usage_error("missing --map");
    try {
        if (spec.front() == '{') return polymap_from_json(json::parse(spec));
        if (file_exists(spec)) return polymap_from_json(json::parse(read_file(spec)));
        if (spec == "identity") return PolyMap::identity(domain);
        if (spec == "constant") return PolyMap::constant(0.5, domain);
        if (spec.rfind("constant:", 0) == 0)
            return PolyMap::constant(std::stod(spec.substr(9)), domain);
        return PolyMap(parse_poly_expression(spec), domain);
    } catch (const json::exception& e) {
        throw usage_error(std::string("map: invalid JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw usage_error(std::string("map: ") + e.what());
    } catch (const std::domain_error& e) {
        throw usage_error(std::string("map: ") + e.what());
    }
}

/// Weight spec: "factorial_sq", "factorial_pow:<p>", "factorial",
/// inline JSON, or a JSON file. N applies to the named families.
inline WeightSequence parse_weights_spec(const std::string& spec, int N) {
    if (spec.empty()) throw usage_error("missing --weights");
    try {
        if (spec.front() == '{') return weights_from_json(json::parse(spec));
        if (file_exists(spec)) return weights_from_json(json::parse(read_file(spec)));
        if (spec == "factorial_sq") return WeightSequence::factorial_sq(N);
        if (spec == "factorial") return WeightSequence::factorial(N);
        if (spec.rfind("factorial_pow:", 0) == 0)
            return WeightSequence::factorial_pow(std::stod(spec.substr(14)), N);
        throw usage_error("weights: unknown spec '" + spec + "'");
    } catch (const json::exception& e) {
        throw usage_error(std::string("weights: invalid JSON: ") + e.what());
    } catch (const invalid_weight_error& e) {
        throw usage_error(std::string("weights: ") + e.what());
    }
}

// ---------------------------------------------------------------------------

struct RunConfig {
    std::string command;
    std::string map_spec;
    std::string weights_spec;
    std::string algebra = "c1";
    std::string norm = "c1";
    double domain_lo = 0.0, domain_hi = 1.0;
    int degree = 32;
    int nmax = 20;
    int grid = 1024;
    int weights_N = 40;
    double tol = 1e-8;
    std::optional<double> x0_override;
    // shift command
    bool shift_witness = false;
    bool shift_certificate = false;
    bool shift_sup = false;
    std::string shift_apply_point;  // path to a point JSON
    int shift_n = 4;
    int jtest = 10;
    int trunc_J = 64;
    int trunc_K = 64;
    int samples = 100;
    std::uint64_t seed = 1;
    ClassifyConfig thresholds;
    std::string out_path;
    std::string csv_path;
    std::string matrix_csv;
    std::string matrix_json;
};

inline json effective_config(const RunConfig& c) {
    json j{{"command", c.command},
           {"map", c.map_spec},
           {"weights", c.weights_spec},
           {"algebra", c.algebra},
           {"norm", c.norm},
           {"domain", {c.domain_lo, c.domain_hi}},
           {"degree", c.degree},
           {"nmax", c.nmax},
           {"grid", c.grid},
           {"weights_N", c.weights_N},
           {"tol", c.tol},
           {"shift", {{"witness", c.shift_witness},
                      {"certificate", c.shift_certificate},
                      {"sup", c.shift_sup},
                      {"apply_point", c.shift_apply_point},
                      {"n", c.shift_n},
                      {"jtest", c.jtest},
                      {"J", c.trunc_J},
                      {"K", c.trunc_K},
                      {"samples", c.samples}}},
           {"seed", c.seed},
           {"thresholds", classify_config_to_json(c.thresholds)},
           {"out", c.out_path},
           {"csv", c.csv_path}};
    if (c.x0_override) j["x0"] = *c.x0_override;
    return j;
}

inline void emit_report(const RunConfig& cfg, json report) {
    report["config"] = effective_config(cfg);
    std::string text = report.dump(2);
    text += "\n";
    if (cfg.out_path.empty())
        std::cout << text;
    else
        write_file(cfg.out_path, text);
}

inline Interval config_domain(const RunConfig& cfg) {
    if (!(cfg.domain_lo < cfg.domain_hi)) throw usage_error("domain requires lo < hi");
    return {cfg.domain_lo, cfg.domain_hi};
}

inline NormKind parse_norm(const std::string& s) {
    if (s == "c1") return NormKind::c1;
    if (s == "sup") return NormKind::sup;
    throw usage_error("norm must be 'c1' or 'sup'");
}

/// x0 for spectrum/essrad: the override when given, otherwise the Picard
/// fixed point; failure to locate one is a usage-level error.
inline double resolve_x0(const RunConfig& cfg, const PolyMap& map) {
    if (cfg.x0_override) {
        if (std::abs(map.raw(*cfg.x0_override) - *cfg.x0_override) > 1e-8)
            throw usage_error("x0 is not a fixed point of the map");
        return *cfg.x0_override;
    }
    auto fp = find_fixed_point(map, 100);
    if (!fp.found)
        throw usage_error("no unique attracting fixed point found; pass --x0 explicitly");
    return fp.x0;
}

inline int cmd_classify(const RunConfig& cfg) {
    PolyMap map = parse_map_spec(cfg.map_spec, config_domain(cfg));
    ClassifyConfig th = cfg.thresholds;
    th.grid_size = cfg.grid;
    Classification result;
    if (cfg.algebra == "c1") {
        result = classify_c1(map, th);
    } else if (cfg.algebra == "ddm") {
        WeightSequence w = parse_weights_spec(cfg.weights_spec, cfg.weights_N);
        try {
            result = classify_dd(map, w, th);
        } catch (const std::invalid_argument& e) {
            throw usage_error(e.what());
        }
    } else {
        throw usage_error("algebra must be 'c1' or 'ddm'");
    }
    json rep = classification_to_json(result);
    rep["map"] = polymap_to_json(map);
    emit_report(cfg, std::move(rep));
    return result.verdict == Verdict::Inconclusive ? kExitInconclusive : kExitOk;
}

inline int cmd_spectrum(const RunConfig& cfg) {
    PolyMap map = parse_map_spec(cfg.map_spec, config_domain(cfg));
    if (cfg.degree < 1 || cfg.degree > 511) throw usage_error("degree must be in [1, 511]");
    double x0 = resolve_x0(cfg, map);
    double dphi = map.poly().derivative()(x0);
    if (!(std::abs(dphi) < 1.0))
        throw usage_error(
            "spectrum requires |phi'(x0)| < 1 at the fixed point (the Riesz derivative "
            "condition fails)");
    auto om = build_matrix(map, x0, cfg.degree);
    auto eigs = eigenvalues(om);
    auto predicted = predicted_spectrum(map, x0, cfg.degree);
    auto rep = compare(eigs, predicted, cfg.tol);
    if (!cfg.csv_path.empty()) write_file(cfg.csv_path, spectrum_to_csv(rep));
    if (!cfg.matrix_csv.empty()) write_file(cfg.matrix_csv, matrix_to_csv(om));
    if (!cfg.matrix_json.empty()) write_file(cfg.matrix_json, matrix_to_json(om).dump(2) + "\n");
    json out = spectrum_report_to_json(rep);
    out["x0"] = x0;
    out["phi_prime_x0"] = dphi;
    out["truncated_columns"] = om.truncated_columns;
    emit_report(cfg, std::move(out));
    return kExitOk;
}

inline int cmd_essrad(const RunConfig& cfg) {
    PolyMap map = parse_map_spec(cfg.map_spec, config_domain(cfg));
    if (cfg.nmax < 2) throw usage_error("essrad requires --nmax >= 2");
    double x0 = resolve_x0(cfg, map);
    auto seq = essential_radius_sequence(map, x0, parse_norm(cfg.norm), cfg.nmax, cfg.grid);
    if (!cfg.csv_path.empty()) write_file(cfg.csv_path, essrad_to_csv(seq));
    json rows = json::array();
    for (const auto& p : seq) rows.push_back({p.n, p.log_lower, p.log_upper});
    json out{{"x0", x0},
             {"rows", std::move(rows)},
             {"r_nmax_lower", std::exp(seq.back().log_lower)},
             {"r_nmax_upper", std::exp(seq.back().log_upper)},
             {"note", "upper bound via the rank-one witness L f = f(x0) 1; lower valid "
                      "against every compact operator in the c1 norm"}};
    emit_report(cfg, std::move(out));
    return kExitOk;
}

inline int cmd_iterate(const RunConfig& cfg) {
    PolyMap map = parse_map_spec(cfg.map_spec, config_domain(cfg));
    if (cfg.nmax < 1) throw usage_error("iterate requires --nmax >= 1");
    FixedPointOptions fpo;
    fpo.diameter_window = cfg.nmax;
    fpo.diameter_grid = std::max(64, cfg.grid / 2);
    auto fp = find_fixed_point(map, 100, fpo);
    std::string csv = "n,diameter,log_deriv_sup\n";
    json rows = json::array();
    for (int n = 1; n <= cfg.nmax; ++n) {
        double d = fp.basin_diameter_sequence[static_cast<std::size_t>(n - 1)];
        double ls = iterate_deriv_log_sup(map, n, std::max(64, cfg.grid));
        csv += std::to_string(n) + "," + format_double(d) + "," + format_double(ls) + "\n";
        rows.push_back({n, d, ls});
    }
    if (!cfg.csv_path.empty()) write_file(cfg.csv_path, csv);
    json out{{"rows", std::move(rows)},
             {"fixed_point", {{"found", fp.found},
                              {"x0", fp.x0},
                              {"residual", fp.residual},
                              {"derivative_at_x0", fp.derivative_at_x0},
                              {"seeds_agreeing", fp.seeds_agreeing},
                              {"seeds_total", fp.seeds_total}}}};
    emit_report(cfg, std::move(out));
    return kExitOk;
}

inline int cmd_weights(const RunConfig& cfg) {
    WeightSequence w = parse_weights_spec(cfg.weights_spec, cfg.weights_N);
    AdmissibilityReport rep;
    try {
        rep = check_admissible(w);
    } catch (const std::invalid_argument& e) {
        throw usage_error(e.what());
    }
    if (!cfg.csv_path.empty()) {
        std::string csv = "n,tail\n";
        for (std::size_t i = 0; i < rep.nonanalytic_tail.size(); ++i)
            csv += std::to_string(i + 1) + "," + format_double(rep.nonanalytic_tail[i]) + "\n";
        write_file(cfg.csv_path, csv);
    }
    emit_report(cfg, admissibility_to_json(rep));
    return kExitOk;
}

inline int cmd_shift(const RunConfig& cfg) {
    int modes = (cfg.shift_witness ? 1 : 0) + (cfg.shift_certificate ? 1 : 0) +
                (cfg.shift_sup ? 1 : 0) + (cfg.shift_apply_point.empty() ? 0 : 1);
    if (modes != 1)
        throw usage_error("shift requires exactly one of --witness, --certificate, --sup, "
                          "--apply <point.json>");
    try {
        if (cfg.shift_witness) {
            auto pairs = noncompact_witness(cfg.shift_n, cfg.jtest, cfg.trunc_J, cfg.trunc_K);
            if (!cfg.csv_path.empty()) write_file(cfg.csv_path, witness_to_csv(pairs));
            double dmin = 0.0, dmax = 0.0;
            if (!pairs.empty()) {
                dmin = dmax = pairs.front().distance;
                for (const auto& p : pairs) {
                    dmin = std::min(dmin, p.distance);
                    dmax = std::max(dmax, p.distance);
                }
            }
            emit_report(cfg, json{{"pairs", pairs.size()},
                                  {"distance_min", dmin},
                                  {"distance_max", dmax},
                                  {"all_positive", !pairs.empty() && dmin > 0.0}});
            return kExitOk;
        }
        if (cfg.shift_certificate) {
            auto rows = riesz_certificate(cfg.nmax, cfg.trunc_K);
            if (!cfg.csv_path.empty()) write_file(cfg.csv_path, riesz_certificate_to_csv(rows));
            emit_report(cfg, json{{"n_max", cfg.nmax},
                                  {"final_root", rows.back().c_root},
                                  {"decreasing", true}});
            return kExitOk;
        }
        if (cfg.shift_sup) {
            auto rep = shift_iterate_sup(cfg.shift_n, cfg.trunc_J, cfg.trunc_K, cfg.samples,
                                         cfg.seed);
            emit_report(cfg, json{{"n", rep.n},
                                  {"value", rep.value},
                                  {"empirical_max", rep.empirical_max},
                                  {"samples", rep.samples},
                                  {"seed", rep.seed}});
            return kExitOk;
        }
        ShiftPoint p = shift_point_from_json(json::parse(read_file(cfg.shift_apply_point)));
        for (int i = 0; i < cfg.shift_n; ++i) p = shift_apply(p);
        emit_report(cfg, json{{"point", shift_point_to_json(p)}, {"sup_norm", p.sup_norm()}});
        return kExitOk;
    } catch (const truncation_error& e) {
        throw usage_error(e.what());
    } catch (const json::exception& e) {
        throw usage_error(std::string("point: invalid JSON: ") + e.what());
    }
}

}  // namespace rieszlab::cli
