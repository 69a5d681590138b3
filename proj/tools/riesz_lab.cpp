// Command-line front-end. Subcommands: classify, spectrum, essrad, iterate,
// weights, shift. A --config JSON file overrides flags; RIESZ_LAB_SEED sets
// the default seed. Exit codes: 0 definite result, 2 usage/config error,
// 3 inconclusive classification.

#include <CLI11.hpp>

#include <rieszlab/cli.hpp>

namespace {

using rieszlab::cli::RunConfig;
using rieszlab::cli::usage_error;
using json = rieszlab::json;

void apply_config_json(RunConfig& cfg, const json& j) {
    if (!j.is_object()) throw usage_error("config: expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        if (k == "map") cfg.map_spec = v.get<std::string>();
        else if (k == "weights") cfg.weights_spec = v.get<std::string>();
        else if (k == "algebra") cfg.algebra = v.get<std::string>();
        else if (k == "norm") cfg.norm = v.get<std::string>();
        else if (k == "domain") {
            auto d = v.get<std::vector<double>>();
            if (d.size() != 2) throw usage_error("config: domain must be [lo, hi]");
            cfg.domain_lo = d[0];
            cfg.domain_hi = d[1];
        }
        else if (k == "degree") cfg.degree = v.get<int>();
        else if (k == "nmax") cfg.nmax = v.get<int>();
        else if (k == "grid") cfg.grid = v.get<int>();
        else if (k == "N") cfg.weights_N = v.get<int>();
        else if (k == "tol") cfg.tol = v.get<double>();
        else if (k == "x0") cfg.x0_override = v.get<double>();
        else if (k == "seed") cfg.seed = v.get<std::uint64_t>();
        else if (k == "out") cfg.out_path = v.get<std::string>();
        else if (k == "csv") cfg.csv_path = v.get<std::string>();
        else if (k == "matrix_csv") cfg.matrix_csv = v.get<std::string>();
        else if (k == "matrix_json") cfg.matrix_json = v.get<std::string>();
        else if (k == "witness") cfg.shift_witness = v.get<bool>();
        else if (k == "certificate") cfg.shift_certificate = v.get<bool>();
        else if (k == "sup") cfg.shift_sup = v.get<bool>();
        else if (k == "apply") cfg.shift_apply_point = v.get<std::string>();
        else if (k == "n") cfg.shift_n = v.get<int>();
        else if (k == "jtest") cfg.jtest = v.get<int>();
        else if (k == "J") cfg.trunc_J = v.get<int>();
        else if (k == "K") cfg.trunc_K = v.get<int>();
        else if (k == "samples") cfg.samples = v.get<int>();
        else if (k == "deriv_zero_tol") cfg.thresholds.deriv_zero_tol = v.get<double>();
        else if (k == "constancy_cap") cfg.thresholds.constancy_cap = v.get<int>();
        else if (k == "constancy_rel_tol") cfg.thresholds.constancy_rel_tol = v.get<double>();
        else if (k == "shrink_ratio") cfg.thresholds.shrink_ratio = v.get<double>();
        else if (k == "essrad_nmax") cfg.thresholds.essrad_nmax = v.get<int>();
        else throw usage_error("config: unknown key '" + k + "'");
    }
}

void check_positive(const RunConfig& cfg) {
    if (cfg.degree < 1 || cfg.nmax < 1 || cfg.grid < 1 || cfg.weights_N < 1 ||
        cfg.shift_n < 0 || cfg.jtest < 1 || cfg.trunc_J < 1 || cfg.trunc_K < 1 ||
        cfg.samples < 1 || !(cfg.tol > 0.0))
        throw usage_error("all numeric parameters must be positive");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"riesz-lab: classify composition endomorphisms T f = f o phi of C1[0,1] "
                 "and Dales-Davie algebras, compute spectra and essential-radius bounds, "
                 "and simulate the weighted shift on the ball of l_inf(N^2)"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_file;
    std::string weights_kind;
    double weights_param = 2.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out_path, "JSON report path (default: stdout)");
        sub->add_option("--csv", cfg.csv_path, "sequence CSV path");
        sub->add_option("--seed", cfg.seed, "random seed")->envname("RIESZ_LAB_SEED");
        sub->add_option("--config", config_file, "JSON file overriding the flags");
        sub->add_option("--grid", cfg.grid, "grid size for sup-norm estimates");
        sub->add_option("--domain", [&cfg](const std::vector<std::string>& vals) {
            if (vals.size() != 2) return false;
            cfg.domain_lo = std::stod(vals[0]);
            cfg.domain_hi = std::stod(vals[1]);
            return true;
        }, "map domain endpoints (default 0 1)")->expected(2);
    };

    auto* classify = app.add_subcommand("classify", "decide Compact / PowerCompact / "
                                                    "RieszNotPowerCompact / NotRiesz");
    classify->add_option("--map", cfg.map_spec, "map JSON, file, expression, or shorthand");
    classify->add_option("--algebra", cfg.algebra, "c1 or ddm");
    classify->add_option("--weights", cfg.weights_spec, "weight spec (ddm only)");
    classify->add_option("--N", cfg.weights_N, "weight window for named families");
    classify->add_option("--deriv-zero-tol", cfg.thresholds.deriv_zero_tol,
                         "|phi'(x0)| at or below counts as zero");
    classify->add_option("--constancy-cap", cfg.thresholds.constancy_cap,
                         "iterate constancy scan depth");
    classify->add_option("--constancy-rel-tol", cfg.thresholds.constancy_rel_tol,
                         "relative zero tolerance for iterate constancy (0 = exact)");
    classify->add_option("--shrink-ratio", cfg.thresholds.shrink_ratio,
                         "per-step decay certifying a singleton intersection");
    classify->add_option("--essrad-nmax", cfg.thresholds.essrad_nmax,
                         "window for the decay certificate");
    add_common(classify);

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues vs the geometric prediction");
    spectrum->add_option("--map", cfg.map_spec, "map spec");
    spectrum->add_option("--degree", cfg.degree, "basis truncation degree");
    spectrum->add_option("--x0", [&cfg](const std::vector<std::string>& vals) {
        cfg.x0_override = std::stod(vals[0]);
        return true;
    }, "fixed point (default: Picard search)");
    spectrum->add_option("--tol", cfg.tol, "matching tolerance");
    spectrum->add_option("--matrix-csv", cfg.matrix_csv, "dump the operator matrix as CSV");
    spectrum->add_option("--matrix-json", cfg.matrix_json, "dump the operator matrix as JSON");
    add_common(spectrum);

    auto* essrad = app.add_subcommand("essrad", "essential-spectral-radius brackets per n");
    essrad->add_option("--map", cfg.map_spec, "map spec");
    essrad->add_option("--norm", cfg.norm, "c1 or sup");
    essrad->add_option("--nmax", cfg.nmax, "sequence length");
    essrad->add_option("--x0", [&cfg](const std::vector<std::string>& vals) {
        cfg.x0_override = std::stod(vals[0]);
        return true;
    }, "fixed point (default: Picard search)");
    add_common(essrad);

    auto* iterate = app.add_subcommand("iterate", "iterate diameters and derivative sups");
    iterate->add_option("--map", cfg.map_spec, "map spec");
    iterate->add_option("--nmax", cfg.nmax, "iterates to report");
    add_common(iterate);

    auto* weights = app.add_subcommand("weights", "admissibility and nonanalyticity report");
    weights->add_option("--kind", weights_kind, "factorial_sq | factorial | factorial_pow");
    weights->add_option("--param", weights_param, "exponent for factorial_pow");
    weights->add_option("--N", cfg.weights_N, "window length");
    weights->add_option("--weights", cfg.weights_spec, "full weight spec (overrides --kind)");
    add_common(weights);

    auto* shift = app.add_subcommand("shift", "weighted shift on the ball of l_inf(N^2)");
    shift->add_flag("--witness", cfg.shift_witness, "pairwise T^n p_{j,1} separation");
    shift->add_flag("--certificate", cfg.shift_certificate, "C_n^{1/n} Riesz certificate");
    shift->add_flag("--sup", cfg.shift_sup, "sup of d_inf(phi_n(x), 0) over the ball");
    shift->add_option("--apply", cfg.shift_apply_point, "apply the shift n times to a point");
    shift->add_option("--n", cfg.shift_n, "shift power");
    shift->add_option("--nmax", cfg.nmax, "certificate window");
    shift->add_option("--jtest", cfg.jtest, "projections tested pairwise");
    shift->add_option("--J", cfg.trunc_J, "row truncation");
    shift->add_option("--K", cfg.trunc_K, "column truncation");
    shift->add_option("--samples", cfg.samples, "random ball samples");
    add_common(shift);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? rieszlab::cli::kExitOk : rieszlab::cli::kExitUsage;
    }

    try {
        if (!config_file.empty())
            apply_config_json(cfg, json::parse(rieszlab::cli::read_file(config_file)));
        if (weights->parsed() && cfg.weights_spec.empty() && !weights_kind.empty()) {
            cfg.weights_spec = weights_kind == "factorial_pow"
                                   ? "factorial_pow:" + std::to_string(weights_param)
                                   : weights_kind;
        }
        check_positive(cfg);
        if (classify->parsed()) {
            cfg.command = "classify";
            return rieszlab::cli::cmd_classify(cfg);
        }
        if (spectrum->parsed()) {
            cfg.command = "spectrum";
            return rieszlab::cli::cmd_spectrum(cfg);
        }
        if (essrad->parsed()) {
            cfg.command = "essrad";
            return rieszlab::cli::cmd_essrad(cfg);
        }
        if (iterate->parsed()) {
            cfg.command = "iterate";
            return rieszlab::cli::cmd_iterate(cfg);
        }
        if (weights->parsed()) {
            cfg.command = "weights";
            return rieszlab::cli::cmd_weights(cfg);
        }
        cfg.command = "shift";
        return rieszlab::cli::cmd_shift(cfg);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return rieszlab::cli::kExitUsage;
    } catch (const json::exception& e) {
        std::cerr << "error: invalid JSON: " << e.what() << "\n";
        return rieszlab::cli::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
