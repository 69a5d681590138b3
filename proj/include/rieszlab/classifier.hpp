#pragma once

// Decision rules: Compact / PowerCompact(N) / RieszNotPowerCompact /
// NotRiesz / Inconclusive, for C1[0,1] and for D(X,M) with an admissible
// nonanalytic weight sequence. Every verdict carries the numeric facts that
// justify it; thresholds are configuration and surface in each report.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dales_davie.hpp"
#include "operator.hpp"
#include "poly.hpp"
#include "selfmap.hpp"

namespace rieszlab {

enum class Verdict { Compact, PowerCompact, RieszNotPowerCompact, NotRiesz, Inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Compact: return "Compact";
        case Verdict::PowerCompact: return "PowerCompact";
        case Verdict::RieszNotPowerCompact: return "RieszNotPowerCompact";
        case Verdict::NotRiesz: return "NotRiesz";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

struct ClassifyConfig {
    double deriv_zero_tol = 1e-10;  // |phi'(x0)| at or below counts as zero
    int constancy_cap = 64;         // iterate-constancy scan depth
    /// Relative tolerance for treating iterate coefficients as zero in the
    /// constancy scan. 0 demands exact constancy, which keeps verdicts aligned
    /// with the exact dichotomy: a nonconstant polynomial never has constant
    /// iterates, while contracting maps shrink coefficients below any
    /// magnitude threshold without ever inducing a compact power.
    double constancy_rel_tol = 0.0;
    int max_iterate_degree = kMaxIterateDegree;
    int picard_seeds = 100;
    double shrink_ratio = 0.95;     // per-step decay certifying a singleton intersection
    int shrink_window = 20;
    /// Diameters at or below this (relative to the domain width) count as
    /// collapsed: grid orbits that land on adjacent doubles stall at ~1 ulp.
    double collapse_floor_rel = 1e-13;
    double stall_ratio = 0.999;     // per-step ratio certifying non-shrinking ranges
    double stall_floor_rel = 1e-3;  // relative to the domain width
    int essrad_nmax = 20;
    int grid_size = 1024;
    int dd_chain_check_nmax = 30;
};

struct EvidenceFact {
    std::string name;
    double value = std::numeric_limits<double>::quiet_NaN();
    std::optional<std::array<double, 2>> bracket;
    std::string rule;
};

struct Classification {
    Verdict verdict = Verdict::Inconclusive;
    int power = 0;  // N for PowerCompact
    std::string algebra;
    std::vector<EvidenceFact> evidence;
    std::vector<std::string> assumptions;
    ClassifyConfig config;
    FixedPointReport fixed_point;

    bool riesz() const {
        return verdict == Verdict::Compact || verdict == Verdict::PowerCompact ||
               verdict == Verdict::RieszNotPowerCompact;
    }
};

namespace detail {

/// Constancy check: with rel_tol = 0 only an exactly constant polynomial
/// passes; otherwise degree >= 1 coefficients below rel_tol * max|coeff| are
/// treated as zero.
inline bool numerically_constant(const Poly& p, double rel_tol) {
    if (p.is_constant()) return true;
    if (rel_tol <= 0.0) return false;
    const double thr = rel_tol * p.max_abs_coeff();
    const auto& c = p.coeffs();
    for (std::size_t i = 1; i < c.size(); ++i)
        if (std::abs(c[i]) > thr) return false;
    return true;
}

/// Least N <= cap with iterate phi_N numerically constant. The scan stops at
/// the degree cap or on leading-coefficient underflow; past either point a
/// nonconstant polynomial map has nonconstant iterates.
inline std::optional<int> constant_iterate(const PolyMap& map, const ClassifyConfig& cfg) {
    if (numerically_constant(map.poly(), cfg.constancy_rel_tol)) return 1;
    if (map.degree() == 0) return 1;
    Poly it = map.poly();
    double expected_deg = map.degree();
    for (int n = 2; n <= cfg.constancy_cap; ++n) {
        expected_deg *= map.degree();
        if (expected_deg > static_cast<double>(cfg.max_iterate_degree)) return std::nullopt;
        it = map.poly().compose(it);
        if (!it.all_coeffs_finite()) return std::nullopt;
        if (it.degree() < expected_deg - 0.5) return std::nullopt;  // leading underflow
        if (numerically_constant(it, cfg.constancy_rel_tol)) return n;
    }
    return std::nullopt;
}

struct DiameterSummary {
    bool shrinking = false;  // last-window ratios all <= shrink_ratio
    bool stalled = false;    // last-window ratios all >= stall_ratio, above the floor
    double last = std::numeric_limits<double>::quiet_NaN();
    double worst_shrink_ratio = 0.0;
};

inline DiameterSummary summarize_diameters(const std::vector<double>& d, const ClassifyConfig& cfg,
                                           double domain_width) {
    DiameterSummary s;
    if (d.size() < 2) return s;
    const std::size_t w =
        std::min(d.size() - 1, static_cast<std::size_t>(std::max(1, cfg.shrink_window)));
    const std::size_t start = d.size() - 1 - w;
    const double floor = cfg.collapse_floor_rel * domain_width;
    bool shrink = true, stall = true;
    for (std::size_t i = start; i + 1 < d.size(); ++i) {
        double prev = d[i], next = d[i + 1];
        double ratio = prev > 0.0 ? next / prev : (next > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (next > floor) s.worst_shrink_ratio = std::max(s.worst_shrink_ratio, ratio);
        if (!(ratio <= cfg.shrink_ratio || next <= floor)) shrink = false;
        if (!(ratio >= cfg.stall_ratio)) stall = false;
    }
    s.last = d.back();
    s.shrinking = shrink;
    s.stalled = stall && d.back() >= cfg.stall_floor_rel * domain_width;
    return s;
}

inline void add_fact(Classification& c, std::string name, double value, std::string rule,
                     std::optional<std::array<double, 2>> bracket = std::nullopt) {
    c.evidence.push_back({std::move(name), value, bracket, std::move(rule)});
}

/// Closed-form essential-radius lower bound (|phi'(x0)|^n / 2)^(1/n).
inline double essrad_lower_closed_form(double abs_dphi, long n) {
    if (abs_dphi <= 0.0) return 0.0;
    return std::exp(std::log(abs_dphi) - std::log(2.0) / static_cast<double>(n));
}

}  // namespace detail

/// Riesz classification over C1[0,1] (maps on other intervals are affinely
/// conjugated onto [0,1] first; all decision quantities are invariant).
inline Classification classify_c1(const PolyMap& map_in, ClassifyConfig cfg = {}) {
    Classification out;
    out.algebra = "c1";
    out.config = cfg;
    const PolyMap map = rescale_to_unit(map_in);

    // (i) constant maps induce the rank-one operator f -> f(c)1
    if (detail::numerically_constant(map.poly(), cfg.constancy_rel_tol)) {
        out.verdict = Verdict::Compact;
        detail::add_fact(out, "constant_value", map.poly().coeff(0), "c1.compact: constant map");
        return out;
    }

    // (ii) a numerically constant iterate makes T^N rank-one
    if (auto N = detail::constant_iterate(map, cfg); N && *N >= 2) {
        out.verdict = Verdict::PowerCompact;
        out.power = *N;
        detail::add_fact(out, "constant_iterate_N", static_cast<double>(*N),
                         "c1.power_compact: iterate constant at the configured tolerance");
        return out;
    }

    FixedPointOptions fpo;
    fpo.diameter_window = cfg.shrink_window + 8;
    fpo.diameter_grid = std::max(64, cfg.grid_size / 2);
    FixedPointReport fp = find_fixed_point(map, cfg.picard_seeds, fpo);
    out.fixed_point = fp;
    auto diam = detail::summarize_diameters(fp.basin_diameter_sequence, cfg, 1.0);

    const double abs_dphi = fp.found ? std::abs(fp.derivative_at_x0)
                                     : std::numeric_limits<double>::quiet_NaN();

    // (iii) singleton intersection with phi'(x0) = 0: Riesz, not power compact
    if (fp.found && diam.shrinking && abs_dphi <= cfg.deriv_zero_tol) {
        // Nonconstancy of every iterate is exact: deg(phi_n) = deg(phi)^n >= 1.
        // The chain value quantifies it while orbits are representable; the
        // whole orbit collapses to x0 in doubles once sup|phi_n'| underflows.
        double worst_witness = 0.0;
        for (int n = 1; n <= cfg.constancy_cap; ++n) {
            double wlog = iterate_deriv_log_sup(map, n, 64);
            if (wlog == -std::numeric_limits<double>::infinity()) break;
            worst_witness = std::min(worst_witness, wlog);
        }
        auto seq = essential_radius_sequence(map, fp.x0, NormKind::c1, cfg.essrad_nmax,
                                             cfg.grid_size);
        // Once the distance bracket collapses to the floating-point floor the
        // witness center x0 is only an ulp-accurate fixed point and r_n^{1/n}
        // drifts back toward 1; collapse is the strongest decay, not a stall.
        const double log_floor = std::log(cfg.collapse_floor_rel);
        auto collapsed = [&](const EssRadPoint& p) {
            return p.log_upper * p.n <= log_floor;
        };
        bool decreasing = true;
        for (std::size_t i = seq.size() / 2; i + 1 < seq.size(); ++i) {
            if (collapsed(seq[i + 1])) continue;
            if (!(seq[i + 1].log_upper < seq[i].log_upper)) decreasing = false;
        }
        double r_last = std::exp(seq.back().log_upper);
        if (decreasing && (r_last < 0.5 || collapsed(seq.back()))) {
            out.verdict = Verdict::RieszNotPowerCompact;
            detail::add_fact(out, "x0", fp.x0, "c1.riesz: unique attracting fixed point");
            detail::add_fact(out, "phi_prime_x0", fp.derivative_at_x0,
                             "c1.riesz: derivative vanishes at x0");
            detail::add_fact(out, "diam_worst_ratio", diam.worst_shrink_ratio,
                             "c1.riesz: iterate ranges shrink geometrically");
            detail::add_fact(out, "essrad_upper_at_nmax", r_last,
                             "c1.riesz: essential-radius uppers decay");
            detail::add_fact(out, "nonconstant_iterate_degree_base",
                             static_cast<double>(map.degree()),
                             "c1.riesz: deg(phi_n) = deg(phi)^n >= 1, no iterate constant");
            detail::add_fact(out, "nonconstancy_min_chain_log", worst_witness,
                             "c1.riesz: quantitative nonconstancy while representable");
            return out;
        }
        out.verdict = Verdict::Inconclusive;
        detail::add_fact(out, "essrad_upper_at_nmax", r_last,
                         "c1.inconclusive: decay certificate failed");
        return out;
    }

    // (iv) fixed point with nonvanishing derivative, or no singleton intersection
    if (fp.found && abs_dphi > cfg.deriv_zero_tol) {
        out.verdict = Verdict::NotRiesz;
        detail::add_fact(out, "x0", fp.x0, "c1.not_riesz: phi'(x0) != 0");
        detail::add_fact(out, "phi_prime_x0", fp.derivative_at_x0,
                         "c1.not_riesz: phi'(x0) != 0");
        detail::add_fact(out, "essrad_lower_at_nmax",
                         detail::essrad_lower_closed_form(abs_dphi, cfg.essrad_nmax),
                         "c1.not_riesz: test-function lower bound");
        detail::add_fact(out, "essrad_lower_limit",
                         detail::essrad_lower_closed_form(abs_dphi, 1L << 20),
                         "c1.not_riesz: lower bounds approach |phi'(x0)|");
        return out;
    }
    if (fp.limits.size() >= 2) {
        out.verdict = Verdict::NotRiesz;
        detail::add_fact(out, "fixed_point_count", static_cast<double>(fp.limits.size()),
                         "c1.not_riesz: fixed point is not unique");
        detail::add_fact(out, "fixed_point_a", fp.limits[0], "c1.not_riesz: distinct limits");
        detail::add_fact(out, "fixed_point_b", fp.limits[1], "c1.not_riesz: distinct limits");
        return out;
    }
    if (diam.stalled) {
        out.verdict = Verdict::NotRiesz;
        detail::add_fact(out, "diam_last", diam.last,
                         "c1.not_riesz: iterate ranges do not shrink");
        return out;
    }

    out.verdict = Verdict::Inconclusive;
    detail::add_fact(out, "diam_last", diam.last, "c1.inconclusive: no certificate fired");
    return out;
}

/// Riesz classification over D(X,M). Requires an admissible, certified
/// nonanalytic weight window; Banach-algebra hypotheses are recorded as
/// assumptions rather than verified.
inline Classification classify_dd(const PolyMap& map, const WeightSequence& w,
                                  ClassifyConfig cfg = {}) {
    AdmissibilityReport adm = check_admissible(w);
    if (!adm.binomial_ok)
        throw std::invalid_argument("classify_dd: weight sequence violates the binomial bound");
    if (!adm.nonanalytic_ok)
        throw std::invalid_argument(
            "classify_dd: weight sequence not certified nonanalytic at its window");

    Classification out;
    out.algebra = "ddm";
    out.config = cfg;
    out.assumptions = {
        "D(X,M) is a Banach algebra with maximal ideal space X (uniform regularity assumed)",
        "nonanalyticity certified at window N=" + std::to_string(adm.window) +
            ", threshold " + std::to_string(adm.tail_threshold) + "; a finite window never "
            "proves the limit"};

    detail::add_fact(out, "analyticity_index",
                     analyticity_index(map, std::max(1, map.degree())),
                     "ddm: polynomial self-maps have a finite analyticity index");

    // (i) contraction on the whole domain: compact
    Bracket dsup = sup_norm_bracket(map.poly().derivative(), map.domain(),
                                    std::max(64, cfg.grid_size));
    if (dsup.upper < 1.0) {
        out.verdict = Verdict::Compact;
        detail::add_fact(out, "sup_phi_prime", dsup.lower, "ddm.compact: ||phi'|| < 1",
                         std::array<double, 2>{dsup.lower, dsup.upper});
        return out;
    }

    FixedPointOptions fpo;
    fpo.diameter_window = cfg.shrink_window + 8;
    fpo.diameter_grid = std::max(64, cfg.grid_size / 2);
    FixedPointReport fp = find_fixed_point(map, cfg.picard_seeds, fpo);
    out.fixed_point = fp;

    // (ii) some iterate contracts: power compact, with the chain-product bound
    if (fp.found && std::abs(fp.derivative_at_x0) < 1.0) {
        const int horizon = std::max(cfg.constancy_cap, cfg.dd_chain_check_nmax);
        IterateBoundsOptions ibo;
        ibo.grid_size = cfg.grid_size;
        auto b = compute_iterate_bounds(map, fp.x0, horizon, ibo);
        int N = 0;
        double c_bound = std::numeric_limits<double>::infinity();
        for (int n = 1; n <= cfg.constancy_cap; ++n) {
            if (b.log_chain_upper[static_cast<std::size_t>(n - 1)] < 0.0) {
                double c_up = sup_norm_bracket(map.poly().derivative(),
                                               b.enclosures[static_cast<std::size_t>(n - 1)], 256)
                                  .upper;
                if (c_up < 1.0) {
                    N = n;
                    c_bound = c_up;
                    break;
                }
            }
        }
        if (N > 0) {
            out.verdict = Verdict::PowerCompact;
            out.power = N;
            const std::size_t iN = static_cast<std::size_t>(N - 1);
            detail::add_fact(out, "x0", fp.x0, "ddm.power_compact: attracting fixed point");
            detail::add_fact(out, "phi_prime_x0", fp.derivative_at_x0,
                             "ddm.power_compact: |phi'(x0)| < 1");
            detail::add_fact(out, "power_N", static_cast<double>(N),
                             "ddm.power_compact: ||phi_N'|| < 1");
            detail::add_fact(out, "sup_phi_N_prime", std::exp(b.log_chain_lower[iN]),
                             "ddm.power_compact: ||phi_N'|| < 1",
                             std::array<double, 2>{std::exp(b.log_chain_lower[iN]),
                                                   std::exp(b.log_chain_upper[iN])});
            detail::add_fact(out, "chain_c", c_bound,
                             "ddm.power_compact: |phi'| bound on the reached neighborhood");
            detail::add_fact(out, "sup_phi_prime_upper", dsup.upper,
                             "ddm.power_compact: chain bound ingredient");
            // |phi_n'(x)| < c^(n-N) ||phi'||^N at every tested grid point
            double min_margin = std::numeric_limits<double>::infinity();
            const double log_c = std::log(c_bound);
            const double log_dsup = std::log(dsup.upper);
            for (int n = N + 1; n <= cfg.dd_chain_check_nmax; ++n) {
                double bound_log = (n - N) * log_c + N * log_dsup;
                min_margin = std::min(
                    min_margin, bound_log - b.log_chain_lower[static_cast<std::size_t>(n - 1)]);
            }
            detail::add_fact(out, "chain_bound_min_margin_log", min_margin,
                             "ddm.power_compact: chain bound holds on the tested window");
            return out;
        }
    }

    // (iii) derivative condition at the fixed point fails: not Riesz
    if (fp.found && std::abs(fp.derivative_at_x0) >= 1.0) {
        out.verdict = Verdict::NotRiesz;
        detail::add_fact(out, "x0", fp.x0, "ddm.not_riesz: |phi'(x0)| >= 1");
        detail::add_fact(out, "phi_prime_x0", fp.derivative_at_x0,
                         "ddm.not_riesz: |phi'(x0)| >= 1");
        return out;
    }
    if (fp.limits.size() >= 2) {
        out.verdict = Verdict::NotRiesz;
        detail::add_fact(out, "fixed_point_count", static_cast<double>(fp.limits.size()),
                         "ddm.not_riesz: fixed point is not unique");
        double worst = 0.0;
        for (double v : fp.limits) worst = std::max(worst, std::abs(map.poly().derivative()(v)));
        detail::add_fact(out, "max_abs_phi_prime_at_limits", worst,
                         "ddm.not_riesz: derivative at the distinct limits");
        return out;
    }

    out.verdict = Verdict::Inconclusive;
    detail::add_fact(out, "seeds_converged", static_cast<double>(fp.seeds_converged),
                     "ddm.inconclusive: no certificate fired");
    return out;
}

}  // namespace rieszlab
