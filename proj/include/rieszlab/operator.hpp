#pragma once

// The composition endomorphism T f = f.phi on a truncated monomial basis
// centered at a fixed point, plus norm brackets of T^n - L for the rank-one
// witness L f = f(x0) 1 and the essential-spectral-radius sequence.
//
// Everything multiplicative runs in log space: the canonical examples
// underflow doubles by n ~ 10.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "matrix.hpp"
#include "poly.hpp"
#include "selfmap.hpp"

namespace rieszlab {

enum class NormKind { sup, c1, ddm };

inline const char* norm_kind_name(NormKind k) {
    switch (k) {
        case NormKind::sup: return "sup";
        case NormKind::c1: return "c1";
        case NormKind::ddm: return "ddm";
    }
    return "?";
}

struct NormBracket {
    double lower = 0.0;
    double upper = 0.0;
    NormKind kind = NormKind::sup;
};

struct OperatorMatrix {
    CMat entries;
    double x0 = 0.0;
    int degree = 0;
    PolyMap map;
    /// Columns whose high-degree coefficients were discarded by the degree-d
    /// truncation; triangularity claims exclude these.
    std::vector<int> truncated_columns;

    bool truncated() const { return !truncated_columns.empty(); }
};

inline constexpr double kFixedPointResidualTol = 1e-10;

/// Column k holds the basis coefficients of (phi(x) - x0)^k in powers of
/// (x - x0), truncated at degree d. With phi(x0) = x0 the matrix is lower
/// triangular with diagonal (phi'(x0))^k.
inline OperatorMatrix build_matrix(const PolyMap& map, double x0, int d) {
    if (d < 1) throw std::invalid_argument("build_matrix: d must be >= 1");
    if (std::abs(map.raw(x0) - x0) > kFixedPointResidualTol)
        throw std::domain_error("build_matrix: x0 is not a fixed point of phi");
    Poly psi = map.poly().taylor_shift(x0) - Poly::constant(x0);
    OperatorMatrix om{CMat(d + 1), x0, d, map, {}};
    Poly pk = Poly::constant(1.0);
    for (int k = 0; k <= d; ++k) {
        bool trunc = false;
        const auto& c = pk.coeffs();
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (static_cast<int>(i) <= d)
                om.entries(static_cast<int>(i), k) = c[i];
            else if (c[i] != 0.0)
                trunc = true;
        }
        if (trunc) om.truncated_columns.push_back(k);
        if (k < d) pk = pk * psi;
    }
    return om;
}

/// Matrix of L f = f(x0) 1 in the same centered basis: e0 e0^T.
inline OperatorMatrix rank_one_L(double x0, int d, Interval domain = {0.0, 1.0}) {
    if (d < 0) throw std::invalid_argument("rank_one_L: d must be >= 0");
    OperatorMatrix om{CMat(d + 1), x0, d, PolyMap::constant(x0, domain), {}};
    om.entries(0, 0) = 1.0;
    return om;
}

struct IterateBoundsOptions {
    int grid_size = 1024;     // orbit grid for the lower estimates
    int interval_grid = 128;  // per-step grid for the sound enclosures
};

/// Per-n log-space brackets for sup|phi_n - x0| and sup|phi_n'|, n = 1..n_max
/// (entry n-1). Lower estimates come from orbit walks over a Chebyshev grid;
/// upper bounds from a sound interval propagation I_{n+1} = hull(phi(I_n))
/// intersected with the domain, with chain factors sup_{I_n}|phi'|.
/// Upper bounds are sound until the propagated quantities underflow doubles;
/// past that point an enclosure can clamp to a single point and the logs
/// report -inf, which the canonical examples reach only after the true
/// values drop below 1e-308.
struct IterateBounds {
    std::vector<double> log_range_lower;
    std::vector<double> log_range_upper;
    std::vector<double> log_chain_lower;
    std::vector<double> log_chain_upper;
    /// Sound enclosure of phi_n(X) per level (entry n-1).
    std::vector<Interval> enclosures;
};

inline IterateBounds compute_iterate_bounds(const PolyMap& map, double x0, int n_max,
                                            IterateBoundsOptions opts = {}) {
    if (n_max < 1) throw std::invalid_argument("compute_iterate_bounds: n_max must be >= 1");
    if (opts.grid_size < 64 || opts.interval_grid < 8)
        throw std::invalid_argument("compute_iterate_bounds: grid too coarse");
    const double neg_inf = -std::numeric_limits<double>::infinity();
    const Interval dom = map.domain();
    const Poly& p = map.poly();
    const Poly dp = p.derivative();

    std::vector<double> t = chebyshev_grid(dom, opts.grid_size);
    std::vector<double> s(t.size(), 0.0);

    // unit Chebyshev pattern reused for every propagated interval
    std::vector<double> unit = chebyshev_grid({0.0, 1.0}, opts.interval_grid);
    const double unit_gap = max_adjacent_gap(unit);

    Interval I = dom;
    double log_chain_up = 0.0;

    IterateBounds out;
    out.log_range_lower.reserve(static_cast<std::size_t>(n_max));
    out.log_range_upper.reserve(static_cast<std::size_t>(n_max));
    out.log_chain_lower.reserve(static_cast<std::size_t>(n_max));
    out.log_chain_upper.reserve(static_cast<std::size_t>(n_max));

    for (int n = 1; n <= n_max; ++n) {
        // sound step: chain factor over I, then the enclosure of phi(I)
        const double w = I.hi - I.lo;
        double f_up = 0.0, mn = std::numeric_limits<double>::infinity(), mx = -mn;
        for (double u : unit) {
            double x = I.lo + w * u;
            f_up = std::max(f_up, std::abs(dp(x)));
            double v = p(x);
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        const double half_gap = 0.5 * w * unit_gap;
        f_up += derivative_coeff_bound(dp, I) * half_gap;
        // f_up bounds the Lipschitz constant of phi on I; near an interior
        // critical point it vanishes with the interval width, which a raw
        // coefficient bound would not, and the enclosure keeps contracting
        // at the map's own rate
        double slack = f_up * half_gap;
        I = {std::max(mn - slack, dom.lo), std::min(mx + slack, dom.hi)};
        log_chain_up += f_up > 0.0 ? std::log(f_up) : neg_inf;

        // orbit step for the grid lower estimates
        double range_lo = neg_inf, chain_lo = neg_inf;
        for (std::size_t i = 0; i < t.size(); ++i) {
            double f = std::abs(dp(t[i]));
            s[i] += f > 0.0 ? std::log(f) : neg_inf;
            t[i] = dom.clamp(p(t[i]));
            double r = std::abs(t[i] - x0);
            if (r > 0.0) range_lo = std::max(range_lo, std::log(r));
            chain_lo = std::max(chain_lo, s[i]);
        }

        double range_up = std::max(std::abs(I.lo - x0), std::abs(I.hi - x0));
        out.log_range_lower.push_back(range_lo);
        out.log_range_upper.push_back(range_up > 0.0 ? std::log(range_up) : neg_inf);
        out.log_chain_lower.push_back(std::min(chain_lo, log_chain_up));
        out.log_chain_upper.push_back(log_chain_up);
        out.enclosures.push_back(I);
    }
    return out;
}

inline double log_sum_exp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

/// Bracket of ||T^n - L|| in the requested norm.
///
/// Upper bounds use the rank-one witness: sup norm via sup|phi_n - x0|, C1 via
/// sup|phi_n - x0| + sup|phi_n'|. Lower bounds come from explicit test
/// functions: the C1 witness family gives |phi'(x0)|^n / 2 (valid against
/// every compact), and (x - x0) scaled into the unit ball gives the rest.
inline NormBracket distance_Tn_to_L(const PolyMap& map, double x0, int n, NormKind kind,
                                    int grid_size = 1024) {
    if (n < 1) throw std::invalid_argument("distance_Tn_to_L: n must be >= 1");
    if (kind == NormKind::ddm)
        throw std::invalid_argument("distance_Tn_to_L: norm_kind must be sup or c1");
    if (std::abs(map.raw(x0) - x0) > 1e-8)
        throw std::domain_error("distance_Tn_to_L: x0 is not a fixed point of phi");

    IterateBoundsOptions opts;
    opts.grid_size = grid_size;
    auto b = compute_iterate_bounds(map, x0, n, opts);
    const std::size_t i = static_cast<std::size_t>(n - 1);
    const double range_lo = std::exp(b.log_range_lower[i]);
    const double range_up = std::exp(b.log_range_upper[i]);
    const double chain_lo = std::exp(b.log_chain_lower[i]);
    const double chain_up = std::exp(b.log_chain_upper[i]);
    const double diam = map.domain().width();

    if (kind == NormKind::sup) {
        double lower = range_lo / std::max(1.0, diam);
        return {std::min(lower, range_up), range_up, kind};
    }
    const double dphi = std::abs(map.poly().derivative()(x0));
    double universal = dphi > 0.0 ? 0.5 * std::exp(n * std::log(dphi)) : 0.0;
    double witness = (range_lo + chain_lo) / (diam + 1.0);
    double upper = range_up + chain_up;
    return {std::min(std::max(universal, witness), upper), upper, kind};
}

struct EssRadPoint {
    int n = 0;
    double log_lower = 0.0;
    double log_upper = 0.0;
};

/// Per-n brackets of (distance of T^n to the compacts)^{1/n}, in log space.
/// The upper side witnesses the infimum by L only. The lower side uses the
/// test-function bound |phi'(x0)|^n / 2, valid against every compact operator
/// in the C1 norm; no such witness exists in the sup norm, so those lower
/// entries are -inf.
inline std::vector<EssRadPoint> essential_radius_sequence(const PolyMap& map, double x0,
                                                          NormKind kind, int n_max,
                                                          int grid_size = 1024) {
    if (n_max < 2) throw std::invalid_argument("essential_radius_sequence: n_max must be >= 2");
    if (kind == NormKind::ddm)
        throw std::invalid_argument("essential_radius_sequence: norm_kind must be sup or c1");
    if (std::abs(map.raw(x0) - x0) > 1e-8)
        throw std::domain_error("essential_radius_sequence: x0 is not a fixed point of phi");

    IterateBoundsOptions opts;
    opts.grid_size = grid_size;
    auto b = compute_iterate_bounds(map, x0, n_max, opts);
    const double neg_inf = -std::numeric_limits<double>::infinity();
    const double dphi = std::abs(map.poly().derivative()(x0));
    const double log_dphi = dphi > 0.0 ? std::log(dphi) : neg_inf;

    std::vector<EssRadPoint> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const std::size_t i = static_cast<std::size_t>(n - 1);
        double log_dist_up = kind == NormKind::sup
                                 ? b.log_range_upper[i]
                                 : log_sum_exp(b.log_range_upper[i], b.log_chain_upper[i]);
        double log_lower = neg_inf;
        if (kind == NormKind::c1 && dphi > 0.0)
            log_lower = (n * log_dphi - std::log(2.0)) / n;
        out.push_back({n, log_lower, log_dist_up / n});
    }
    return out;
}

}  // namespace rieszlab
