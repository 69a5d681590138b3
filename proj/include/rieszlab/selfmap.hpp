#pragma once

// Polynomial self-maps of a compact interval and their iteration toolkit:
// evaluation, exact iterates, log-space orbit derivatives, Picard fixed-point
// search, and iterate-range diameters.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "poly.hpp"

namespace rieszlab {

inline constexpr double kDomainTol = 1e-12;
inline constexpr int kDomainCheckGrid = 10000;
inline constexpr int kMaxIterateDegree = 4096;

class degree_overflow_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A polynomial map of an interval into itself. Construction verifies the
/// self-map invariant on a dense Chebyshev grid with derivative-based
/// refinement; a certified escape point is an error.
class PolyMap {
  public:
    explicit PolyMap(Poly p, Interval domain = {0.0, 1.0}, int check_grid = kDomainCheckGrid)
        : p_(std::move(p)), dom_(domain) {
        if (!(dom_.lo < dom_.hi)) throw std::invalid_argument("PolyMap: domain requires lo < hi");
        if (!p_.all_coeffs_finite()) throw std::invalid_argument("PolyMap: non-finite coefficient");
        auto escape = find_escape_point(p_, dom_, dom_, kDomainTol, check_grid);
        if (escape) {
            throw std::domain_error("PolyMap: map leaves its domain at x = " +
                                    std::to_string(*escape) + " (phi(x) = " +
                                    std::to_string(p_(*escape)) + ")");
        }
    }

    static PolyMap identity(Interval domain = {0.0, 1.0}) {
        return PolyMap(Poly::identity(), domain);
    }
    static PolyMap constant(double c, Interval domain = {0.0, 1.0}) {
        return PolyMap(Poly::constant(c), domain);
    }

    const Poly& poly() const { return p_; }
    Interval domain() const { return dom_; }
    int degree() const { return p_.degree(); }
    bool is_constant() const { return p_.is_constant(); }

    /// Unchecked evaluation, for orbit walks that stay in the domain.
    double raw(double x) const { return p_(x); }

  private:
    Poly p_;
    Interval dom_;
};

inline double eval(const PolyMap& map, double x) {
    if (!map.domain().contains(x, kDomainTol))
        throw std::domain_error("eval: x outside the map domain");
    return map.raw(x);
}

inline Poly derivative(const PolyMap& map) { return map.poly().derivative(); }

/// Exact n-fold composition. The degree cap keeps symbolic iteration at desk
/// scale; orbit-based operations cover everything beyond it.
inline PolyMap iterate(const PolyMap& map, int n, int max_degree = kMaxIterateDegree) {
    if (n < 0) throw std::invalid_argument("iterate: n must be nonnegative");
    const int d = map.degree();
    if (d >= 2) {
        double logdeg = static_cast<double>(n) * std::log(static_cast<double>(d));
        if (logdeg > std::log(static_cast<double>(max_degree)) + 1e-12)
            throw degree_overflow_error("iterate: deg(phi)^n exceeds the configured cap");
    }
    Poly r = Poly::identity();
    for (int i = 0; i < n; ++i) r = map.poly().compose(r);
    if (!r.all_coeffs_finite())
        throw degree_overflow_error("iterate: coefficient overflow during composition");
    return PolyMap(std::move(r), map.domain());
}

/// log sup over a Chebyshev grid of |phi_n'|, accumulated along orbits as
/// sum log|phi'(phi_j(x))|. Avoids both degree blowup and underflow; -inf
/// signals derivative annihilation along every sampled orbit.
inline double iterate_deriv_log_sup(const PolyMap& map, int n, int grid_size) {
    if (n < 1) throw std::invalid_argument("iterate_deriv_log_sup: n must be positive");
    if (grid_size < 64) throw std::invalid_argument("iterate_deriv_log_sup: grid_size < 64");
    const Poly dp = map.poly().derivative();
    const auto grid = chebyshev_grid(map.domain(), grid_size);
    double best = -std::numeric_limits<double>::infinity();
    for (double x : grid) {
        double s = 0.0;
        double t = x;
        for (int j = 0; j < n; ++j) {
            double f = std::abs(dp(t));
            if (f == 0.0) {
                s = -std::numeric_limits<double>::infinity();
                break;
            }
            s += std::log(f);
            t = map.domain().clamp(map.raw(t));
        }
        best = std::max(best, s);
    }
    return best;
}

/// Euclidean diameter of {phi_n(x) : x in grid}, computed by orbit walks.
inline double iterate_range_diameter(const PolyMap& map, int n, int grid_size) {
    if (n < 1) throw std::invalid_argument("iterate_range_diameter: n must be positive");
    if (grid_size < 64) throw std::invalid_argument("iterate_range_diameter: grid_size < 64");
    const auto grid = chebyshev_grid(map.domain(), grid_size);
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (double x : grid) {
        double t = x;
        for (int j = 0; j < n; ++j) t = map.domain().clamp(map.raw(t));
        mn = std::min(mn, t);
        mx = std::max(mx, t);
    }
    return mx - mn;
}

/// Affine conjugation of the map onto [0,1]. Fixed points, derivatives at
/// them, and range diameters relative to the domain width are preserved.
inline PolyMap rescale_to_unit(const PolyMap& map) {
    const Interval dom = map.domain();
    if (dom.lo == 0.0 && dom.hi == 1.0) return map;
    const double w = dom.width();
    Poly affine({dom.lo, w});  // A(u) = lo + w u
    Poly psi = (map.poly().compose(affine) - Poly::constant(dom.lo)).scaled(1.0 / w);
    return PolyMap(std::move(psi), {0.0, 1.0});
}

struct FixedPointOptions {
    int max_steps = 10000;
    double step_tol = 1e-12;
    double agree_tol = 1e-8;
    int diameter_window = 24;    // length of basin_diameter_sequence
    int diameter_grid = 512;
};

struct FixedPointReport {
    bool found = false;
    double x0 = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    double derivative_at_x0 = std::numeric_limits<double>::quiet_NaN();
    int seeds_agreeing = 0;
    int seeds_converged = 0;
    int seeds_total = 0;
    /// Representatives of the distinct Picard limits (clusters at agree_tol).
    /// More than one entry certifies a non-singleton fixed-point set.
    std::vector<double> limits;
    std::vector<double> basin_diameter_sequence;
};

/// Picard iteration from equally spaced seeds. Non-convergence and
/// disagreement are report states, not errors; Picard failure is itself
/// diagnostic for the maps studied here.
inline FixedPointReport find_fixed_point(const PolyMap& map, int seeds,
                                         FixedPointOptions opts = {}) {
    if (seeds < 1) throw std::invalid_argument("find_fixed_point: seeds must be >= 1");
    FixedPointReport rep;
    rep.seeds_total = seeds;

    std::vector<double> converged;
    converged.reserve(static_cast<std::size_t>(seeds));
    const Interval dom = map.domain();
    for (int s = 0; s < seeds; ++s) {
        double x = seeds == 1 ? dom.midpoint()
                              : dom.lo + dom.width() * static_cast<double>(s) / (seeds - 1);
        bool ok = false;
        for (int k = 0; k < opts.max_steps; ++k) {
            double next = dom.clamp(map.raw(x));
            if (std::abs(next - x) <= opts.step_tol * std::max(1.0, std::abs(x))) {
                x = next;
                ok = true;
                break;
            }
            x = next;
        }
        if (ok) converged.push_back(x);
    }
    rep.seeds_converged = static_cast<int>(converged.size());

    for (double v : converged) {
        bool fresh = true;
        for (double rep_v : rep.limits) {
            if (std::abs(v - rep_v) <= opts.agree_tol) {
                fresh = false;
                break;
            }
        }
        if (fresh) rep.limits.push_back(v);
    }

    int w = std::max(1, opts.diameter_window);
    rep.basin_diameter_sequence.reserve(static_cast<std::size_t>(w));
    for (int n = 1; n <= w; ++n)
        rep.basin_diameter_sequence.push_back(iterate_range_diameter(map, n, opts.diameter_grid));

    if (rep.seeds_converged == seeds && rep.limits.size() == 1) {
        rep.found = true;
        rep.x0 = rep.limits.front();
        rep.seeds_agreeing = seeds;
    } else if (!rep.limits.empty()) {
        // diagnostics at the largest cluster even when the search failed
        std::vector<int> counts(rep.limits.size(), 0);
        for (double v : converged) {
            for (std::size_t i = 0; i < rep.limits.size(); ++i) {
                if (std::abs(v - rep.limits[i]) <= opts.agree_tol) {
                    ++counts[i];
                    break;
                }
            }
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < counts.size(); ++i)
            if (counts[i] > counts[best]) best = i;
        rep.x0 = rep.limits[best];
        rep.seeds_agreeing = counts[best];
    }
    if (!rep.limits.empty() || rep.found) {
        rep.residual = std::abs(map.raw(rep.x0) - rep.x0);
        rep.derivative_at_x0 = map.poly().derivative()(rep.x0);
    }
    return rep;
}

}  // namespace rieszlab
