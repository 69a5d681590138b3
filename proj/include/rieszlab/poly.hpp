#pragma once

// Dense univariate polynomials over double coefficients (ascending degree)
// plus the grid-based sup-norm estimation policy shared by the whole library:
// every sup-norm is reported as a bracket [grid max, grid max + Lipschitz slack]
// so downstream decisions never silently depend on grid resolution.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rieszlab {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double x, double tol = 0.0) const {
        return x >= lo - tol && x <= hi + tol;
    }
    double clamp(double x) const { return std::min(hi, std::max(lo, x)); }
};

/// Two-sided estimate of a nonnegative quantity; lower comes from sampled
/// values, upper adds a sound slack term.
struct Bracket {
    double lower = 0.0;
    double upper = 0.0;

    double midpoint() const { return 0.5 * (lower + upper); }
    double width() const { return upper - lower; }
};

class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly zero() { return Poly(); }
    static Poly constant(double v) { return Poly({v}); }
    static Poly identity() { return Poly({0.0, 1.0}); }

    /// Degree of the trimmed polynomial; the zero polynomial has degree 0.
    int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }

    const std::vector<double>& coeffs() const { return c_; }
    double coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }

    double operator()(double x) const {
        double r = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<double> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
        return Poly(std::move(d));
    }

    Poly operator+(const Poly& o) const {
        std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
        return Poly(std::move(r));
    }

    Poly operator-(const Poly& o) const {
        std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
        for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
        return Poly(std::move(r));
    }

    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
        return Poly(std::move(r));
    }

    Poly scaled(double s) const {
        std::vector<double> r(c_);
        for (double& v : r) v *= s;
        return Poly(std::move(r));
    }

    /// this ∘ inner, by Horner composition. Exact up to rounding; the result
    /// degree is degree()*inner.degree() unless leading terms underflow.
    Poly compose(const Poly& inner) const {
        if (c_.empty()) return Poly();
        Poly r = Poly::constant(c_.back());
        for (std::size_t i = c_.size() - 1; i-- > 0;) {
            r = r * inner;
            if (c_[i] != 0.0) r = r + Poly::constant(c_[i]);
        }
        return r;
    }

    /// p(x + a).
    Poly taylor_shift(double a) const { return compose(Poly({a, 1.0})); }

    double max_abs_coeff() const {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    bool all_coeffs_finite() const {
        for (double v : c_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
    }

    std::vector<double> c_;
};

/// Chebyshev-spaced grid on I (second-kind points, endpoints included).
inline std::vector<double> chebyshev_grid(Interval I, int m) {
    if (m < 2) throw std::invalid_argument("chebyshev_grid: need at least 2 points");
    std::vector<double> g(static_cast<std::size_t>(m));
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < m; ++i) {
        double t = 0.5 * (1.0 - std::cos(pi * static_cast<double>(i) / (m - 1)));
        g[static_cast<std::size_t>(i)] = I.lo + I.width() * t;
    }
    g.front() = I.lo;
    g.back() = I.hi;
    return g;
}

inline double max_adjacent_gap(const std::vector<double>& grid) {
    double g = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) g = std::max(g, grid[i] - grid[i - 1]);
    return g;
}

/// Sound bound on sup_I |p'| from coefficients: sum i*|c_i|*M^(i-1) with
/// M = max(|lo|,|hi|). Loose but cheap; only used for slack terms.
inline double derivative_coeff_bound(const Poly& p, Interval I) {
    const double M = std::max(std::abs(I.lo), std::abs(I.hi));
    double bound = 0.0;
    double Mpow = 1.0;  // M^(i-1)
    const auto& c = p.coeffs();
    for (std::size_t i = 1; i < c.size(); ++i) {
        bound += static_cast<double>(i) * std::abs(c[i]) * Mpow;
        Mpow *= M;
    }
    return bound;
}

/// Bracket of sup_I |p|: lower from a Chebyshev grid, upper adds L*gap/2
/// with L a coefficient bound on |p'|.
inline Bracket sup_norm_bracket(const Poly& p, Interval I, int grid_size = 4096) {
    if (p.is_constant()) {
        double v = std::abs(p.coeff(0));
        return {v, v};
    }
    auto grid = chebyshev_grid(I, grid_size);
    double lo = 0.0;
    for (double x : grid) lo = std::max(lo, std::abs(p(x)));
    double slack = derivative_coeff_bound(p, I) * max_adjacent_gap(grid) * 0.5;
    return {lo, lo + slack};
}

/// Sound enclosure of p(I) (single-level grid hull plus Lipschitz slack).
inline Interval range_enclosure(const Poly& p, Interval I, int grid_size = 64) {
    if (p.is_constant()) return {p.coeff(0), p.coeff(0)};
    auto grid = chebyshev_grid(I, grid_size);
    double mn = std::numeric_limits<double>::infinity();
    double mx = -mn;
    for (double x : grid) {
        double v = p(x);
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    double slack = derivative_coeff_bound(p, I) * max_adjacent_gap(grid) * 0.5;
    return {mn - slack, mx + slack};
}

/// Searches for a point of I where p leaves [target.lo - tol, target.hi + tol].
/// Dense grid scan first, then bisection of the intervals whose Lipschitz
/// bound cannot certify containment. Returns the escape point, if any.
inline std::optional<double> find_escape_point(const Poly& p, Interval I, Interval target,
                                               double tol, int grid_size = 10000,
                                               int max_depth = 48) {
    const double lo_ok = target.lo - tol;
    const double hi_ok = target.hi + tol;
    auto grid = chebyshev_grid(I, grid_size);
    std::vector<double> vals(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        vals[i] = p(grid[i]);
        if (!(vals[i] >= lo_ok && vals[i] <= hi_ok)) return grid[i];
    }

    struct Seg {
        double a, b, va, vb;
        int depth;
    };
    std::vector<Seg> stack;
    // local Lipschitz bound per subinterval; the global one over-refines
    // wherever the map touches the boundary with a tiny local derivative
    auto suspect = [&](double a, double b, double va, double vb) {
        double L = derivative_coeff_bound(p, {a, b});
        if (!std::isfinite(L)) return false;  // cannot refine; the grid scan stands
        double half = L * (b - a) * 0.5;
        return std::max(va, vb) + half > hi_ok || std::min(va, vb) - half < lo_ok;
    };
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (suspect(grid[i - 1], grid[i], vals[i - 1], vals[i]))
            stack.push_back({grid[i - 1], grid[i], vals[i - 1], vals[i], 0});
    }
    long budget = 2000000;
    while (!stack.empty() && budget-- > 0) {
        Seg s = stack.back();
        stack.pop_back();
        double m = 0.5 * (s.a + s.b);
        if (m <= s.a || m >= s.b) continue;  // interval exhausted at fp resolution
        double vm = p(m);
        if (!(vm >= lo_ok && vm <= hi_ok)) return m;
        if (s.depth >= max_depth) continue;
        if (suspect(s.a, m, s.va, vm)) stack.push_back({s.a, m, s.va, vm, s.depth + 1});
        if (suspect(m, s.b, vm, s.vb)) stack.push_back({m, s.b, vm, s.vb, s.depth + 1});
    }
    return std::nullopt;
}

}  // namespace rieszlab
