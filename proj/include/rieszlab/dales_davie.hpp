#pragma once

// Weight sequences (M_n), admissibility and nonanalyticity certificates, the
// D-norm sum(||f^(n)||_inf / M_n) on polynomials, and the analyticity index
// of a self-map. All factorial-scale arithmetic runs through log-gamma so a
// window of N = 200 works without overflow.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "poly.hpp"
#include "selfmap.hpp"

namespace rieszlab {

class invalid_weight_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

inline double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

inline double log_binomial(int n, int k) {
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// (M_0, ..., M_N) with M_0 = 1, stored in log space.
class WeightSequence {
  public:
    static WeightSequence from_values(const std::vector<double>& values) {
        if (values.empty()) throw invalid_weight_error("WeightSequence: empty value list");
        if (values.front() != 1.0)
            throw invalid_weight_error("WeightSequence: M_0 must equal 1");
        std::vector<double> logs(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(values[i] > 0.0) || !std::isfinite(values[i]))
                throw invalid_weight_error("WeightSequence: weights must be positive and finite");
            logs[i] = std::log(values[i]);
        }
        logs[0] = 0.0;
        return WeightSequence(std::move(logs));
    }

    /// M_n = (n!)^p.
    static WeightSequence factorial_pow(double p, int N) {
        if (N < 0) throw invalid_weight_error("WeightSequence: N must be nonnegative");
        std::vector<double> logs(static_cast<std::size_t>(N) + 1);
        for (int n = 0; n <= N; ++n) logs[static_cast<std::size_t>(n)] = p * log_factorial(n);
        return WeightSequence(std::move(logs));
    }

    static WeightSequence factorial_sq(int N) { return factorial_pow(2.0, N); }
    static WeightSequence factorial(int N) { return factorial_pow(1.0, N); }

    int max_index() const { return static_cast<int>(logs_.size()) - 1; }
    double log_value(int n) const { return logs_.at(static_cast<std::size_t>(n)); }
    /// May overflow to +inf for fast-growing families; log_value never does.
    double value(int n) const { return std::exp(log_value(n)); }

  private:
    explicit WeightSequence(std::vector<double> logs) : logs_(std::move(logs)) {}
    std::vector<double> logs_;
};

struct AdmissibilityReport {
    bool binomial_ok = true;
    std::optional<std::pair<int, int>> first_violation;  // smallest (n, m)
    /// (n!/M_n)^(1/n) for n = 1..N; index 0 holds n = 1.
    std::vector<double> nonanalytic_tail;
    bool nonanalytic_ok = false;
    int window = 0;  // the N this certificate was checked at
    double tail_threshold = 0.5;
};

/// Verifies M_{n+m} >= binom(n+m, m) * M_n * M_m for all n, m >= 1 with
/// n+m <= N (in log space, slack 1e-12) and certifies nonanalyticity
/// operationally: tail decreasing over the last half of the window and the
/// final value below the threshold. Finite windows certify, never prove.
inline AdmissibilityReport check_admissible(const WeightSequence& w, double tail_threshold = 0.5) {
    const int N = w.max_index();
    if (N < 2) throw std::invalid_argument("check_admissible: requires N >= 2");
    AdmissibilityReport rep;
    rep.window = N;
    rep.tail_threshold = tail_threshold;

    for (int n = 1; n <= N - 1 && rep.binomial_ok; ++n) {
        for (int m = 1; n + m <= N; ++m) {
            double lhs = w.log_value(n + m) - w.log_value(n) - w.log_value(m);
            if (lhs < log_binomial(n + m, m) - 1e-12) {
                rep.binomial_ok = false;
                rep.first_violation = {n, m};
                break;
            }
        }
    }

    rep.nonanalytic_tail.resize(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n)
        rep.nonanalytic_tail[static_cast<std::size_t>(n - 1)] =
            std::exp((log_factorial(n) - w.log_value(n)) / n);

    bool decreasing = true;
    for (int n = std::max(1, N / 2); n < N; ++n) {
        if (!(rep.nonanalytic_tail[static_cast<std::size_t>(n)] <
              rep.nonanalytic_tail[static_cast<std::size_t>(n - 1)])) {
            decreasing = false;
            break;
        }
    }
    rep.nonanalytic_ok = decreasing && rep.nonanalytic_tail.back() < tail_threshold;
    return rep;
}

/// Bracket of ||f||_D = sum ||f^(n)||_inf / M_n over the given interval.
inline Bracket dd_norm(const Poly& f, const WeightSequence& w, Interval domain = {0.0, 1.0},
                       int grid_size = 4096) {
    if (f.degree() > w.max_index())
        throw std::invalid_argument("dd_norm: deg(f) exceeds the weight window N");
    Bracket total;
    Poly g = f;
    for (int n = 0; n <= f.degree(); ++n) {
        Bracket sb = sup_norm_bracket(g, domain, grid_size);
        double lw = w.log_value(n);
        if (sb.lower > 0.0) total.lower += std::exp(std::log(sb.lower) - lw);
        if (sb.upper > 0.0) total.upper += std::exp(std::log(sb.upper) - lw);
        if (n < f.degree()) g = g.derivative();
    }
    return total;
}

/// max over 1 <= k <= deg(phi) of (||phi^(k)||_inf / k!)^(1/k); exact for
/// polynomials since higher derivatives vanish. Uses the sup upper brackets.
inline double analyticity_index(const PolyMap& map, int K, int grid_size = 4096) {
    if (K < map.degree())
        throw std::invalid_argument("analyticity_index: K must be >= deg(phi)");
    double best = 0.0;
    Poly g = map.poly().derivative();
    for (int k = 1; k <= map.degree(); ++k) {
        Bracket sb = sup_norm_bracket(g, map.domain(), grid_size);
        if (sb.upper > 0.0)
            best = std::max(best, std::exp((std::log(sb.upper) - log_factorial(k)) / k));
        g = g.derivative();
    }
    return best;
}

}  // namespace rieszlab
