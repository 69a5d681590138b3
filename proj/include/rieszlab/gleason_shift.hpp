#pragma once

// The weighted shift (phi(x))_{j,k} = x_{j,k+1}/(k+1) on the truncated unit
// ball of l_inf(N^2): factorial decay of iterates, the Schwarz-lemma Gleason
// bound, the Riesz certificate C_n^{1/n}, and the equicontinuity-failure
// witness showing no power of the induced endomorphism is compact.
//
// Truncation zeroes boundary entries, which only shrinks distances and can
// never fabricate a violation of the upper bounds.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "dales_davie.hpp"
#include "matrix.hpp"

namespace rieszlab {

class truncation_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A point of the unit ball, truncated to indices 1 <= j <= J, 1 <= k <= K.
struct ShiftPoint {
    int J = 0, K = 0;
    std::vector<cd> values;  // (j-1)*K + (k-1)
    bool boundary_zeroed = false;

    static ShiftPoint zeros(int J, int K) {
        if (J < 1 || K < 1) throw std::invalid_argument("ShiftPoint: truncation must be >= 1");
        ShiftPoint p;
        p.J = J;
        p.K = K;
        p.values.assign(static_cast<std::size_t>(J) * K, cd(0.0, 0.0));
        return p;
    }

    cd at(int j, int k) const {
        check_index(j, k);
        return values[static_cast<std::size_t>(j - 1) * K + (k - 1)];
    }

    void set(int j, int k, cd v) {
        check_index(j, k);
        if (std::abs(v) > 1.0 + 1e-12)
            throw std::invalid_argument("ShiftPoint: entry outside the unit ball");
        values[static_cast<std::size_t>(j - 1) * K + (k - 1)] = v;
    }

    /// d_inf(x, x0), the sup-norm distance to the zero point.
    double sup_norm() const {
        double m = 0.0;
        for (const cd& v : values) m = std::max(m, std::abs(v));
        return m;
    }

  private:
    void check_index(int j, int k) const {
        if (j < 1 || j > J || k < 1 || k > K)
            throw std::out_of_range("ShiftPoint: index outside truncation");
    }
};

/// One application of the shift; entries at k = K are zeroed and flagged.
inline ShiftPoint shift_apply(const ShiftPoint& x) {
    ShiftPoint y = ShiftPoint::zeros(x.J, x.K);
    for (int j = 1; j <= x.J; ++j)
        for (int k = 1; k < x.K; ++k)
            y.set(j, k, x.at(j, k + 1) / static_cast<double>(k + 1));
    y.boundary_zeroed = true;
    return y;
}

inline ShiftPoint random_ball_point(std::mt19937_64& rng, int J, int K) {
    ShiftPoint p = ShiftPoint::zeros(J, K);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double two_pi = 6.28318530717958647692;
    for (int j = 1; j <= J; ++j)
        for (int k = 1; k <= K; ++k) {
            double r = std::sqrt(unit(rng));
            double a = two_pi * unit(rng);
            p.set(j, k, cd(r * std::cos(a), r * std::sin(a)));
        }
    return p;
}

struct ShiftSupremum {
    int n = 0;
    double value = 0.0;          // exact sup over the truncated ball: 1/(n+1)!
    double empirical_max = 0.0;  // sampled, never exceeds value
    int samples = 0;
    std::uint64_t seed = 0;
};

/// sup over the ball of d_inf(phi_n(x), x0) under truncation. The exact value
/// max_k k!/(k+n)! is attained at k = 1 with a unimodular entry; sampling
/// (plus the all-ones extreme point) confirms it empirically.
inline ShiftSupremum shift_iterate_sup(int n, int J = 64, int K = 64, int samples = 32,
                                       std::uint64_t seed = 1) {
    if (n < 0) throw std::invalid_argument("shift_iterate_sup: n must be nonnegative");
    if (n > K - 1) throw truncation_error("shift_iterate_sup: n exceeds the truncation K-1");
    ShiftSupremum out;
    out.n = n;
    out.samples = samples;
    out.seed = seed;
    double fact = 1.0;
    for (int i = 2; i <= n + 1; ++i) fact *= static_cast<double>(i);
    out.value = 1.0 / fact;

    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        ShiftPoint p = ShiftPoint::zeros(J, K);
        if (s == 0) {
            for (int j = 1; j <= J; ++j)
                for (int k = 1; k <= K; ++k) p.set(j, k, cd(1.0, 0.0));
        } else {
            p = random_ball_point(rng, J, K);
        }
        for (int i = 0; i < n; ++i) p = shift_apply(p);
        out.empirical_max = std::max(out.empirical_max, p.sup_norm());
    }
    return out;
}

/// A polynomial in finitely many coordinate projections p_{j,k}. Unit-ball
/// membership is certified by the conservative rule sum|coeff| <= 1 over the
/// (non-constant) monomials; the exact sup over the infinite-dimensional ball
/// is not computable.
struct TestFunction {
    struct Factor {
        int j = 1, k = 1, exp = 1;
    };
    struct Term {
        std::vector<Factor> factors;
        cd coeff{0.0, 0.0};
    };
    std::vector<Term> terms;

    static TestFunction projection(int j, int k) {
        TestFunction f;
        f.terms.push_back({{{j, k, 1}}, cd(1.0, 0.0)});
        return f;
    }

    double coeff_abs_sum() const {
        double s = 0.0;
        for (const Term& t : terms)
            if (!t.factors.empty()) s += std::abs(t.coeff);
        return s;
    }

    bool unit_ball_certified() const {
        for (const Term& t : terms)
            if (t.factors.empty() && std::abs(t.coeff) > 0.0) return false;
        return coeff_abs_sum() <= 1.0 + 1e-9;
    }

    cd eval(const ShiftPoint& x) const {
        cd s(0.0, 0.0);
        for (const Term& t : terms) {
            cd m = t.coeff;
            for (const Factor& f : t.factors)
                for (int e = 0; e < f.exp; ++e) m *= x.at(f.j, f.k);
            s += m;
        }
        return s;
    }

    /// f . phi, via p_{j,k} . phi = p_{j,k+1}/(k+1). Requires the shifted
    /// indices to stay inside the truncation.
    TestFunction composed_with_shift(int K) const {
        TestFunction g;
        for (const Term& t : terms) {
            Term nt;
            nt.coeff = t.coeff;
            for (const Factor& f : t.factors) {
                if (f.k + 1 > K)
                    throw truncation_error("composed_with_shift: projection index leaves K");
                nt.factors.push_back({f.j, f.k + 1, f.exp});
                for (int e = 0; e < f.exp; ++e) nt.coeff /= static_cast<double>(f.k + 1);
            }
            g.terms.push_back(std::move(nt));
        }
        return g;
    }
};

inline TestFunction random_unit_ball_function(std::mt19937_64& rng, int J, int K) {
    std::uniform_int_distribution<int> nterms(1, 4), nfac(1, 2), expd(1, 2);
    std::uniform_int_distribution<int> jd(1, J), kd(1, K);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double two_pi = 6.28318530717958647692;
    TestFunction f;
    int m = nterms(rng);
    for (int t = 0; t < m; ++t) {
        TestFunction::Term term;
        int nf = nfac(rng);
        for (int i = 0; i < nf; ++i) term.factors.push_back({jd(rng), kd(rng), expd(rng)});
        double r = 0.1 + 0.9 * unit(rng);
        double a = two_pi * unit(rng);
        term.coeff = cd(r * std::cos(a), r * std::sin(a));
        f.terms.push_back(std::move(term));
    }
    double s = f.coeff_abs_sum();
    for (auto& term : f.terms) term.coeff /= s * (1.0 + 1e-12);
    return f;
}

struct GleasonBound {
    double upper = 0.0;            // 2 d_inf(x, x0), from the Schwarz lemma
    double empirical_lower = 0.0;  // best certified test function sampled
    int samples = 0;
    std::uint64_t seed = 0;
};

/// Gleason-distance bracket for a ball point against x0. The upper bound is
/// the lemma's 2 d_inf; the lower is an empirical max of |f(x) - f(x0)| over
/// certified unit-ball test functions (the argmax coordinate projection is
/// always included, so the lower bound is at least d_inf itself).
inline GleasonBound gleason_distance_bound(const ShiftPoint& x, int samples,
                                           std::uint64_t seed = 1) {
    if (samples < 1) throw std::invalid_argument("gleason_distance_bound: samples must be >= 1");
    GleasonBound out;
    out.samples = samples;
    out.seed = seed;
    out.upper = 2.0 * x.sup_norm();

    int bj = 1, bk = 1;
    double best = -1.0;
    for (int j = 1; j <= x.J; ++j)
        for (int k = 1; k <= x.K; ++k)
            if (std::abs(x.at(j, k)) > best) {
                best = std::abs(x.at(j, k));
                bj = j;
                bk = k;
            }
    const ShiftPoint origin = ShiftPoint::zeros(x.J, x.K);
    auto probe = [&](const TestFunction& f) {
        out.empirical_lower = std::max(out.empirical_lower, std::abs(f.eval(x) - f.eval(origin)));
    };
    probe(TestFunction::projection(bj, bk));
    std::mt19937_64 rng(seed);
    for (int s = 1; s < samples; ++s) probe(random_unit_ball_function(rng, x.J, x.K));
    return out;
}

struct RieszCertRow {
    int n = 0;
    double c_upper = 0.0;  // 2/(n+1)!
    double c_root = 0.0;   // c_upper^{1/n}
};

/// C_n upper bounds from the Schwarz factor applied to the factorial decay,
/// with the roots C_n^{1/n} evaluated in log space. Roots tending to zero
/// certify the Riesz property.
inline std::vector<RieszCertRow> riesz_certificate(int n_max, int K = 64) {
    if (n_max < 1) throw std::invalid_argument("riesz_certificate: n_max must be >= 1");
    if (n_max > K - 1) throw truncation_error("riesz_certificate: n_max exceeds K-1");
    std::vector<RieszCertRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        double log_c = std::log(2.0) - log_factorial(n + 1);
        rows.push_back({n, std::exp(log_c), std::exp(log_c / n)});
    }
    return rows;
}

struct WitnessPair {
    int j = 0, jp = 0;
    double distance = 0.0;
};

/// Pairwise sup-norm distances ||T^n p_{j,1} - T^n p_{j',1}|| over the
/// truncated ball. T^n p_{j,1} = p_{j,n+1}/(n+1)!, so every pair is at
/// distance 2/(n+1)! > 0: the image of the projection family stays uniformly
/// separated and no subsequence can converge.
inline std::vector<WitnessPair> noncompact_witness(int n, int J_test, int J = 64, int K = 64) {
    if (n < 1) throw std::invalid_argument("noncompact_witness: n must be positive");
    if (n > K - 1) throw truncation_error("noncompact_witness: n exceeds K-1");
    if (J_test > J) throw truncation_error("noncompact_witness: J_test exceeds J");
    std::vector<WitnessPair> out;
    if (J_test < 2) return out;

    std::vector<TestFunction> images;
    images.reserve(static_cast<std::size_t>(J_test));
    for (int j = 1; j <= J_test; ++j) {
        TestFunction f = TestFunction::projection(j, 1);
        for (int i = 0; i < n; ++i) f = f.composed_with_shift(K);
        images.push_back(std::move(f));
    }
    // distinct single coordinates: the sup of |c1 p_a - c2 p_b| is |c1| + |c2|
    for (int a = 0; a < J_test; ++a)
        for (int b = a + 1; b < J_test; ++b) {
            double d = std::abs(images[static_cast<std::size_t>(a)].terms[0].coeff) +
                       std::abs(images[static_cast<std::size_t>(b)].terms[0].coeff);
            out.push_back({a + 1, b + 1, d});
        }
    return out;
}

}  // namespace rieszlab
