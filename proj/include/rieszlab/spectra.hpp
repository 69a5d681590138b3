#pragma once

// Dense complex eigensolver (Householder Hessenberg reduction + shifted QR
// with Wilkinson shifts and deflation) and comparison of computed spectra
// against the closed-form geometric prediction {phi'(x0)^n} u {0, 1}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "matrix.hpp"
#include "operator.hpp"
#include "selfmap.hpp"

namespace rieszlab {

class qr_convergence_error : public std::runtime_error {
  public:
    qr_convergence_error(const std::string& msg, std::vector<cd> partial_eigs)
        : std::runtime_error(msg), partial(std::move(partial_eigs)) {}
    std::vector<cd> partial;
};

namespace detail {

inline void hessenberg_reduce(CMat& a) {
    const int n = a.dim();
    std::vector<cd> v(static_cast<std::size_t>(n));
    for (int k = 0; k + 2 < n; ++k) {
        double norm2 = 0.0;
        for (int i = k + 1; i < n; ++i) norm2 += std::norm(a(i, k));
        double xnorm = std::sqrt(norm2);
        if (xnorm == 0.0) continue;
        cd x0 = a(k + 1, k);
        cd phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cd(1.0, 0.0);
        cd alpha = -phase * xnorm;
        // v = x - alpha e1, normalized
        double vnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[static_cast<std::size_t>(i)] = a(i, k) - (i == k + 1 ? alpha : cd(0.0, 0.0));
            vnorm2 += std::norm(v[static_cast<std::size_t>(i)]);
        }
        if (vnorm2 == 0.0) continue;
        double vnorm = std::sqrt(vnorm2);
        for (int i = k + 1; i < n; ++i) v[static_cast<std::size_t>(i)] /= vnorm;
        // A <- (I - 2vv*) A
        for (int j = k; j < n; ++j) {
            cd w(0.0, 0.0);
            for (int i = k + 1; i < n; ++i) w += std::conj(v[static_cast<std::size_t>(i)]) * a(i, j);
            w *= 2.0;
            for (int i = k + 1; i < n; ++i) a(i, j) -= w * v[static_cast<std::size_t>(i)];
        }
        // A <- A (I - 2vv*)
        for (int i = 0; i < n; ++i) {
            cd w(0.0, 0.0);
            for (int j = k + 1; j < n; ++j) w += a(i, j) * v[static_cast<std::size_t>(j)];
            w *= 2.0;
            for (int j = k + 1; j < n; ++j) a(i, j) -= w * std::conj(v[static_cast<std::size_t>(j)]);
        }
    }
}

struct Givens {
    double c = 1.0;
    cd s = cd(0.0, 0.0);
};

/// Rotation [c s; -conj(s) c] sending (f, g) to (r, 0).
inline Givens make_givens(cd f, cd g) {
    Givens giv;
    double af = std::abs(f), ag = std::abs(g);
    if (ag == 0.0) return giv;
    if (af == 0.0) {
        giv.c = 0.0;
        giv.s = std::conj(g) / ag;
        return giv;
    }
    double d = std::hypot(af, ag);
    giv.c = af / d;
    giv.s = (f / af) * std::conj(g) / d;
    return giv;
}

inline std::array<cd, 2> eig2x2(cd a, cd b, cd c, cd d) {
    cd half_tr = 0.5 * (a + d);
    cd disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
    return {half_tr + disc, half_tr - disc};
}

}  // namespace detail

struct EigenOptions {
    int max_sweeps_factor = 30;     // total QR sweeps allowed: factor * dim
    double deflation_rel = 1e-14;   // threshold 1e-14 * ||A||_F
};

/// All eigenvalues of a dense complex matrix. Robust for the
/// triangular-dominant matrices produced here, including clustered
/// near-zero eigenvalues from truncation-nilpotent blocks.
inline std::vector<cd> eigenvalues(const CMat& a_in, EigenOptions opts = {}) {
    CMat h = a_in;
    const int n = h.dim();
    if (n == 1) return {h(0, 0)};
    detail::hessenberg_reduce(h);

    const double thresh = std::max(opts.deflation_rel * a_in.frobenius_norm(),
                                   std::numeric_limits<double>::min());
    std::vector<cd> eigs;
    eigs.reserve(static_cast<std::size_t>(n));

    int hi = n - 1;
    int sweeps = 0, stall = 0;
    const int max_sweeps = opts.max_sweeps_factor * n;
    while (hi >= 0) {
        // deflate converged subdiagonals
        for (int i = 1; i <= hi; ++i)
            if (std::abs(h(i, i - 1)) <= thresh) h(i, i - 1) = 0.0;
        if (hi == 0 || h(hi, hi - 1) == cd(0.0, 0.0)) {
            eigs.push_back(h(hi, hi));
            --hi;
            stall = 0;
            continue;
        }
        int lo = hi;
        while (lo > 0 && h(lo, lo - 1) != cd(0.0, 0.0)) --lo;
        if (hi - lo == 1) {
            auto [l1, l2] = detail::eig2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi));
            eigs.push_back(l1);
            eigs.push_back(l2);
            hi = lo - 1;
            stall = 0;
            continue;
        }
        if (++sweeps > max_sweeps) {
            throw qr_convergence_error("eigenvalues: QR failed to converge", eigs);
        }
        // Wilkinson shift from the trailing 2x2, closer root to h(hi,hi)
        cd mu;
        if (++stall % 10 == 0) {
            mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));  // exceptional shift
        } else {
            auto [l1, l2] =
                detail::eig2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
            mu = std::abs(l1 - h(hi, hi)) <= std::abs(l2 - h(hi, hi)) ? l1 : l2;
        }
        for (int i = lo; i <= hi; ++i) h(i, i) -= mu;
        // QR by Givens within the active window, then RQ
        std::vector<detail::Givens> rots(static_cast<std::size_t>(hi - lo));
        for (int i = lo; i < hi; ++i) {
            auto g = detail::make_givens(h(i, i), h(i + 1, i));
            rots[static_cast<std::size_t>(i - lo)] = g;
            for (int j = i; j <= hi; ++j) {
                cd x = h(i, j), y = h(i + 1, j);
                h(i, j) = g.c * x + g.s * y;
                h(i + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
        }
        for (int i = lo; i < hi; ++i) {
            auto g = rots[static_cast<std::size_t>(i - lo)];
            int top = std::min(i + 1, hi);
            for (int r = lo; r <= top; ++r) {
                cd x = h(r, i), y = h(r, i + 1);
                h(r, i) = g.c * x + std::conj(g.s) * y;
                h(r, i + 1) = -g.s * x + g.c * y;
            }
        }
        for (int i = lo; i <= hi; ++i) h(i, i) += mu;
    }
    return eigs;
}

inline std::vector<cd> eigenvalues(const OperatorMatrix& m, EigenOptions opts = {}) {
    if (m.entries.dim() > 512)
        throw std::invalid_argument("eigenvalues: dimension capped at 512");
    return eigenvalues(m.entries, opts);
}

/// Spectral-radius estimate by power iteration; the independent cross-check
/// for the QR path.
inline double power_iteration_radius(const CMat& a, int max_iters = 100000, double tol = 1e-12) {
    const int n = a.dim();
    std::vector<cd> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = cd(1.0 + 0.01 * i, 0.125 + 0.001 * i);
    auto norm2 = [](const std::vector<cd>& x) {
        double s = 0.0;
        for (const cd& e : x) s += std::norm(e);
        return std::sqrt(s);
    };
    double nv = norm2(v);
    for (cd& e : v) e /= nv;
    double rho = 0.0;
    int settled = 0;
    for (int it = 0; it < max_iters; ++it) {
        std::vector<cd> w = a.apply(v);
        double nw = norm2(w);
        if (nw < 1e-300) return 0.0;
        double next = nw;
        if (std::abs(next - rho) <= tol * std::max(next, 1e-300)) {
            if (++settled >= 3) return next;
        } else {
            settled = 0;
        }
        rho = next;
        for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / nw;
    }
    return rho;
}

/// {phi'(x0)^n : 1 <= n <= n_cut} u {0, 1}, deduplicated. Requires
/// |phi'(x0)| < 1, the derivative condition for a Riesz fixed point.
inline std::vector<cd> predicted_spectrum(const PolyMap& map, double x0, int n_cut) {
    if (n_cut < 1) throw std::invalid_argument("predicted_spectrum: n_cut must be >= 1");
    const double dphi = map.poly().derivative()(x0);
    if (!(std::abs(dphi) < 1.0))
        throw std::domain_error(
            "predicted_spectrum: requires |phi'(x0)| < 1 (Riesz fixed-point derivative "
            "condition)");
    std::vector<cd> out;
    out.push_back(cd(1.0, 0.0));
    double p = 1.0;
    for (int k = 1; k <= n_cut; ++k) {
        p *= dphi;
        cd v(p, 0.0);
        bool dup = false;
        for (const cd& e : out)
            if (std::abs(e - v) <= 1e-15) dup = true;
        if (!dup) out.push_back(v);
    }
    bool has_zero = false;
    for (const cd& e : out)
        if (std::abs(e) <= 1e-15) has_zero = true;
    if (!has_zero) out.push_back(cd(0.0, 0.0));
    return out;
}

struct SpectrumReport {
    std::vector<cd> computed;
    std::vector<cd> predicted;
    /// (predicted index, computed index) for nonzero predicted values.
    std::vector<std::pair<int, int>> matched_pairs;
    std::vector<int> unmatched_predicted;
    /// Per predicted value: count of computed eigenvalues within tol.
    std::vector<int> multiplicity_table;
    double max_mismatch = 0.0;
    double tol = 0.0;
    bool all_matched = true;
    bool multiplicities_ok = true;  // each nonzero predicted value has count 1

    bool ok() const { return all_matched && multiplicities_ok; }
};

/// Greedy nearest matching of nonzero predicted values against the computed
/// multiset. Zero predicted values are compared by count only: truncation
/// produces a nilpotent block whose size depends on the degree.
inline SpectrumReport compare(const std::vector<cd>& computed, const std::vector<cd>& predicted,
                              double tol) {
    SpectrumReport rep;
    rep.computed = computed;
    rep.predicted = predicted;
    rep.tol = tol;
    // each computed eigenvalue counts toward its nearest predicted value
    // only; plain windows double-count when a geometric spectrum descends
    // through the tolerance
    rep.multiplicity_table.assign(predicted.size(), 0);
    for (const cd& c : computed) {
        std::size_t best = predicted.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t pi = 0; pi < predicted.size(); ++pi) {
            double d = std::abs(c - predicted[pi]);
            if (d < best_d) {
                best_d = d;
                best = pi;
            }
        }
        if (best < predicted.size() && best_d <= tol) ++rep.multiplicity_table[best];
    }

    std::vector<int> order;
    for (std::size_t pi = 0; pi < predicted.size(); ++pi)
        if (std::abs(predicted[pi]) > tol) order.push_back(static_cast<int>(pi));
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return std::abs(predicted[static_cast<std::size_t>(a)]) >
               std::abs(predicted[static_cast<std::size_t>(b)]);
    });

    std::vector<bool> used(computed.size(), false);
    for (int pi : order) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t ci = 0; ci < computed.size(); ++ci) {
            if (used[ci]) continue;
            double d = std::abs(computed[ci] - predicted[static_cast<std::size_t>(pi)]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(ci);
            }
        }
        if (best >= 0 && best_d <= tol) {
            used[static_cast<std::size_t>(best)] = true;
            rep.matched_pairs.emplace_back(pi, best);
            rep.max_mismatch = std::max(rep.max_mismatch, best_d);
        } else {
            rep.unmatched_predicted.push_back(pi);
            rep.all_matched = false;
        }
        if (rep.multiplicity_table[static_cast<std::size_t>(pi)] != 1)
            rep.multiplicities_ok = false;
    }
    return rep;
}

}  // namespace rieszlab
