#pragma once

// Small dense complex matrices: storage, products, Frobenius norm, and an
// LU solve with partial pivoting (used for inverse-iteration residual
// checks). Everything here is desk scale; no blocking, no BLAS.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rieszlab {

using cd = std::complex<double>;

class CMat {
  public:
    CMat() = default;
    explicit CMat(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, cd(0.0, 0.0)) {
        if (n < 1) throw std::invalid_argument("CMat: dimension must be positive");
    }

    static CMat identity(int n) {
        CMat m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return n_; }

    cd& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const cd& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

    CMat operator*(const CMat& o) const {
        if (n_ != o.n_) throw std::invalid_argument("CMat: dimension mismatch");
        CMat r(n_);
        for (int i = 0; i < n_; ++i) {
            for (int k = 0; k < n_; ++k) {
                cd aik = (*this)(i, k);
                if (aik == cd(0.0, 0.0)) continue;
                for (int j = 0; j < n_; ++j) r(i, j) += aik * o(k, j);
            }
        }
        return r;
    }

    std::vector<cd> apply(const std::vector<cd>& v) const {
        if (static_cast<int>(v.size()) != n_) throw std::invalid_argument("CMat: vector size");
        std::vector<cd> r(static_cast<std::size_t>(n_), cd(0.0, 0.0));
        for (int i = 0; i < n_; ++i) {
            cd s(0.0, 0.0);
            for (int j = 0; j < n_; ++j) s += (*this)(i, j) * v[static_cast<std::size_t>(j)];
            r[static_cast<std::size_t>(i)] = s;
        }
        return r;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cd& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double m = 0.0;
        for (const cd& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

  private:
    int n_ = 0;
    std::vector<cd> a_;
};

/// LU factorization with partial pivoting. Throws on exact singularity.
class LuFactors {
  public:
    explicit LuFactors(CMat a) : lu_(std::move(a)), piv_(static_cast<std::size_t>(lu_.dim())) {
        const int n = lu_.dim();
        for (int i = 0; i < n; ++i) piv_[static_cast<std::size_t>(i)] = i;
        for (int k = 0; k < n; ++k) {
            int p = k;
            double best = std::abs(lu_(k, k));
            for (int i = k + 1; i < n; ++i) {
                double v = std::abs(lu_(i, k));
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            if (best == 0.0) throw std::runtime_error("LuFactors: singular matrix");
            if (p != k) {
                for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
                std::swap(piv_[static_cast<std::size_t>(k)], piv_[static_cast<std::size_t>(p)]);
            }
            for (int i = k + 1; i < n; ++i) {
                cd f = lu_(i, k) / lu_(k, k);
                lu_(i, k) = f;
                for (int j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
            }
        }
    }

    std::vector<cd> solve(const std::vector<cd>& b) const {
        const int n = lu_.dim();
        std::vector<cd> x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = b[piv_[static_cast<std::size_t>(i)]];
        for (int i = 1; i < n; ++i)
            for (int j = 0; j < i; ++j) x[static_cast<std::size_t>(i)] -= lu_(i, j) * x[static_cast<std::size_t>(j)];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j)
                x[static_cast<std::size_t>(i)] -= lu_(i, j) * x[static_cast<std::size_t>(j)];
            x[static_cast<std::size_t>(i)] /= lu_(i, i);
        }
        return x;
    }

  private:
    CMat lu_;
    std::vector<std::size_t> piv_;
};

}  // namespace rieszlab
