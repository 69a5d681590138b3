#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <rieszlab/operator.hpp>
#include <rieszlab/spectra.hpp>

using namespace rieszlab;

namespace {

// multiset match: both sorted by (re, im), pairwise within tol
void check_spectrum(std::vector<cd> got, std::vector<cd> want, double tol) {
    auto by_parts = [](const cd& a, const cd& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    std::sort(got.begin(), got.end(), by_parts);
    std::sort(want.begin(), want.end(), by_parts);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(std::abs(got[i] - want[i]) <= tol);
}

// exact unitary similarity by a deterministic sequence of Givens rotations;
// the spectrum of the result is the original diagonal
CMat scrambled_triangular(const std::vector<cd>& diag, std::mt19937_64& rng) {
    const int n = static_cast<int>(diag.size());
    CMat a(n);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int i = 0; i < n; ++i) {
        a(i, i) = diag[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) a(i, j) = 0.3 * cd(U(rng), U(rng));
    }
    for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i + 1 < n; ++i) {
            double th = U(rng);
            double c = std::cos(th), s = std::sin(th);
            for (int j = 0; j < n; ++j) {  // rows
                cd x = a(i, j), y = a(i + 1, j);
                a(i, j) = c * x + s * y;
                a(i + 1, j) = -s * x + c * y;
            }
            for (int r = 0; r < n; ++r) {  // columns (transpose side)
                cd x = a(r, i), y = a(r, i + 1);
                a(r, i) = c * x + s * y;
                a(r, i + 1) = -s * x + c * y;
            }
        }
    return a;
}

double residual_by_inverse_iteration(const CMat& a, cd lambda) {
    const int n = a.dim();
    CMat shifted = a;
    // small perturbation keeps the solve regular at an exact eigenvalue
    cd mu = lambda + cd(1e-11 * (1.0 + std::abs(lambda)), 0.0);
    for (int i = 0; i < n; ++i) shifted(i, i) -= mu;
    LuFactors lu(shifted);
    std::vector<cd> v(static_cast<std::size_t>(n), cd(1.0, 0.25));
    for (int it = 0; it < 3; ++it) {
        v = lu.solve(v);
        double nv = 0.0;
        for (const cd& e : v) nv += std::norm(e);
        nv = std::sqrt(nv);
        for (cd& e : v) e /= nv;
    }
    std::vector<cd> av = a.apply(v);
    double r = 0.0;
    for (int i = 0; i < n; ++i) r += std::norm(av[static_cast<std::size_t>(i)] -
                                               lambda * v[static_cast<std::size_t>(i)]);
    return std::sqrt(r);
}

}  // namespace

TEST_CASE("eigenvalues of diagonal and identity matrices") {
    CMat d(4);
    d(0, 0) = 1.0;
    d(1, 1) = 0.5;
    d(2, 2) = 0.25;
    d(3, 3) = 0.125;
    check_spectrum(eigenvalues(d), {cd(1), cd(0.5), cd(0.25), cd(0.125)}, 1e-14);

    check_spectrum(eigenvalues(CMat::identity(5)), std::vector<cd>(5, cd(1.0)), 1e-14);
}

TEST_CASE("eigenvalues of the truncated x^2/2 matrix") {
    auto om = build_matrix(PolyMap(Poly({0.0, 0.0, 0.5})), 0.0, 4);
    check_spectrum(eigenvalues(om), {cd(1), cd(0), cd(0), cd(0), cd(0)}, 1e-12);
}

TEST_CASE("triangular matrices: QR agrees with the exact diagonal") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 8;
        CMat a(n);
        std::vector<cd> diag;
        for (int i = 0; i < n; ++i) {
            a(i, i) = cd(U(rng), U(rng));
            diag.push_back(a(i, i));
            for (int j = 0; j < i; ++j) a(i, j) = cd(U(rng), U(rng));
        }
        check_spectrum(eigenvalues(a), diag, 1e-10);
    }
}

TEST_CASE("known-spectrum dense matrices after unitary scrambling") {
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<cd> diag;
        for (int i = 0; i < 10; ++i)
            diag.push_back(cd(1.0 - 0.17 * i, 0.05 * i * (trial % 3)));
        CMat a = scrambled_triangular(diag, rng);
        auto eigs = eigenvalues(a);
        check_spectrum(eigs, diag, 1e-9);

        // backward-error residuals for the well-separated eigenvalues
        for (const cd& l : eigs) {
            double r = residual_by_inverse_iteration(a, l);
            CHECK(r <= 1e-8 * a.frobenius_norm());
        }
        // trace invariance
        cd tr(0.0, 0.0), se(0.0, 0.0);
        for (int i = 0; i < a.dim(); ++i) tr += a(i, i);
        for (const cd& l : eigs) se += l;
        CHECK(std::abs(tr - se) < 1e-9 * std::max(1.0, std::abs(tr)));
    }
}

TEST_CASE("spectral radius agrees with power iteration") {
    std::mt19937_64 rng(5);
    std::vector<cd> diag = {cd(1.0), cd(0.62), cd(0.35), cd(-0.2), cd(0.1), cd(0.01)};
    CMat a = scrambled_triangular(diag, rng);
    auto eigs = eigenvalues(a);
    double rho_qr = 0.0;
    for (const cd& l : eigs) rho_qr = std::max(rho_qr, std::abs(l));
    double rho_pi = power_iteration_radius(a);
    CHECK(rho_pi == Catch::Approx(rho_qr).epsilon(1e-6));

    // composition operator for x/2 + 1/4: dominant eigenvalue 1
    auto om = build_matrix(PolyMap(Poly({0.25, 0.5})), 0.5, 16);
    CHECK(power_iteration_radius(om.entries) == Catch::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("qr convergence failure carries partial results") {
    std::mt19937_64 rng(31);
    std::vector<cd> diag = {cd(1.0), cd(0.7), cd(0.4), cd(0.2)};
    CMat a = scrambled_triangular(diag, rng);
    EigenOptions opts;
    opts.max_sweeps_factor = 0;
    CHECK_THROWS_AS(eigenvalues(a, opts), qr_convergence_error);
}

TEST_CASE("dimension cap on operator matrices") {
    OperatorMatrix om{CMat(514), 0.0, 513, PolyMap::identity(), {}};
    CHECK_THROWS_AS(eigenvalues(om), std::invalid_argument);
}

TEST_CASE("predicted_spectrum") {
    SECTION("phi'(x0) = 1/2") {
        auto om = predicted_spectrum(PolyMap(Poly({0.0, 0.5})), 0.0, 3);
        check_spectrum(om, {cd(1), cd(0.5), cd(0.25), cd(0.125), cd(0)}, 1e-15);
    }
    SECTION("phi'(x0) = 0 collapses to {0,1}") {
        auto om = predicted_spectrum(PolyMap(Poly({0.0, 0.0, 0.5})), 0.0, 5);
        check_spectrum(om, {cd(1), cd(0)}, 1e-15);
    }
    SECTION("phi'(x0) = -1/3, signed powers") {
        // 2/3 - x/3 fixes 1/2 with derivative -1/3
        auto om = predicted_spectrum(PolyMap(Poly({2.0 / 3.0, -1.0 / 3.0})), 0.5, 2);
        check_spectrum(om, {cd(1), cd(-1.0 / 3.0), cd(1.0 / 9.0), cd(0)}, 1e-15);
    }
    SECTION("|phi'(x0)| >= 1 is rejected") {
        CHECK_THROWS_AS(predicted_spectrum(PolyMap::identity(), 0.5, 3), std::domain_error);
    }
}

TEST_CASE("predicted set is closed under multiplication") {
    auto vals = predicted_spectrum(PolyMap(Poly({0.25, 0.5})), 0.5, 8);
    for (const cd& a : vals)
        for (const cd& b : vals) {
            if (std::abs(a) < 1e-12 || std::abs(b) < 1e-12) continue;
            cd p = a * b;
            if (std::abs(p) < std::abs(vals[1]) * std::pow(0.5, 8)) continue;  // beyond cut
            bool found = false;
            for (const cd& v : vals)
                if (std::abs(v - p) <= 1e-12 * std::max(1.0, std::abs(p))) found = true;
            if (std::abs(p) >= std::pow(0.5, 8) - 1e-15) CHECK(found);
        }
}

TEST_CASE("spectra of attracting maps match the geometric prediction") {
    // contraction with phi'(x0) = 1/2 and a genuinely quadratic map with
    // phi'(x0) = 0: nonzero spectrum at degree d matches the prediction with
    // n_cut = d and every nonzero eigenvalue is simple
    struct Case {
        PolyMap map;
        double x0;
    };
    std::vector<Case> cases = {{PolyMap(Poly({0.25, 0.5})), 0.5},
                               {PolyMap(Poly({0.0, 0.0, 0.5})), 0.0},
                               {PolyMap(Poly({0.18, 0.1, 0.2})), 0.0}};
    // fixed point of the third map: 0.2x^2 - 0.9x + 0.18 = 0
    cases[2].x0 = (0.9 - std::sqrt(0.81 - 4 * 0.2 * 0.18)) / 0.4;
    for (auto& [map, x0] : cases) {
        const int d = 12;
        auto rep = compare(eigenvalues(build_matrix(map, x0, d)),
                           predicted_spectrum(map, x0, d), 1e-8);
        CHECK(rep.all_matched);
        CHECK(rep.multiplicities_ok);
        CHECK(rep.max_mismatch <= 1e-8);
    }
}

TEST_CASE("compare") {
    SECTION("diagonal oracle matches fully") {
        std::vector<cd> computed = {cd(1), cd(0.5), cd(0.25), cd(0.125)};
        auto predicted = predicted_spectrum(PolyMap(Poly({0.0, 0.5})), 0.0, 3);
        auto rep = compare(computed, predicted, 1e-9);
        CHECK(rep.ok());
        CHECK(rep.matched_pairs.size() == 4);
        CHECK(rep.max_mismatch <= 1e-15);
        for (std::size_t i = 0; i < rep.predicted.size(); ++i) {
            if (std::abs(rep.predicted[i]) > rep.tol) CHECK(rep.multiplicity_table[i] == 1);
        }
    }
    SECTION("identity-map style multiplicity violation") {
        auto rep = compare({cd(1), cd(1)}, {cd(1), cd(0)}, 1e-9);
        CHECK_FALSE(rep.multiplicities_ok);
        CHECK(rep.multiplicity_table[0] == 2);
        CHECK(rep.all_matched);
    }
    SECTION("empty computed misses lambda = 1") {
        auto rep = compare({}, {cd(0), cd(1)}, 1e-9);
        CHECK_FALSE(rep.all_matched);
        REQUIRE(rep.unmatched_predicted.size() == 1);
        CHECK(rep.predicted[static_cast<std::size_t>(rep.unmatched_predicted[0])] == cd(1));
    }
}
