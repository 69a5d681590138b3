// Acceptance suite: every criterion prints one PASS/FAIL line and the binary
// exits nonzero if any fail. Tolerances are pinned in the assertions.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <rieszlab/classifier.hpp>
#include <rieszlab/gleason_shift.hpp>
#include <rieszlab/json_io.hpp>
#include <rieszlab/spectra.hpp>

#include "corpus.hpp"

using namespace rieszlab;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const EvidenceFact* find_fact(const Classification& c, const std::string& name) {
    for (const auto& f : c.evidence)
        if (f.name == name) return &f;
    return nullptr;
}

// 1. Spectrum formula: phi = x/2 at degree 32 reproduces {2^-k}, each nonzero
//    eigenvalue simple, in under a second.
void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    PolyMap map(Poly({0.0, 0.5}));
    auto om = build_matrix(map, 0.0, 32);
    auto eigs = eigenvalues(om);
    std::sort(eigs.begin(), eigs.end(),
              [](const cd& a, const cd& b) { return std::abs(a) > std::abs(b); });
    bool ok = eigs.size() == 33;
    double worst = 0.0;
    for (int k = 0; k <= 32 && ok; ++k) {
        double want = std::pow(0.5, k);
        double rel = std::abs(eigs[static_cast<std::size_t>(k)] - cd(want)) / want;
        worst = std::max(worst, rel);
        if (rel > 1e-9) ok = false;
    }
    auto rep = compare(eigs, predicted_spectrum(map, 0.0, 32), 1e-9);
    ok = ok && rep.multiplicities_ok && rep.all_matched;
    double dt = seconds_since(t0);
    ok = ok && dt < 1.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "spectrum of x/2 at d=32: 33 eigenvalues, worst rel err %.2e, "
                  "multiplicities 1, %.3f s",
                  worst, dt);
    report(1, ok, buf);
}

// 2. Riesz iff-criterion over C1: the four named maps plus a 20-map random
//    corpus with known phi'(x0), zero misclassifications.
void criterion_2() {
    bool ok = true;
    std::string detail;
    ok &= classify_c1(PolyMap(Poly({0.0, 0.0, 0.5}))).verdict ==
          Verdict::RieszNotPowerCompact;
    ok &= classify_c1(PolyMap(Poly({0.0, 0.5}))).verdict == Verdict::NotRiesz;
    ok &= classify_c1(PolyMap::identity()).verdict == Verdict::NotRiesz;
    ok &= classify_c1(PolyMap::constant(0.3)).verdict == Verdict::Compact;
    int named_ok = ok ? 4 : 0;
    int mismatches = 0;
    for (const auto& cm : corpus::attracting_corpus(20, 20250810)) {
        Verdict want =
            cm.lambda == 0.0 ? Verdict::RieszNotPowerCompact : Verdict::NotRiesz;
        if (classify_c1(cm.map).verdict != want) ++mismatches;
    }
    ok = ok && mismatches == 0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "classify_c1: %d/4 named maps, %d/20 corpus mismatches", named_ok,
                  mismatches);
    report(2, ok, buf);
}

// 3. Essential-radius lower bound for x/2 in the C1 norm.
void criterion_3() {
    auto seq = essential_radius_sequence(PolyMap(Poly({0.0, 0.5})), 0.0, NormKind::c1, 20);
    bool ok = seq.size() == 20;
    for (const auto& p : seq) {
        double want_log = (p.n * std::log(0.5) - std::log(2.0)) / p.n;
        if (!(p.log_lower >= want_log - 1e-12)) ok = false;
    }
    double r20 = std::exp(seq.back().log_lower);
    ok = ok && r20 >= 0.46;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "essrad lower bounds for x/2: r_n >= (2^-(n+1))^(1/n) for n <= 20, "
                  "r_20 = %.4f >= 0.46",
                  r20);
    report(3, ok, buf);
}

// 4. Riesz decay for x^2/2: r_20 upper below 0.1, uppers decreasing from n = 5.
void criterion_4() {
    auto t0 = std::chrono::steady_clock::now();
    auto seq = essential_radius_sequence(PolyMap(Poly({0.0, 0.0, 0.5})), 0.0, NormKind::c1, 20);
    bool ok = seq.back().log_upper < std::log(0.1);
    const double neg_inf = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 4; i + 1 < seq.size(); ++i) {
        if (seq[i + 1].log_upper == neg_inf) continue;  // total underflow: full decay
        if (!(seq[i + 1].log_upper < seq[i].log_upper)) ok = false;
    }
    double dt = seconds_since(t0);
    ok = ok && dt < 1.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "essrad uppers for x^2/2: log r_20 = %.1f < log 0.1, decreasing for "
                  "n >= 5, %.3f s",
                  seq.back().log_upper, dt);
    report(4, ok, buf);
}

// 5. Power compactness in D(X,M): classify_dd gives PowerCompact(2) for x^2/2
//    with ||phi_2'|| = 1/2 +- 1e-10 and the chain bound at every grid point
//    for n <= 30.
void criterion_5() {
    PolyMap map(Poly({0.0, 0.0, 0.5}));
    ClassifyConfig cfg;
    cfg.dd_chain_check_nmax = 30;
    auto c = classify_dd(map, WeightSequence::factorial_sq(40), cfg);
    bool ok = c.verdict == Verdict::PowerCompact && c.power == 2;
    const auto* sup2 = find_fact(c, "sup_phi_N_prime");
    ok = ok && sup2 && std::abs(sup2->value - 0.5) <= 1e-10;
    const auto* margin = find_fact(c, "chain_bound_min_margin_log");
    ok = ok && margin && margin->value > 0.0;
    // independent recheck of the chain bound from the recorded constants
    const auto* cfact = find_fact(c, "chain_c");
    const auto* dsup = find_fact(c, "sup_phi_prime_upper");
    bool chain_ok = cfact && dsup;
    if (chain_ok) {
        for (int n = 3; n <= 30; ++n) {
            double grid_max_log = iterate_deriv_log_sup(map, n, 1024);
            double bound_log = (n - 2) * std::log(cfact->value) + 2 * std::log(dsup->value);
            if (!(grid_max_log < bound_log)) chain_ok = false;
        }
    }
    ok = ok && chain_ok;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "classify_dd(x^2/2, (n!)^2): PowerCompact(%d), ||phi_2'|| = %.12f, "
                  "chain bound holds for n <= 30",
                  c.power, sup2 ? sup2->value : -1.0);
    report(5, ok, buf);
}

// 6. Weight machinery: admissibility of (n!)^2 at window 40, the analytic
//    family fails nonanalyticity, and the submultiplicativity property holds
//    on 500 random pairs.
void criterion_6() {
    auto sq = check_admissible(WeightSequence::factorial_sq(40));
    bool ok = sq.binomial_ok && sq.nonanalytic_ok;
    auto fac = check_admissible(WeightSequence::factorial(40));
    bool tail_one = true;
    for (double t : fac.nonanalytic_tail)
        if (std::abs(t - 1.0) > 1e-12) tail_one = false;
    ok = ok && fac.binomial_ok && tail_one && !fac.nonanalytic_ok;

    auto w = WeightSequence::factorial_sq(40);
    std::mt19937_64 rng(20250810);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_int_distribution<int> degd(0, 8);
    int checked = 0, violations = 0;
    while (checked < 500) {
        std::vector<double> fc(static_cast<std::size_t>(degd(rng)) + 1);
        std::vector<double> gc(static_cast<std::size_t>(degd(rng)) + 1);
        for (double& x : fc) x = coeff(rng);
        for (double& x : gc) x = coeff(rng);
        if (checked % 2 == 0) {
            for (double& x : fc) x = std::abs(x);
            for (double& x : gc) x = std::abs(x);
        }
        Poly f(fc), g(gc);
        if (f.is_zero() || g.is_zero()) continue;
        Bracket bf = dd_norm(f, w), bg = dd_norm(g, w), bfg = dd_norm(f * g, w);
        if (!(bfg.upper <= (1.0 + 1e-8) * bf.upper * bg.upper)) ++violations;
        ++checked;
    }
    ok = ok && violations == 0;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "weights: (n!)^2 admissible at 40, n! analytic (tail 1), "
                  "submultiplicativity %d/%d pairs",
                  checked - violations, checked);
    report(6, ok, buf);
}

// 7. Weighted shift at truncation (64, 64): exact factorial sups, the Riesz
//    certificate root at n = 10, and uniformly separated witness images.
void criterion_7() {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    for (int n = 0; n <= 10; ++n) {
        double f = 1.0;
        for (int i = 2; i <= n + 1; ++i) f *= i;
        if (shift_iterate_sup(n, 64, 64, 16, 1).value != 1.0 / f) ok = false;
    }
    auto cert = riesz_certificate(10, 64);
    ok = ok && cert.back().c_root <= 0.19;
    for (int n = 1; n <= 10 && ok; ++n) {
        auto pairs = noncompact_witness(n, 50, 64, 64);
        if (pairs.size() != 50 * 49 / 2) ok = false;
        double f = 1.0;
        for (int i = 2; i <= n + 1; ++i) f *= i;
        for (const auto& p : pairs)
            if (!(p.distance > 0.0) ||
                std::abs(p.distance - 2.0 / f) > 1e-15 * (2.0 / f))
                ok = false;
    }
    double dt = seconds_since(t0);
    ok = ok && dt < 5.0;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "shift: sup_n = 1/(n+1)! exact for n <= 10, C_10^{1/10} = %.4f <= 0.19, "
                  "1225 witness pairs at 2/(n+1)! each, %.3f s",
                  cert.back().c_root, dt);
    report(7, ok, buf);
}

// 8. Schwarz-Gleason bound: a thousand random certified pairs, no violations.
void criterion_8() {
    std::mt19937_64 rng(20250810);
    const ShiftPoint origin = ShiftPoint::zeros(16, 16);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto x = random_ball_point(rng, 16, 16);
        auto f = random_unit_ball_function(rng, 16, 16);
        if (!f.unit_ball_certified()) {
            ++violations;
            continue;
        }
        double gap = std::abs(f.eval(x) - f.eval(origin));
        if (gap > 2.0 * x.sup_norm() * (1.0 + 1e-9)) ++violations;
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf), "schwarz bound: %d violations in 1000 pairs", violations);
    report(8, violations == 0, buf);
}

// 9. Fixed-point uniqueness at desk scale: every corpus map sends 100 seeds
//    to a common x0 within 1e-8 and its iterate diameters decay geometrically.
void criterion_9() {
    bool ok = true;
    int maps_ok = 0;
    auto maps = corpus::attracting_corpus(20, 20250810);
    for (const auto& cm : maps) {
        FixedPointOptions opts;
        opts.agree_tol = 1e-8;
        opts.diameter_window = 24;
        auto fp = find_fixed_point(cm.map, 100, opts);
        bool this_ok = fp.found && fp.seeds_agreeing == 100 &&
                       std::abs(fp.x0 - cm.x0) <= 1e-8;
        const auto& d = fp.basin_diameter_sequence;
        for (std::size_t i = 0; i + 1 < d.size(); ++i) {
            if (d[i + 1] <= 1e-13) break;  // collapsed to the fp floor
            if (!(d[i + 1] <= 0.95 * d[i])) this_ok = false;
        }
        if (this_ok) ++maps_ok;
        ok = ok && this_ok;
    }
    char buf[120];
    std::snprintf(buf, sizeof(buf),
                  "fixed points: %d/20 corpus maps with 100 agreeing seeds and geometric "
                  "diameter decay",
                  maps_ok);
    report(9, ok, buf);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (failures == 0) {
        std::printf("acceptance: all 9 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", failures);
    return 1;
}
