#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <rieszlab/classifier.hpp>

#include "corpus.hpp"

using namespace rieszlab;

namespace {
PolyMap half_square() { return PolyMap(Poly({0.0, 0.0, 0.5})); }
PolyMap half_x() { return PolyMap(Poly({0.0, 0.5})); }

const EvidenceFact* find_fact(const Classification& c, const std::string& name) {
    for (const auto& f : c.evidence)
        if (f.name == name) return &f;
    return nullptr;
}
}  // namespace

TEST_CASE("classify_c1 on the named example maps") {
    SECTION("x^2/2 is Riesz but not power compact") {
        auto c = classify_c1(half_square());
        CHECK(c.verdict == Verdict::RieszNotPowerCompact);
        REQUIRE(find_fact(c, "phi_prime_x0"));
        CHECK(find_fact(c, "phi_prime_x0")->value == Catch::Approx(0.0).margin(1e-10));
        REQUIRE(find_fact(c, "essrad_upper_at_nmax"));
        CHECK(find_fact(c, "essrad_upper_at_nmax")->value < 0.5);
    }
    SECTION("identity is not Riesz") {
        auto c = classify_c1(PolyMap::identity());
        CHECK(c.verdict == Verdict::NotRiesz);
        CHECK(find_fact(c, "fixed_point_count"));
    }
    SECTION("x/2 is not Riesz, with the derivative lower bound") {
        auto c = classify_c1(half_x());
        CHECK(c.verdict == Verdict::NotRiesz);
        REQUIRE(find_fact(c, "phi_prime_x0"));
        CHECK(find_fact(c, "phi_prime_x0")->value == Catch::Approx(0.5).margin(1e-12));
        REQUIRE(find_fact(c, "essrad_lower_limit"));
        CHECK(find_fact(c, "essrad_lower_limit")->value >= 0.5 * (1.0 - 1e-6));
    }
    SECTION("constants are compact") {
        CHECK(classify_c1(PolyMap::constant(0.0)).verdict == Verdict::Compact);
        CHECK(classify_c1(PolyMap::constant(0.37)).verdict == Verdict::Compact);
        CHECK(classify_c1(PolyMap::constant(1.0)).verdict == Verdict::Compact);
    }
}

TEST_CASE("near-constant maps under the default exact constancy rule") {
    // phi = 0.3 + 1e-8 x^2 has phi'(x0) ~ 6e-9 above the zero threshold:
    // a genuinely nonvanishing derivative, hence not Riesz
    auto c = classify_c1(PolyMap(Poly({0.3, 0.0, 1e-8})));
    CHECK(c.verdict == Verdict::NotRiesz);
}

TEST_CASE("opt-in constancy tolerance detects numerically rank-one powers") {
    // phi_2 of 0.3 + 1e-8 x^2 has nonconstant coefficients ~6e-17, below
    // 1e-14 relative to the constant term
    ClassifyConfig cfg;
    cfg.constancy_rel_tol = 1e-14;
    auto c = classify_c1(PolyMap(Poly({0.3, 0.0, 1e-8})), cfg);
    CHECK(c.verdict == Verdict::PowerCompact);
    CHECK(c.power == 2);
}

TEST_CASE("classify_c1 does not mistake contracting linear maps for power compact") {
    // iterates of x/2 have coefficients below any absolute threshold by
    // n ~ 47 but must stay NotRiesz
    ClassifyConfig cfg;
    cfg.constancy_cap = 64;
    auto c = classify_c1(half_x(), cfg);
    CHECK(c.verdict == Verdict::NotRiesz);
}

TEST_CASE("classify_c1 handles oscillating maps as non-singleton") {
    // 1 - x swaps the interval ends; ranges never shrink
    auto c = classify_c1(PolyMap(Poly({1.0, -1.0})));
    CHECK(c.verdict == Verdict::NotRiesz);
}

TEST_CASE("classify_c1 on a rescaled domain") {
    // conjugate of a quadratic contraction on [0.2, 0.6]
    PolyMap m(Poly({0.25, 0.0, 0.5}), {0.2, 0.6});
    auto c = classify_c1(m);
    CHECK(c.verdict == Verdict::NotRiesz);  // phi'(x0) = x0 ~ 0.293 != 0
}

TEST_CASE("classify_c1 randomized corpus matches the analytic criterion") {
    auto maps = corpus::attracting_corpus(20, 7777);
    int mismatches = 0;
    for (const auto& cm : maps) {
        auto c = classify_c1(cm.map);
        bool want_riesz = cm.lambda == 0.0;
        Verdict want = want_riesz ? Verdict::RieszNotPowerCompact : Verdict::NotRiesz;
        if (c.verdict != want) ++mismatches;
        if (c.fixed_point.found)
            CHECK(c.fixed_point.x0 == Catch::Approx(cm.x0).margin(1e-8));
    }
    CHECK(mismatches == 0);
}

TEST_CASE("classify_dd on the worked examples") {
    auto w = WeightSequence::factorial_sq(40);
    SECTION("x/2 is compact: ||phi'|| = 1/2 < 1") {
        auto c = classify_dd(half_x(), w);
        CHECK(c.verdict == Verdict::Compact);
        REQUIRE(find_fact(c, "sup_phi_prime"));
        CHECK(find_fact(c, "sup_phi_prime")->value == Catch::Approx(0.5).margin(1e-12));
    }
    SECTION("x^2/2 is power compact with N = 2") {
        auto c = classify_dd(half_square(), w);
        CHECK(c.verdict == Verdict::PowerCompact);
        CHECK(c.power == 2);
        REQUIRE(find_fact(c, "sup_phi_N_prime"));
        CHECK(find_fact(c, "sup_phi_N_prime")->value == Catch::Approx(0.5).margin(1e-10));
        REQUIRE(find_fact(c, "sup_phi_N_prime")->bracket.has_value());
        auto br = *find_fact(c, "sup_phi_N_prime")->bracket;
        CHECK(br[0] <= 0.5);
        CHECK(br[1] >= 0.5);
        CHECK(br[1] < 1.0);
        // the chain-product closure: margin positive on the tested window
        REQUIRE(find_fact(c, "chain_bound_min_margin_log"));
        CHECK(find_fact(c, "chain_bound_min_margin_log")->value > 0.0);
        REQUIRE(find_fact(c, "chain_c"));
        CHECK(find_fact(c, "chain_c")->value < 1.0);
    }
    SECTION("identity is not Riesz") {
        auto c = classify_dd(PolyMap::identity(), w);
        CHECK(c.verdict == Verdict::NotRiesz);
    }
    SECTION("assumptions are recorded") {
        auto c = classify_dd(half_x(), w);
        REQUIRE(c.assumptions.size() >= 2);
    }
}

TEST_CASE("classify_dd rejects unusable weight sequences") {
    CHECK_THROWS_AS(classify_dd(half_x(), WeightSequence::factorial(40)),
                    std::invalid_argument);  // analytic family: tail stays at 1
    CHECK_THROWS_AS(classify_dd(half_x(),
                                WeightSequence::from_values(std::vector<double>(11, 1.0))),
                    std::invalid_argument);  // binomial violation
}

TEST_CASE("consistency across algebras") {
    auto w = WeightSequence::factorial_sq(40);
    // constant map: compact in both readings, never NotRiesz in DD
    auto c1 = classify_c1(PolyMap::constant(0.4));
    auto dd = classify_dd(PolyMap::constant(0.4), w);
    CHECK(c1.verdict == Verdict::Compact);
    CHECK(dd.verdict == Verdict::Compact);

    // a map power compact in C1 terms (via the opt-in tolerance) is never
    // NotRiesz for DD: it is a strict contraction there
    ClassifyConfig tol_cfg;
    tol_cfg.constancy_rel_tol = 1e-14;
    auto nearly = PolyMap(Poly({0.3, 0.0, 1e-8}));
    CHECK(classify_c1(nearly, tol_cfg).verdict == Verdict::PowerCompact);
    CHECK(classify_dd(nearly, w, tol_cfg).verdict == Verdict::Compact);
}

TEST_CASE("classify verdicts carry machine-checkable evidence") {
    for (const auto& cm : corpus::attracting_corpus(6, 1234)) {
        auto c = classify_c1(cm.map);
        CHECK_FALSE(c.evidence.empty());
        for (const auto& f : c.evidence) CHECK_FALSE(f.rule.empty());
    }
}
