#include <doctest.h>

#include <cmath>

#include "logconc/bounds.hpp"
#include "logconc/errors.hpp"
#include "logconc/grid_measure.hpp"
#include "logconc/metrics.hpp"
#include "logconc/oracle.hpp"

using namespace logconc;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST_CASE("catalog arithmetic anchors") {
    CHECK(evaluate("cheeger_to_poincare", BoundInputs{}.set("cheeger", 1.0)).value ==
          doctest::Approx(4.0));
    CHECK(evaluate("ledoux_improved", BoundInputs{}.set("c_p", 4.0)).value ==
          doctest::Approx(32.0 / kPi));
    CHECK(evaluate("ledoux_reverse", BoundInputs{}.set("c_p", 4.0)).value ==
          doctest::Approx(12.0));
    // entry 4 at s = 0 is exactly (16/pi) beta(0)
    CHECK(evaluate("weakmil_osc", BoundInputs{}.set("beta", 1.0).set("s", 0.0)).value ==
          doctest::Approx(16.0 / kPi));
    CHECK(evaluate("weakmil_var", BoundInputs{}.set("beta", 1.0).set("s", 0.0)).value ==
          doctest::Approx(16.0 / kPi));
    CHECK(evaluate("kls_variance", BoundInputs{}.set("variance", 2.0)).value ==
          doctest::Approx(8.0));
    CHECK(evaluate("kls_variance_companion", BoundInputs{}.set("variance", 1.0)).value ==
          doctest::Approx(484.0));
    CHECK(evaluate("demollification",
                   BoundInputs{}.set("lambda", 0.5).set("c_p_mix", 1.0))
              .value == doctest::Approx(3.0));
    CHECK(evaluate("latala_tail",
                   BoundInputs{}.set("dim_n", 10.0).set("t", 4.0).set("epsilon", 1.0))
              .value ==
          doctest::Approx(6.0 * std::pow(10.0, 1.0 - 4.0 / (2.0 * std::sqrt(3.0)))));
}

TEST_CASE("preconditions produce the inert sentinel, never an exception") {
    const BoundCertificate c =
        evaluate("weakmil_osc", BoundInputs{}.set("beta", 1.0).set("s", 0.7));
    CHECK_FALSE(c.preconditions_met);
    CHECK(c.value == kPosInf);
    CHECK_FALSE(c.diagnostics.empty());

    CHECK_FALSE(evaluate("l2_truncation",
                         BoundInputs{}.set("a_trunc", 1.0).set("cheeger_truncated", 1.0))
                    .preconditions_met);
    CHECK_FALSE(
        evaluate("restriction", BoundInputs{}.set("mass_a", 0.4).set("cheeger_restricted", 1.0))
            .preconditions_met);
    CHECK_FALSE(evaluate("tv_transference", BoundInputs{}
                                                .set("d_tv", 1.0)
                                                .set("cheeger_ref", 1.0)
                                                .set("both_log_concave", 1.0))
                    .preconditions_met);
}

TEST_CASE("unknown formulas and missing inputs throw") {
    CHECK_THROWS_AS(evaluate("no_such_formula", BoundInputs{}), UnknownFormula);
    CHECK_THROWS_AS(evaluate("cheeger_to_poincare", BoundInputs{}), MissingInput);
    CHECK_THROWS_AS(evaluate("concentration_to_cheeger", BoundInputs{}), MissingInput);
}

TEST_CASE("verify_against_oracle") {
    BoundCertificate c = evaluate("cheeger_to_poincare", BoundInputs{}.set("cheeger", 1.0));
    double tight = 0.0;
    CHECK(verify_against_oracle(c, 4.0, 0.01, &tight));
    CHECK(tight == doctest::Approx(1.0));
    c.value = 3.9;
    CHECK_FALSE(verify_against_oracle(c, 4.0, 0.01));
    BoundCertificate inert =
        evaluate("weakmil_osc", BoundInputs{}.set("beta", 1.0).set("s", 0.9));
    CHECK_THROWS_AS(verify_against_oracle(inert, 1.0, 0.01), InvalidParameter);
}

TEST_CASE("catalog covers every documented entry id") {
    const auto& infos = formula_catalog();
    auto has = [&](const char* id) {
        for (const auto& f : infos)
            if (f.id == id) return true;
        return false;
    };
    for (const char* id :
         {"cheeger_to_poincare", "ledoux_reverse", "ledoux_improved", "weakmil_osc",
          "weakmil_var", "weakmil_optimized", "concentration_to_cheeger", "milman_profile",
          "first_moment", "kls_variance", "kls_variance_companion", "radial_split",
          "weak22_to_cheeger", "restriction", "restriction_weak", "l2_truncation",
          "linf_truncation", "latala_tail", "bobkov_1d", "density_ratio_classic",
          "transfer_lp", "transfer_entropy", "transfer_lp_bis", "transfer_entropy_bis",
          "milman_density", "barthe_milman_alpha", "barthe_milman_cheeger", "tv_transference",
          "w1_weak_beta", "w1_weak", "tv_weak_beta", "tv_weak", "dud_weak_beta", "dud_weak",
          "mollify_interpolation", "mollify_additive", "klartag_cube", "uniform_convolution",
          "gaussian_convolution_restricted", "demollification", "demollification_affine",
          "demollification_cheeger", "beta_convolution", "bl_to_cheeger", "bl_to_cheeger_pair",
          "semigroup_tv_contraction", "semigroup_w1_contraction", "lp_to_w1", "lp_to_cheeger",
          "lp_semigroup", "kyfan_expectation"})
        CHECK_MESSAGE(has(id), id);
}

TEST_CASE("radial_split chains through the oscillation bound at s = 0") {
    const BoundCertificate c = evaluate(
        "radial_split", BoundInputs{}.set("radial_abs_dev", 0.8).set("dim_n", 3.0));
    CHECK(c.preconditions_met);
    REQUIRE(c.chain.size() == 1);
    CHECK(c.chain[0].formula_id == "weakmil_osc");
    CHECK(c.value == doctest::Approx(16.0 / kPi * 2.0 * 1.8));
}

TEST_CASE("best_bound examples") {
    SUBCASE("exponential with its own concentration profile") {
        const GridMeasure e = realize(MeasureSpec::exponential_spec(1.0, 2048));
        BoundContext ctx;
        ctx.own_concentration = concentration_profile(e, default_radii(e));
        const BoundCertificate c = best_bound(BoundTarget::CheegerMedian, e, ctx);
        const double oracle = cheeger_constant(e);
        CHECK(c.value >= oracle * 0.999);
        CHECK(c.value <= 60.0);
    }
    SUBCASE("identical gaussian reference gives the density-ratio bound exactly") {
        const GridMeasure g = realize(MeasureSpec::gaussian_spec(0, 1, 2048));
        BoundContext ctx;
        ReferenceContext ref;
        ref.name = "gamma";
        ref.measure = &g;
        ref.c_p = spectral_poincare(g).c_p;
        ctx.references.push_back(ref);
        const BoundCertificate c = best_bound(BoundTarget::C_P, g, ctx);
        CHECK(c.formula_id == "density_ratio_classic");
        CHECK(c.inputs.at("ratio_nu_over_mu") == doctest::Approx(1.0));
        CHECK(c.inputs.at("ratio_mu_over_nu") == doctest::Approx(1.0));
        CHECK(c.value == doctest::Approx(*ref.c_p));
    }
    SUBCASE("empty context still yields the self-referential moment bounds") {
        const GridMeasure u = realize(MeasureSpec::uniform_spec(-1.0, 1.0, 1024));
        BoundContext ctx;
        const BoundCertificate ch = best_bound(BoundTarget::CheegerMedian, u, ctx);
        CHECK(ch.preconditions_met);
        const BoundCertificate cp = best_bound(BoundTarget::C_P, u, ctx);
        CHECK(cp.preconditions_met);
        CHECK(cp.value >= spectral_poincare(u).c_p * 0.999);
    }
    SUBCASE("enlarging the context never increases the best bound") {
        const GridMeasure e = realize(MeasureSpec::exponential_spec(1.0, 2048));
        BoundContext small;
        small.own_concentration = concentration_profile(e, default_radii(e));
        BoundContext big = small;
        big.own_c_p = spectral_poincare(e).c_p;
        const double v_small = best_bound(BoundTarget::CheegerMedian, e, small).value;
        const double v_big = best_bound(BoundTarget::CheegerMedian, e, big).value;
        CHECK(v_big <= v_small * (1.0 + 1e-12));
    }
}

TEST_CASE("weak22_beta is a usable weak (2,2) rate") {
    const GridMeasure g = realize(MeasureSpec::gaussian_spec(0, 1, 2048));
    const double beta = weak22_beta(g, 0.1);
    CHECK(beta > 0.0);
    CHECK(std::isfinite(beta));
    // shrinking s enlarges the window, so beta grows
    CHECK(weak22_beta(g, 0.01) >= beta);
    // and the resulting Cheeger bound is valid
    const BoundCertificate c = evaluate(
        "weak22_to_cheeger", BoundInputs{}.set("beta22", beta).set("s", 0.1));
    CHECK(c.preconditions_met);
    CHECK(c.value >= cheeger_constant(g));
}

TEST_CASE("sup_density_ratio") {
    const GridMeasure g = realize(MeasureSpec::gaussian_spec(0, 1, 1024));
    CHECK(sup_density_ratio(g, g) == doctest::Approx(1.0));
    const GridMeasure u = realize(MeasureSpec::uniform_spec(-1.0, 1.0, 1024));
    CHECK(sup_density_ratio(g, u) == kPosInf);  // gaussian mass outside the box
    CHECK(std::isfinite(sup_density_ratio(u, g)));
}
