#include <doctest.h>

#include <cmath>

#include "logconc/errors.hpp"
#include "logconc/grid_measure.hpp"
#include "logconc/metrics.hpp"
#include "logconc/semigroup.hpp"

using namespace logconc;

TEST_CASE("ou flow maps gaussians to gaussians") {
    for (double sigma : {0.5, 1.0, 3.0}) {
        const GridMeasure start = realize(MeasureSpec::gaussian_spec(0.0, sigma, 2048));
        for (double T : {0.3, 1.0}) {
            const double var = sigma * sigma * std::exp(-T) - std::expm1(-T);
            const GridMeasure target =
                realize(MeasureSpec::gaussian_spec(0.0, std::sqrt(var), 2048));
            CHECK(tv(ou_evolve(start, T), target) < 1e-5);
        }
    }
}

TEST_CASE("ou basics") {
    const GridMeasure e = realize(MeasureSpec::exponential_spec(1.0, 2048));
    SUBCASE("T = 0 identity") {
        const GridMeasure same = ou_evolve(e, 0.0);
        CHECK(same.log_density == e.log_density);
    }
    SUBCASE("negative time rejected") { CHECK_THROWS_AS(ou_evolve(e, -1.0), InvalidParameter); }
    SUBCASE("long-time convergence to the standard gaussian") {
        const GridMeasure g = realize(MeasureSpec::gaussian_spec(0.0, 1.0, 2048));
        CHECK(tv(ou_evolve(e, 20.0), g) < 1e-3);
    }
    SUBCASE("gaussian fixed point") {
        const GridMeasure g = realize(MeasureSpec::gaussian_spec(0.0, 1.0, 2048));
        for (double T : {0.25, 2.0}) CHECK(tv(ou_evolve(g, T), g) < 1e-6);
    }
    SUBCASE("semigroup law") {
        const GridMeasure two_step = ou_evolve(ou_evolve(e, 0.4), 0.8);
        const GridMeasure one_step = ou_evolve(e, 1.2);
        CHECK(tv(two_step, one_step) < 1e-4);
    }
    SUBCASE("log-concavity preserved") {
        const GridMeasure evolved = ou_evolve(e, 0.7);
        CHECK(evolved.is_log_concave);
        CHECK(log_concavity_holds(evolved));
    }
    SUBCASE("flow record") {
        const OUFlow f = ou_flow(e, 0.5);
        CHECK(f.time == 0.5);
        CHECK(std::fabs(f.output.mass_trapezoid() - 1.0) < 1e-9);
    }
}

TEST_CASE("w1 contraction") {
    const GridMeasure g = realize(MeasureSpec::gaussian_spec(0.0, 1.0, 2048));
    SUBCASE("translated pairs achieve equality") {
        const GridMeasure shifted = apply_affine(g, {1.0, 0.9});
        for (double T : {0.25, 1.0, 4.0}) {
            const auto [lhs, rhs] = check_w1_contraction(g, shifted, T);
            CHECK(lhs == doctest::Approx(std::exp(-0.5 * T) * 0.9).epsilon(1e-3));
            CHECK(lhs <= rhs * (1.0 + 1e-3));
        }
    }
    SUBCASE("identical inputs stay at zero") {
        const auto [lhs, rhs] = check_w1_contraction(g, g, 1.0);
        CHECK(lhs < 1e-10);
        CHECK(rhs < 1e-10);
    }
    SUBCASE("T = 0 reduces to w1 itself") {
        const GridMeasure e = realize(MeasureSpec::exponential_spec(1.0, 2048));
        const auto [lhs, rhs] = check_w1_contraction(g, e, 0.0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("tv versus w1 contraction bound") {
    const GridMeasure g = realize(MeasureSpec::gaussian_spec(0.0, 1.0, 2048));
    SUBCASE("closed-form check on a shifted pair") {
        const double c = 1.2, T = 1.0;
        const GridMeasure shifted = apply_affine(g, {1.0, c});
        const auto [lhs, rhs] = check_tv_w1_contraction(g, shifted, T);
        // evolved pair: unit gaussians at mean distance c e^{-T/2}
        const double expect_lhs = std::erf(0.5 * c * std::exp(-0.5 * T) / std::sqrt(2.0));
        CHECK(lhs == doctest::Approx(expect_lhs).epsilon(1e-4));
        const double expect_rhs =
            std::exp(-0.5 * T) / std::sqrt(2.0 * 3.141592653589793 * (-std::expm1(-T))) * c;
        CHECK(rhs == doctest::Approx(expect_rhs).epsilon(1e-6));
        CHECK(lhs <= rhs * (1.0 + 1e-3));
    }
    SUBCASE("large-shift stress: lhs saturates but the bound holds") {
        const GridMeasure far = apply_affine(g, {1.0, 10.0});
        const auto [lhs, rhs] = check_tv_w1_contraction(g, far, 1.0);
        CHECK(lhs > 0.95);
        CHECK(lhs <= rhs * (1.0 + 1e-3));
    }
    SUBCASE("T = 0 rejected") {
        CHECK_THROWS_AS(check_tv_w1_contraction(g, g, 0.0), InvalidParameter);
    }
}

TEST_CASE("no uniform tv decay along the flow") {
    SUBCASE("witness at T = 1") {
        const NonContractionWitness w = non_contraction_witness(1.0);
        CHECK(w.tv_value >= 0.9);
        CHECK(w.lambda <= 1024.0);
    }
    SUBCASE("smaller T needs a smaller witness") {
        const NonContractionWitness fast = non_contraction_witness(0.1);
        const NonContractionWitness slow = non_contraction_witness(1.0);
        CHECK(fast.lambda <= slow.lambda);
    }
    SUBCASE("tv grows with the starting scale") {
        const GridMeasure target = realize(MeasureSpec::gaussian_spec(0.0, 1.0, 2048));
        double prev = 0.0;
        for (double lambda : {2.0, 8.0, 32.0}) {
            const GridMeasure start = realize(MeasureSpec::gaussian_spec(0.0, lambda, 2048));
            const double val = tv(ou_evolve(start, 1.0), target);
            CHECK(val >= prev - 1e-6);
            prev = val;
        }
    }
}
