#include "logconc/semigroup.hpp"

#include <cmath>

#include "logconc/errors.hpp"
#include "logconc/metrics.hpp"

namespace logconc {

GridMeasure ou_evolve(const GridMeasure& m, double time) {
    if (!(time >= 0.0)) throw InvalidParameter("ou_evolve: time must be >= 0");
    if (time == 0.0) return m;
    const GridMeasure scaled = apply_affine(m, {std::exp(-0.5 * time), 0.0});
    return convolve_gaussian(scaled, std::sqrt(-std::expm1(-time)));
}

OUFlow ou_flow(const GridMeasure& m, double time) {
    OUFlow f;
    f.time = time;
    f.input = m;
    f.output = ou_evolve(m, time);
    return f;
}

std::pair<double, double> check_w1_contraction(const GridMeasure& a, const GridMeasure& b,
                                               double time) {
    const double lhs = w1(ou_evolve(a, time), ou_evolve(b, time));
    const double rhs = std::exp(-0.5 * time) * w1(a, b);
    return {lhs, rhs};
}

std::pair<double, double> check_tv_w1_contraction(const GridMeasure& a, const GridMeasure& b,
                                                  double time) {
    if (!(time > 0.0))
        throw InvalidParameter("check_tv_w1_contraction: the bound degenerates at T = 0");
    const double lhs = tv(ou_evolve(a, time), ou_evolve(b, time));
    const double factor =
        std::exp(-0.5 * time) / std::sqrt(2.0 * 3.141592653589793 * (-std::expm1(-time)));
    return {lhs, factor * w1(a, b)};
}

NonContractionWitness non_contraction_witness(double time) {
    if (!(time > 0.0)) throw InvalidParameter("non_contraction_witness: time must be > 0");
    const GridMeasure target = realize(MeasureSpec::gaussian_spec(0.0, 1.0));
    for (int k = 1; k <= 10; ++k) {
        const double lambda = std::pow(2.0, k);
        const GridMeasure start = realize(MeasureSpec::gaussian_spec(0.0, lambda));
        const double val = tv(ou_evolve(start, time), target);
        if (val >= 0.9) return {lambda, val};
    }
    throw WitnessNotFound(
        "non_contraction_witness: no lambda <= 2^10 reached tv 0.9; enlarge the scan");
}

}  // namespace logconc
