#pragma once

#include <utility>

#include "logconc/grid_measure.hpp"

namespace logconc {

// Ornstein-Uhlenbeck flow of a grid measure via the Mehler form: scale by
// e^{-T/2}, then convolve with a gaussian of width sqrt(1 - e^{-T}). The
// standard gaussian is the fixed point.
struct OUFlow {
    double time = 0.0;
    GridMeasure input;
    GridMeasure output;
};

GridMeasure ou_evolve(const GridMeasure& m, double time);
OUFlow ou_flow(const GridMeasure& m, double time);

// lhs = W1(G_T a, G_T b), rhs = e^{-T/2} W1(a, b); the contraction statement
// is lhs <= rhs.
std::pair<double, double> check_w1_contraction(const GridMeasure& a, const GridMeasure& b,
                                               double time);

// lhs = d_TV(G_T a, G_T b), rhs = e^{-T/2} / sqrt(2 pi (1 - e^{-T})) W1(a, b).
std::pair<double, double> check_tv_w1_contraction(const GridMeasure& a, const GridMeasure& b,
                                                  double time);

// Scans nu_lambda = gaussian(0, lambda) over lambda in {2, 4, ..., 2^10} and
// returns the first lambda whose evolved law stays at TV distance >= 0.9 from
// the standard gaussian. Demonstrates that the flow admits no uniform TV
// decay. Throws WitnessNotFound when the scan range is exhausted.
struct NonContractionWitness {
    double lambda = 0.0;
    double tv_value = 0.0;
};
NonContractionWitness non_contraction_witness(double time);

}  // namespace logconc
