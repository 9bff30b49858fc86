#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace logconc {

// Solvers behind the LP-based metrics. Everything operates on finite atom
// lists; the metrics module owns the atomization of grid measures.

// Exact solution of
//     max sum_i d_i f_i
//     s.t. |f_i| <= box,  |f_{i+1} - f_i| <= lip * (x_{i+1} - x_i)
// by dynamic programming over concave piecewise-linear value functions.
// Throws LPFailure when the reconstructed maximizer fails to reproduce the
// optimum within tolerance.
double lipschitz_box_lp(const std::vector<double>& x, const std::vector<double>& d, double lip,
                        double box);

// Maximum mass a coupling of atoms a and b (common positions x) can place on
// the band { |x_i - x_j| <= eps }. Greedy two-pointer sweep; exact for the
// monotone interval structure of a common sorted grid.
double max_onband_flow(const std::vector<double>& x, const std::vector<double>& a,
                       const std::vector<double>& b, double eps);

struct TransportPlan {
    std::vector<std::size_t> from, to;
    std::vector<double> mass;
    double cost = 0.0;
};

// Dense transportation simplex for min-cost transport between atom lists
// (supplies a at xs, demands b at ys, nonnegative cost function).
TransportPlan min_cost_transport(const std::vector<double>& xs, const std::vector<double>& a,
                                 const std::vector<double>& ys, const std::vector<double>& b,
                                 const std::function<double(double, double)>& cost);

}  // namespace logconc
