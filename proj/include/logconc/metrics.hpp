#pragma once

#include <string>
#include <utility>
#include <vector>

#include "logconc/grid_measure.hpp"

namespace logconc {

enum class Metric { TV, W1, BL, Dudley, LevyProkhorov, WLP };

std::string metric_name(Metric m);

// Pairwise distances across a measure list.
struct DistanceReport {
    std::vector<std::string> measures;
    Metric metric = Metric::TV;
    std::vector<std::vector<double>> matrix;
    double tolerance = 0.0;  // worst per-entry solver tolerance
};

// Discrete coupling between two atomized measures.
struct CouplingPlan {
    std::vector<double> x, y, mass;
    double cost_value = 0.0;

    double total_mass() const;
    // largest marginal deviation against the given atom lists
    double marginal_error(const std::vector<double>& xs, const std::vector<double>& a,
                          const std::vector<double>& ys, const std::vector<double>& b) const;
};

// Common-grid atomization used by the LP-based metrics (trapezoid cell masses
// at shared nodes over the union domain).
struct AtomizedPair {
    std::vector<double> x;
    std::vector<double> a, b;
    double spacing = 0.0;
};
AtomizedPair atomize_pair(const GridMeasure& a, const GridMeasure& b, std::size_t max_atoms);

// total variation: half the L1 distance of densities
double tv(const GridMeasure& a, const GridMeasure& b);

// 1-Wasserstein via the CDF-difference integral
double w1(const GridMeasure& a, const GridMeasure& b);

enum class BLKind { BL, Dudley };

// bounded-Lipschitz (|f| <= 1, Lip <= 1) and Dudley (||f||_inf + Lip(f) <= 1)
double bl_dud(const GridMeasure& a, const GridMeasure& b, BLKind kind);

// Levy-Prokhorov by bisection over coupling feasibility (depth 14)
double levy_prokhorov(const GridMeasure& a, const GridMeasure& b);

// min-cost transport with cost |x-y| / (1 + |x-y|)
struct WlpResult {
    double value = 0.0;
    double tolerance = 0.0;
    CouplingPlan plan;
};
WlpResult w_lp_plan(const GridMeasure& a, const GridMeasure& b);
double w_lp(const GridMeasure& a, const GridMeasure& b);

// Ky-Fan functionals of a coupling: K = inf{eps : P(|X-Y| > eps) <= eps} and
// K* = E[ |X-Y| / (1+|X-Y|) ].
std::pair<double, double> kyfan(const CouplingPlan& plan);

double eval_metric(Metric metric, const GridMeasure& a, const GridMeasure& b);

DistanceReport distance_matrix(const std::vector<GridMeasure>& measures,
                               const std::vector<std::string>& names, Metric metric);

}  // namespace logconc
