#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "logconc/grid_measure.hpp"
#include "logconc/profile.hpp"

namespace logconc {

// Ground-truth numerical values for one grid measure: spectral gap, Cheeger
// constant, isoperimetric / concentration / weak-Poincare profiles, moments
// and density-ratio functionals. Everything here is an oracle: transform
// bounds are judged against these numbers.

struct SpectralResult {
    double c_p = 0.0;                 // Poincare constant (squared length units)
    double eigenvalue = 0.0;          // 1/c_p
    std::size_t grid_fine = 0, grid_coarse = 0;
    double richardson_estimate = 0.0;
    double residual = 0.0;            // relative defect of the eigenvector
};

struct MomentReport {
    double mean = 0.0;
    double variance = 0.0;
    double median = 0.0;
    double first_abs_moment_about_median = 0.0;
    std::optional<double> m_p = std::nullopt;              // against the reference
    std::optional<double> relative_entropy = std::nullopt;  // D(nu || mu)
};

// Poincare constant via the weighted Neumann Sturm-Liouville eigenproblem
// -(w f')' = lambda w f on the grid; Richardson extrapolation over N and N/2.
// Throws NonConverged when the two-grid estimates differ by more than 5%.
SpectralResult spectral_poincare(const GridMeasure& m);

// Smallest nonzero generalized eigenvalue on one grid (no extrapolation).
// Exposed for refinement studies and tests.
double spectral_gap_single_grid(const GridMeasure& m, double* residual = nullptr);

// Is(u) over half-line candidate sets, sampled at n_points values of u in
// (0, 1/2]. Requires the log-concavity flag.
ProfileTable isoperimetric_profile(const GridMeasure& m, std::size_t n_points);

// C'_C = sup u / Is(u), refined by golden-section search near the argmax.
double cheeger_constant(const GridMeasure& m);

// alpha(r) over half-line sets of mass >= 1/2 at the given radii.
ProfileTable concentration_profile(const GridMeasure& m, const std::vector<double>& radii);

enum class Centering { median, mean };

// Weak (1, infinity) rate from a concentration profile:
//   median:  beta(s) = alpha^{-1}(s/2)
//   mean:    beta(s) = 2 alpha^{-1}(s/4)
// returned on a log-spaced s-grid in (0, 1/2).
ProfileTable weak_beta_from_profile(const ProfileTable& concentration, Centering centering);

// Trapezoid moments; density-ratio functionals when a reference is given.
MomentReport moments(const GridMeasure& m, const GridMeasure* reference = nullptr,
                     double p = 2.0);

// Upper bound ((4-eps)/eps) exp(-(2-eps) a / sqrt(c_p)) on the upper-tail mass
// beyond a for any measure with Poincare constant c_p.
double bobkov_ledoux_tail(double c_p, double a, double epsilon);

// Default radii grid for concentration profiles: dense near zero, reaching
// the span of the support.
std::vector<double> default_radii(const GridMeasure& m, std::size_t n_points = 160);

// Exhaustive profile search over unions of at most two grid-node intervals,
// used as the cross-check oracle on small grids. Returns, per mass bin, the
// minimal boundary measure (isoperimetric) or, for one enlargement radius,
// the maximal escaping mass (concentration).
struct BruteForceProfiles {
    std::vector<double> iso_u, iso_value;       // binned min boundary measure
};
BruteForceProfiles brute_force_isoperimetric(const GridMeasure& m, std::size_t mass_bins);
double brute_force_concentration(const GridMeasure& m, double radius);

}  // namespace logconc
