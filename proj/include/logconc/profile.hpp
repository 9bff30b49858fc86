#pragma once

#include <cstddef>
#include <vector>

namespace logconc {

// Sampled monotone curve with piecewise-linear interpolation and a
// generalized inverse. Three kinds are used:
//   isoperimetric:  u in (0, 1/2]  ->  Is(u)
//   concentration:  r >= 0         ->  alpha(r), nonincreasing
//   weak_beta:      s in (0, 1/2)  ->  beta(s), nonincreasing
struct ProfileTable {
    enum class Kind { isoperimetric, concentration, weak_beta };

    Kind kind = Kind::concentration;
    std::vector<double> abscissae;
    std::vector<double> values;

    std::size_t size() const { return abscissae.size(); }

    // piecewise-linear evaluation, clamped at the ends
    double value_at(double x) const;

    // generalized inverse inf{x : value(x) <= y} for nonincreasing tables
    // (right-continuous convention); 0 when y >= value(front), the last
    // abscissa when y is below every sample.
    double inverse(double y) const;
};

}  // namespace logconc
