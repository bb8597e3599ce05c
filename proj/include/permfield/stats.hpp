#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace permfield {

struct Summary {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation (n - 1)
    double median = 0.0;
    double q05 = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double q95 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Order-independent summary: values are sorted before any accumulation.
Summary summarize(std::span<const double> values);

/// Linear-interpolation quantile of sorted data, p in [0, 1].
double quantile_sorted(std::span<const double> sorted, double p);

double median(std::vector<double> values);

/// Kolmogorov-Smirnov distance between the empirical law and N(0, 1).
double ks_distance_normal(std::vector<double> values);

struct ChiSquare {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
};

/// Goodness of fit of counts against cell probabilities (summing to 1).
/// Cells with expected count below `min_expected` are pooled into one.
ChiSquare chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                         double min_expected = 5.0);

/// Two-sample homogeneity test on paired histograms; sparse tail cells pooled.
ChiSquare chi_square_homogeneity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                 double min_expected = 5.0);

double normal_cdf(double x);

} // namespace permfield
