#include <permfield/stats.hpp>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace permfield {

namespace {

ChiSquare finish(double statistic, double cells, double constraints) {
    ChiSquare out;
    out.statistic = statistic;
    out.dof = cells - constraints;
    if (out.dof < 1) {
        throw std::invalid_argument("chi-square test needs at least two usable cells");
    }
    boost::math::chi_squared dist(out.dof);
    out.p_value = boost::math::cdf(boost::math::complement(dist, statistic));
    return out;
}

} // namespace

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of empty sample");
    }
    double pos = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::span<const double> values) {
    Summary s;
    std::vector<double> sorted(values.begin(), values.end());
    std::erase_if(sorted, [](double v) { return !std::isfinite(v); });
    std::sort(sorted.begin(), sorted.end());
    s.count = sorted.size();
    if (sorted.empty()) {
        return s;
    }
    double sum = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    s.mean = sum / static_cast<double>(s.count);
    double ss = 0.0;
    for (double v : sorted) {
        ss += (v - s.mean) * (v - s.mean);
    }
    s.stddev = s.count > 1 ? std::sqrt(ss / static_cast<double>(s.count - 1)) : 0.0;
    s.median = quantile_sorted(sorted, 0.5);
    s.q05 = quantile_sorted(sorted, 0.05);
    s.q25 = quantile_sorted(sorted, 0.25);
    s.q75 = quantile_sorted(sorted, 0.75);
    s.q95 = quantile_sorted(sorted, 0.95);
    s.min = sorted.front();
    s.max = sorted.back();
    return s;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, 0.5);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double ks_distance_normal(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("KS distance of empty sample");
    }
    std::sort(values.begin(), values.end());
    auto n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double f = normal_cdf(values[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

ChiSquare chi_square_gof(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                         double min_expected) {
    if (observed.size() != probabilities.size()) {
        throw std::invalid_argument("chi_square_gof: size mismatch");
    }
    double total = 0.0;
    for (auto o : observed) {
        total += static_cast<double>(o);
    }
    double statistic = 0.0;
    double cells = 0.0;
    double pooled_obs = 0.0;
    double pooled_exp = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double expected = total * probabilities[i];
        if (expected < min_expected) {
            pooled_obs += static_cast<double>(observed[i]);
            pooled_exp += expected;
            continue;
        }
        double diff = static_cast<double>(observed[i]) - expected;
        statistic += diff * diff / expected;
        cells += 1;
    }
    if (pooled_exp > 0.0) {
        double diff = pooled_obs - pooled_exp;
        statistic += diff * diff / pooled_exp;
        cells += 1;
    }
    return finish(statistic, cells, 1.0);
}

ChiSquare chi_square_homogeneity(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                                 double min_expected) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("chi_square_homogeneity: size mismatch");
    }
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        na += static_cast<double>(a[i]);
        nb += static_cast<double>(b[i]);
    }
    double total = na + nb;
    double statistic = 0.0;
    double cells = 0.0;
    double pool_a = 0.0;
    double pool_b = 0.0;
    auto add_cell = [&](double oa, double ob) {
        double row = oa + ob;
        double ea = row * na / total;
        double eb = row * nb / total;
        statistic += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
        cells += 1;
    };
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto oa = static_cast<double>(a[i]);
        auto ob = static_cast<double>(b[i]);
        double row = oa + ob;
        if (std::min(row * na / total, row * nb / total) < min_expected) {
            pool_a += oa;
            pool_b += ob;
            continue;
        }
        add_cell(oa, ob);
    }
    if (pool_a + pool_b > 0.0) {
        add_cell(pool_a, pool_b);
    }
    return finish(statistic, cells, 1.0);
}

} // namespace permfield
