#include <permfield/random.hpp>
#include <permfield/ratefn.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace permfield;

namespace {

// Central binomial form of the moment: int |1-e(u)|^b du = Gamma(1+b)/Gamma(1+b/2)^2.
double oracle_lambda(double beta) {
    return std::lgamma(1.0 + beta) - 2.0 * std::lgamma(1.0 + beta / 2.0);
}

double oracle_lambda1(double beta) {
    const double h = 1e-4;
    return (oracle_lambda(beta + h) - oracle_lambda(beta - h)) / (2 * h);
}

double oracle_lambda2(double beta) {
    // Long double keeps the rounding of the second difference near 1e-12.
    auto f = [](long double b) { return std::lgamma(1.0L + b) - 2.0L * std::lgamma(1.0L + b / 2.0L); };
    const long double h = 1e-3L;
    const long double b = beta;
    return static_cast<double>((f(b + h) - 2.0L * f(b) + f(b - h)) / (h * h));
}

// P(log|1-e(U)| >= y) by bisection for the crossing point of 2 sin(pi u) = e^y.
double oracle_single_tail(double y) {
    double lo = 0.0;
    double hi = 0.5;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (2.0 * std::sin(std::numbers::pi * mid) < std::exp(y) ? lo : hi) = mid;
    }
    return 1.0 - 2.0 * lo;
}

} // namespace

TEST(Lambda, ClosedFormMatchesOracles) {
    EXPECT_NEAR(lambda(2.0), std::log(2.0), 1e-12);
    EXPECT_NEAR(lambda_quadrature(2.0), std::log(2.0), 1e-10);
    EXPECT_NEAR(lambda(1e-9), 0.0, 1e-9);
    EXPECT_THROW(lambda(0.0), std::domain_error);
    for (double b : {0.3, 1.0, 2.5, 5.0, 11.7456, 20.0, 60.0}) {
        EXPECT_NEAR(lambda(b), oracle_lambda(b), 1e-11 * std::max(1.0, std::fabs(oracle_lambda(b)))) << b;
        EXPECT_NEAR(lambda_quadrature(b), oracle_lambda(b), 1e-9 * std::max(1.0, std::fabs(oracle_lambda(b)))) << b;
    }
}

TEST(Lambda, MeanLogDistanceIsZero) {
    EXPECT_NEAR(mean_log_distance_quadrature(), 0.0, 1e-10);
}

TEST(Lambda, DerivativesMatchFiniteDifferences) {
    for (double b : {0.5, 1.0, 3.0, 11.7456, 20.0, 40.0}) {
        LambdaDerivs d = lambda_derivs(b);
        EXPECT_NEAR(d.first, oracle_lambda1(b), 1e-7) << b;
        EXPECT_NEAR(d.second, oracle_lambda2(b), 1e-5) << b;
    }
    for (double b = 1.0; b <= 20.0; b += 0.25) {
        EXPECT_GT(lambda_derivs(b).second, 0.0) << b;
    }
    // lambda' increases to log 2.
    EXPECT_LT(lambda_derivs(1e6).first, std::log(2.0));
    EXPECT_NEAR(lambda_derivs(1e6).first, std::log(2.0), 1e-5);
}

TEST(Legendre, InvertsDerivative) {
    for (double b : {0.05, 0.5, 2.0, 11.7456, 50.0, 5000.0}) {
        double x = lambda_derivs(b).first;
        LegendrePoint p = legendre(x);
        EXPECT_NEAR(p.beta, b, 1e-6 * b) << b;
        EXPECT_NEAR(p.value, b * x - lambda(b), 1e-9 * std::max(1.0, b)) << b;
    }
}

TEST(Legendre, IsSupremum) {
    for (double x : {0.1, 0.4, 0.65, 0.69}) {
        LegendrePoint p = legendre(x);
        for (double b = 0.0; b <= 100.0; b += 0.5) {
            EXPECT_GE(p.value + 1e-12, b * x - oracle_lambda(b));
        }
    }
    EXPECT_THROW(legendre(std::log(2.0)), std::domain_error);
    EXPECT_THROW(legendre(0.8), std::domain_error);
}

TEST(Constants, CriticalPoint) {
    const RateSolution& s = critical_solution();
    EXPECT_NEAR(s.x_crit, 0.6524, 5e-4);
    EXPECT_NEAR(s.beta_crit, 11.746, 5e-3);
    EXPECT_NEAR(s.x_crit * s.beta_crit - oracle_lambda(s.beta_crit), 1.0, 1e-10);
    EXPECT_NEAR(legendre(s.x_crit).value, 1.0, 1e-10);
    EXPECT_GE(s.beta_crit, 1.0 / std::log(2.0));
    EXPECT_NEAR(s.lambda2_at, oracle_lambda2(s.beta_crit), 1e-6);
}

TEST(BahadurRao, AssembledFromConstants) {
    const RateSolution& s = critical_solution();
    double expected = std::exp(-100.0) / (s.beta_crit * std::sqrt(100.0 * oracle_lambda2(s.beta_crit)));
    EXPECT_NEAR(bahadur_rao_tail(s.x_crit, 100), expected, 1e-6 * expected);
    double prev = std::numeric_limits<double>::infinity();
    for (std::uint64_t q = 1; q <= 64; ++q) {
        double v = bahadur_rao_tail(0.5, q);
        EXPECT_LT(v, prev);
        prev = v;
    }
    EXPECT_THROW(bahadur_rao_tail(0.0, 4), std::domain_error);
    EXPECT_THROW(bahadur_rao_tail(0.7, 4), std::domain_error);
}

TEST(SingleTail, MatchesBisection) {
    for (double y : {-3.0, -0.5, 0.0, 0.2, 0.5, 0.69}) {
        EXPECT_NEAR(single_tail_probability(y), oracle_single_tail(y), 1e-12) << y;
    }
    EXPECT_EQ(single_tail_probability(std::log(2.0) + 1e-9), 0.0);
}

TEST(TiltedSampler, MeanIsLambdaPrime) {
    for (double beta : {1e-3, 0.5, 3.0, critical_solution().beta_crit, 40.0}) {
        TiltedSampler sampler(beta);
        RandomStream s(static_cast<std::uint64_t>(beta * 100) + 1);
        const int n = 200000;
        double sum = 0.0;
        double sum_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            double u = sample_tilted_v(sampler, s);
            ASSERT_GE(u, 0.0);
            ASSERT_LT(u, 1.0);
            double v = std::log(2.0 * std::fabs(std::sin(std::numbers::pi * u)));
            sum += v;
            sum_sq += v * v;
        }
        double mean = sum / n;
        double sd = std::sqrt(sum_sq / n - mean * mean);
        double target = oracle_lambda1(beta);
        EXPECT_NEAR(mean, target, 4.0 * sd / std::sqrt(n)) << beta;
    }
    EXPECT_THROW(TiltedSampler(-1.0), std::domain_error);
    EXPECT_THROW(TiltedSampler(100.0), std::domain_error);
}

TEST(TiltedSampler, ImportanceWeightsAreUnbiased) {
    // Small q, where plain sampling reaches the event often enough.
    const std::uint64_t q = 4;
    const double y = 0.35;
    double beta = legendre(y).beta;
    TiltedSampler sampler(beta);
    RandomStream s(99);
    const int n_tilt = 200000;
    double sw = 0.0;
    double sw2 = 0.0;
    for (int i = 0; i < n_tilt; ++i) {
        double sum = 0.0;
        for (std::uint64_t p = 0; p < q; ++p) {
            sum += sampler.sample_log_distance(s);
        }
        if (sum >= y * q) {
            double w = std::exp(q * lambda(beta) - beta * sum);
            sw += w;
            sw2 += w * w;
        }
    }
    double is = sw / n_tilt;
    double is_se = std::sqrt((sw2 / n_tilt - is * is) / n_tilt);
    const int n_plain = 2000000;
    int hits = 0;
    for (int i = 0; i < n_plain; ++i) {
        double sum = 0.0;
        for (std::uint64_t p = 0; p < q; ++p) {
            sum += std::log(2.0 * std::fabs(std::sin(std::numbers::pi * s.uniform_open())));
        }
        hits += sum >= y * q;
    }
    double plain = static_cast<double>(hits) / n_plain;
    double plain_se = std::sqrt(plain * (1 - plain) / n_plain);
    EXPECT_NEAR(is, plain, 4.0 * std::hypot(is_se, plain_se));
}
