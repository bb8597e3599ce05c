#include <permfield/cycles.hpp>
#include <permfield/errors.hpp>
#include <permfield/kronecker.hpp>
#include <permfield/random.hpp>
#include <permfield/stats.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace permfield;

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;

// (-1)^xi Gamma(z+1) / (Gamma(1+z/2+xi) Gamma(1+z/2-xi)) for real z, with the
// reflection formula once the second argument is negative.
double closed_form(double z, long xi) {
    xi = std::labs(xi);
    double a = 1.0 + z / 2.0 + static_cast<double>(xi);
    double b = 1.0 + z / 2.0 - static_cast<double>(xi);
    double sign = xi % 2 == 0 ? 1.0 : -1.0;
    if (b > 0.0) {
        return sign * std::exp(std::lgamma(z + 1.0) - std::lgamma(a) - std::lgamma(b));
    }
    // 1/Gamma(b) = Gamma(1-b) sin(pi b) / pi.
    double s = std::sin(std::numbers::pi * b);
    return sign * s / std::numbers::pi * std::exp(std::lgamma(z + 1.0) - std::lgamma(a) + std::lgamma(1.0 - b));
}

// Graded composite Simpson for int_0^1 phi_z(t) e(-xi t) dt; uses the
// symmetry about 1/2 and geometric panels towards t = 0.
std::complex<long double> graded_simpson(std::complex<long double> z, long xi) {
    auto f = [&](long double t) -> std::complex<long double> {
        long double s = 2.0L * std::sin(kPi * t);
        if (s <= 0.0L) {
            return 0.0L;
        }
        return std::exp(z * std::log(s)) * std::cos(2.0L * kPi * static_cast<long double>(xi) * t);
    };
    std::complex<long double> total = 0.0L;
    long double hi = 0.5L;
    for (int k = 0; k < 60; ++k) {
        long double lo = hi / 2.0L;
        const int n = 4000;
        long double h = (hi - lo) / n;
        std::complex<long double> s = f(lo) + f(hi);
        for (int i = 1; i < n; ++i) {
            s += (i % 2 ? 4.0L : 2.0L) * f(lo + i * h);
        }
        total += s * h / 3.0L;
        hi = lo;
    }
    return 2.0L * total;
}

} // namespace

TEST(PhiHat, TrigIdentityForZTwo) {
    EXPECT_NEAR(phi_hat(2.0, 0).value.real(), 2.0, 1e-12);
    EXPECT_NEAR(phi_hat(2.0, 1).value.real(), -1.0, 1e-12);
    EXPECT_NEAR(phi_hat(2.0, -1).value.real(), -1.0, 1e-12);
    for (long xi = 2; xi <= 40; ++xi) {
        EXPECT_NEAR(std::abs(phi_hat(2.0, xi).value), 0.0, 1e-12) << xi;
    }
}

TEST(PhiHat, MatchesGammaClosedForm) {
    for (double z : {0.5, 1.0, 2.5, 5.0, 11.7456}) {
        for (long xi : {0L, 1L, 2L, 3L, 7L, 16L, 64L, 200L}) {
            FourierRow row = phi_hat(z, xi);
            double oracle = closed_form(z, xi);
            // Cancellation floor: double rounding times the integrand's L1 mass.
            double mass = std::max(1.0, closed_form(z, 0));
            EXPECT_NEAR(row.value.real(), oracle, 1e-12 * mass + 1e-9 * std::fabs(oracle)) << z << " " << xi;
            EXPECT_NEAR(row.value.imag(), 0.0, 1e-15);
        }
    }
    EXPECT_NEAR(phi_hat(1.0, 0).value.real(), 4.0 / std::numbers::pi, 1e-13);
}

TEST(PhiHat, ComplexExponentMatchesGradedSimpson) {
    for (std::complex<double> z : {std::complex<double>(1.0, 5.0), std::complex<double>(0.75, -2.0)}) {
        for (long xi : {0L, 1L, 3L, 8L}) {
            auto oracle = graded_simpson(std::complex<long double>(z.real(), z.imag()), xi);
            auto v = phi_hat(z, xi).value;
            EXPECT_NEAR(v.real(), static_cast<double>(oracle.real()), 1e-8) << z << " " << xi;
            EXPECT_NEAR(v.imag(), static_cast<double>(oracle.imag()), 1e-8) << z << " " << xi;
        }
    }
}

TEST(PhiHat, Domain) {
    EXPECT_THROW(phi_hat(0.4, 1), std::domain_error);
    EXPECT_THROW(phi_hat(std::complex<double>(0.2, 3.0), 1), std::domain_error);
}

TEST(Decay, SlopesAndVanishing) {
    for (std::complex<double> z : {std::complex<double>(1.0, 0.0), std::complex<double>(1.0, 5.0),
                                   std::complex<double>(2.5, 0.0)}) {
        DecayEnvelope env = decay_envelope(z, 64, 4);
        EXPECT_FALSE(env.vanishing);
        EXPECT_LE(env.slope, kDecaySlopeBound) << z;
        EXPECT_TRUE(env.within_bound);
    }
    DecayEnvelope two = decay_envelope(2.0, 64, 2);
    EXPECT_TRUE(two.vanishing);
    // Real z: |phi_hat| ~ C xi^{-1-z}, so the slope approaches -1-z.
    EXPECT_NEAR(decay_envelope(1.0, 256, 32).slope, -2.0, 0.05);
    EXPECT_THROW(decay_envelope(1.0, 4, 4), std::invalid_argument);
}

TEST(PartialSum, RebuildsPhi) {
    std::vector<FourierRow> rows;
    for (long xi = 0; xi <= 2; ++xi) {
        rows.push_back(phi_hat(2.0, xi));
    }
    for (double u : {0.0, 0.1, 0.37, 0.5}) {
        EXPECT_NEAR(fourier_partial_sum(rows, u), phi(2.0, u), 1e-12);
    }
    rows.clear();
    for (long xi = 0; xi <= 400; ++xi) {
        rows.push_back(phi_hat(2.5, xi));
    }
    for (double u : {0.1, 0.37, 0.5}) {
        EXPECT_NEAR(fourier_partial_sum(rows, u), phi(2.5, u), 1e-5);
    }
    std::vector<FourierRow> gap = {rows[0], rows[2]};
    EXPECT_THROW(fourier_partial_sum(gap, 0.1), std::invalid_argument);
}

TEST(TiltedBlock, LaplaceAndLaw) {
    const double beta = 11.7456;
    const double t = (std::sqrt(5.0) - 1.0) / 2.0;
    const long k = 110;
    const double rho = 0.05;
    Block b = block_range(k, rho);
    std::vector<double> weights;
    long double weighted = 0.0L;
    long double mass = 0.0L;
    for (auto l = b.lo; l < b.hi; ++l) {
        long double u = std::fmod(static_cast<long double>(l) * t, 1.0L);
        long double w = std::pow(std::abs(1.0L - std::polar(1.0L, 2.0L * kPi * u)), static_cast<long double>(beta)) /
                        static_cast<long double>(l);
        weights.push_back(static_cast<double>(w));
        weighted += w;
        mass += 1.0L / static_cast<long double>(l);
    }
    double laplace = static_cast<double>(weighted / mass);
    TiltedBlock block(beta, t, k, rho);
    EXPECT_NEAR(block.laplace(), laplace, 1e-9 * laplace);
    EXPECT_NEAR(log_average(beta, t, k, rho), laplace, 1e-9 * laplace);
    EXPECT_EQ(block.lo(), b.lo);
    EXPECT_EQ(block.size(), b.size());

    std::vector<double> probs;
    for (double w : weights) {
        probs.push_back(w / static_cast<double>(weighted));
    }
    std::vector<std::uint64_t> observed(probs.size(), 0);
    RandomStream s(3);
    for (int i = 0; i < 100000; ++i) {
        auto l = block.sample(s);
        ASSERT_GE(l, b.lo);
        ASSERT_LT(l, b.hi);
        ++observed[l - b.lo];
    }
    EXPECT_GT(chi_square_gof(observed, probs).p_value, 1e-3);
    EXPECT_THROW(TiltedBlock(0.0, t, k, rho), std::domain_error);
    EXPECT_THROW(TiltedBlock(beta, t, 1, rho), std::invalid_argument);
}
