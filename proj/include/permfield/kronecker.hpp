#pragma once

#include <permfield/random.hpp>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace permfield {

/// phi_z(u) = |1 - e(u)|^z = (2 |sin(pi u)|)^z.
double phi(double beta, double u);
std::complex<double> phi(std::complex<double> z, double u);

struct FourierRow {
    std::complex<double> z;
    std::int64_t xi;
    std::complex<double> value;
    double quad_error;
};

/// Coefficient int_0^1 phi_z(t) e(-xi t) dt by adaptive quadrature.
/// Requires Re z >= 0.5. Throws AccuracyError when the error estimate
/// exceeds max(1e-8 |value|, 1e-10).
FourierRow phi_hat(std::complex<double> z, std::int64_t xi);

/// Power-law fit of |phi_hat_z(xi)| over [xi_min, xi_max].
struct DecayEnvelope {
    double slope;       // -inf when the coefficients vanish identically
    double k_plus;      // max |phi_hat_z(xi)| xi^{3/2}
    bool vanishing;
    bool within_bound;  // slope <= kDecaySlopeBound
};

inline constexpr double kDecaySlopeBound = -1.4;

DecayEnvelope decay_envelope(std::complex<double> z, std::int64_t xi_max, std::int64_t xi_min = 2);

/// Real-z partial Fourier sum phi_hat(0) + 2 sum_{xi >= 1} Re(phi_hat(xi)) cos(2 pi xi u).
/// `rows` must hold xi = 0, 1, 2, ... in order.
double fourier_partial_sum(std::span<const FourierRow> rows, double u);

/// (1/rho_k) sum_{l in I_k} phi(beta, l t) / l: the Laplace transform of a
/// single block term log|1 - e(l t)| with l drawn from P(l) ~ 1/l on I_k.
double log_average(double beta, double t, long k, double rho);

/// The block law P(l) ~ 1/l on I_k tilted by phi(beta, l t); sampled by
/// table inversion. Only for blocks small enough to tabulate.
class TiltedBlock {
public:
    TiltedBlock(double beta, double t, long k, double rho);

    /// Equals log_average(beta, t, k, rho).
    double laplace() const { return laplace_; }
    std::uint64_t lo() const { return lo_; }
    std::uint64_t size() const { return cdf_.size(); }

    std::uint64_t sample(RandomStream& stream) const;

private:
    std::uint64_t lo_;
    double laplace_;
    std::vector<double> cdf_;
};

} // namespace permfield
