#include <permfield/cycles.hpp>
#include <permfield/errors.hpp>
#include <permfield/field.hpp>
#include <permfield/kronecker.hpp>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace permfield {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kVanishingLevel = 1e-12;
// Summed tanh-sinh estimates over the half-period pieces; actual errors sit
// near 1e-15 but the estimates run about three orders higher.
constexpr double kAbsoluteErrorFloor = 1e-10;

struct Integral {
    double value = 0.0;
    double error = 0.0;
};

// Tanh-sinh on every piece: it absorbs the branch point at t = 0 and, unlike
// the Kronrod estimate, its error estimate stays realistic on smooth pieces.
template <typename F>
Integral integrate_piece(boost::math::quadrature::tanh_sinh<double>& integrator, F f, double a, double b) {
    Integral out;
    out.value = integrator.integrate(f, a, b, 1e-14, &out.error);
    return out;
}

} // namespace

double phi(double beta, double u) {
    return std::pow(2.0 * std::abs(std::sin(kPi * u)), beta);
}

std::complex<double> phi(std::complex<double> z, double u) {
    double s = 2.0 * std::abs(std::sin(kPi * u));
    if (s == 0.0) {
        return 0.0;
    }
    return std::exp(z * std::log(s));
}

FourierRow phi_hat(std::complex<double> z, std::int64_t xi) {
    if (!(z.real() >= 0.5)) {
        throw std::domain_error("phi_hat: requires Re z >= 0.5");
    }
    // phi_z is symmetric about 1/2, so the coefficient is
    // 2 int_0^{1/2} phi_z(t) cos(2 pi xi t) dt, split at the zeros of the cosine.
    const std::uint64_t freq = static_cast<std::uint64_t>(xi < 0 ? -xi : xi);
    const std::uint64_t pieces = std::max<std::uint64_t>(freq, 1);
    const double width = 0.5 / static_cast<double>(pieces);
    const double beta = z.real();
    const double tau = z.imag();
    const double omega = 2.0 * kPi * static_cast<double>(freq);

    auto real_part = [&](double t) {
        double s = 2.0 * std::sin(kPi * t);
        if (s <= 0.0) {
            return 0.0;
        }
        double l = std::log(s);
        return std::exp(beta * l) * std::cos(tau * l) * std::cos(omega * t);
    };
    auto imag_part = [&](double t) {
        double s = 2.0 * std::sin(kPi * t);
        if (s <= 0.0) {
            return 0.0;
        }
        double l = std::log(s);
        return std::exp(beta * l) * std::sin(tau * l) * std::cos(omega * t);
    };

    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    double re = 0.0;
    double im = 0.0;
    double err = 0.0;
    for (std::uint64_t p = 0; p < pieces; ++p) {
        double a = static_cast<double>(p) * width;
        double b = p + 1 == pieces ? 0.5 : static_cast<double>(p + 1) * width;
        Integral r = integrate_piece(integrator, real_part, a, b);
        re += r.value;
        err += std::abs(r.error);
        if (tau != 0.0) {
            Integral i = integrate_piece(integrator, imag_part, a, b);
            im += i.value;
            err += std::abs(i.error);
        }
    }
    FourierRow row{z, xi, std::complex<double>(2.0 * re, 2.0 * im), 2.0 * err};
    // Absolute floor scales with the L1 mass of the integrand.
    double mass = std::exp(std::lgamma(1.0 + beta) - 2.0 * std::lgamma(1.0 + beta / 2.0));
    double allowed = std::max(1e-8 * std::abs(row.value), kAbsoluteErrorFloor * std::max(1.0, mass));
    if (!(row.quad_error <= allowed)) {
        throw AccuracyError(row.quad_error, "phi_hat: quadrature error " + std::to_string(row.quad_error) +
                                                " above target at xi=" + std::to_string(xi));
    }
    return row;
}

DecayEnvelope decay_envelope(std::complex<double> z, std::int64_t xi_max, std::int64_t xi_min) {
    if (!(z.real() >= 1.0)) {
        throw std::domain_error("decay_envelope: requires Re z >= 1");
    }
    if (xi_min < 1 || xi_max <= xi_min) {
        throw std::invalid_argument("decay_envelope: need 1 <= xi_min < xi_max");
    }
    std::vector<double> log_xi;
    std::vector<double> log_abs;
    double k_plus = 0.0;
    double largest = 0.0;
    for (std::int64_t xi = xi_min; xi <= xi_max; ++xi) {
        double magnitude = std::abs(phi_hat(z, xi).value);
        auto x = static_cast<double>(xi);
        k_plus = std::max(k_plus, magnitude * std::pow(x, 1.5));
        largest = std::max(largest, magnitude);
        if (magnitude > kVanishingLevel) {
            log_xi.push_back(std::log(x));
            log_abs.push_back(std::log(magnitude));
        }
    }
    if (largest <= kVanishingLevel || log_xi.size() < 2) {
        return DecayEnvelope{-std::numeric_limits<double>::infinity(), k_plus, true, true};
    }
    auto count = static_cast<double>(log_xi.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < log_xi.size(); ++i) {
        mx += log_xi[i];
        my += log_abs[i];
    }
    mx /= count;
    my /= count;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < log_xi.size(); ++i) {
        sxy += (log_xi[i] - mx) * (log_abs[i] - my);
        sxx += (log_xi[i] - mx) * (log_xi[i] - mx);
    }
    double slope = sxy / sxx;
    return DecayEnvelope{slope, k_plus, false, slope <= kDecaySlopeBound};
}

double fourier_partial_sum(std::span<const FourierRow> rows, double u) {
    double sum = 0.0;
    for (std::size_t i = rows.size(); i-- > 0;) {
        if (rows[i].xi != static_cast<std::int64_t>(i)) {
            throw std::invalid_argument("fourier_partial_sum: rows must be xi = 0, 1, 2, ...");
        }
        double c = rows[i].value.real();
        sum += i == 0 ? c : 2.0 * c * std::cos(2.0 * kPi * static_cast<double>(i) * u);
    }
    return sum;
}

double log_average(double beta, double t, long k, double rho) {
    if (!(beta > 0.0)) {
        throw std::domain_error("log_average: beta must be > 0");
    }
    Block block = block_range(k, rho);
    if (block.empty()) {
        throw std::invalid_argument("log_average: block I_" + std::to_string(k) + " has no integers");
    }
    double weighted = 0.0;
    double mass = 0.0;
    for (std::uint64_t l = block.lo; l < block.hi; ++l) {
        double inv = 1.0 / static_cast<double>(l);
        weighted += phi(beta, reduce_multiple(l, t)) * inv;
        mass += inv;
    }
    return weighted / mass;
}

TiltedBlock::TiltedBlock(double beta, double t, long k, double rho) {
    if (!(beta > 0.0)) {
        throw std::domain_error("TiltedBlock: beta must be > 0");
    }
    Block block = block_range(k, rho);
    if (block.empty()) {
        throw std::invalid_argument("TiltedBlock: block I_" + std::to_string(k) + " has no integers");
    }
    lo_ = block.lo;
    cdf_.reserve(block.size());
    double weighted = 0.0;
    double mass = 0.0;
    for (std::uint64_t l = block.lo; l < block.hi; ++l) {
        double inv = 1.0 / static_cast<double>(l);
        weighted += phi(beta, reduce_multiple(l, t)) * inv;
        mass += inv;
        cdf_.push_back(weighted);
    }
    if (!(weighted > 0.0)) {
        throw std::domain_error("TiltedBlock: tilted block has zero mass");
    }
    for (double& c : cdf_) {
        c /= weighted;
    }
    cdf_.back() = 1.0;
    laplace_ = weighted / mass;
}

std::uint64_t TiltedBlock::sample(RandomStream& stream) const {
    double u = stream.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    return lo_ + static_cast<std::uint64_t>(it - cdf_.begin());
}

} // namespace permfield
