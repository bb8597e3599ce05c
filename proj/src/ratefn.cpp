#include <permfield/ratefn.hpp>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace permfield {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLog2 = std::numbers::ln2;

void require_positive(double beta, const char* where) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::domain_error(std::string(where) + ": beta must be finite and > 0");
    }
}

double lambda_prime(double beta) {
    using boost::math::digamma;
    return kLog2 + 0.5 * (digamma(0.5 * (beta + 1.0)) - digamma(0.5 * beta + 1.0));
}

// beta_*(x): solves lambda'(beta) = x, x in (0, log 2).
double solve_beta(double x) {
    double lo = 1e-6;
    double hi = 200.0;
    while (lambda_prime(lo) > x) {
        lo *= 0.5;
        if (lo < 1e-300) {
            return lo;
        }
    }
    while (lambda_prime(hi) < x) {
        hi *= 2.0;
        if (hi > 1e15) {
            throw std::domain_error("legendre: x too close to log 2 to resolve beta_*");
        }
    }
    double beta = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        LambdaDerivs d = lambda_derivs(beta);
        double f = d.first - x;
        if (f > 0) {
            hi = beta;
        } else {
            lo = beta;
        }
        double next = beta - f / d.second;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - beta) <= 1e-12 * std::max(1.0, beta)) {
            return next;
        }
        beta = next;
    }
    return beta;
}

} // namespace

double lambda(double beta) {
    require_positive(beta, "lambda");
    return beta * kLog2 + std::lgamma(0.5 * (beta + 1.0)) - std::lgamma(0.5 * beta + 1.0) - 0.5 * std::log(kPi);
}

LambdaDerivs lambda_derivs(double beta) {
    require_positive(beta, "lambda_derivs");
    using boost::math::trigamma;
    double second = 0.25 * (trigamma(0.5 * (beta + 1.0)) - trigamma(0.5 * beta + 1.0));
    return LambdaDerivs{lambda_prime(beta), second};
}

double lambda_quadrature(double beta) {
    require_positive(beta, "lambda_quadrature");
    boost::math::quadrature::tanh_sinh<double> integrator;
    // Symmetric about 1/2; the endpoint u = 0 carries the zero of sin.
    auto f = [beta](double u) { return std::pow(2.0 * std::sin(kPi * u), beta); };
    double half = integrator.integrate(f, 0.0, 0.5, 1e-15);
    return std::log(2.0 * half);
}

double mean_log_distance_quadrature() {
    boost::math::quadrature::tanh_sinh<double> integrator;
    auto f = [](double u) { return std::log(2.0 * std::sin(kPi * u)); };
    return 2.0 * integrator.integrate(f, 0.0, 0.5, 1e-15);
}

LegendrePoint legendre(double x) {
    if (!(x > 0.0 && x < kLog2)) {
        throw std::domain_error("legendre: x must lie in (0, log 2)");
    }
    double beta = solve_beta(x);
    return LegendrePoint{x * beta - lambda(beta), beta};
}

RateSolution solve_xcrit() {
    double lo = 1e-3;
    double hi = kLog2 - 1e-6;
    double x = 0.65;
    LegendrePoint at = legendre(x);
    for (int iter = 0; iter < 200; ++iter) {
        double f = at.value - 1.0;
        if (f > 0) {
            hi = x;
        } else {
            lo = x;
        }
        double next = x - f / at.beta;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        bool done = std::abs(next - x) <= 1e-15;
        x = next;
        at = legendre(x);
        if (done) {
            break;
        }
    }
    LambdaDerivs d = lambda_derivs(at.beta);
    return RateSolution{x, at.beta, lambda(at.beta), d.second, std::abs(at.value - 1.0)};
}

const RateSolution& critical_solution() {
    static const RateSolution solution = solve_xcrit();
    return solution;
}

double bahadur_rao_tail(double y, std::uint64_t q) {
    if (q == 0) {
        throw std::domain_error("bahadur_rao_tail: q must be >= 1");
    }
    LegendrePoint lp = legendre(y);
    auto qd = static_cast<double>(q);
    double second = lambda_derivs(lp.beta).second;
    return std::exp(-lp.value * qd) / (lp.beta * std::sqrt(second * qd));
}

double single_tail_probability(double y) {
    // {u : 2 sin(pi u) >= e^y} is an interval centred at 1/2.
    if (y >= kLog2) {
        return 0.0;
    }
    double half = std::exp(y) / 2.0;
    return 1.0 - 2.0 * std::asin(half) / kPi;
}

TiltedSampler::TiltedSampler(double beta) : beta_(beta) {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw std::domain_error("TiltedSampler: beta must be > 0");
    }
    if (beta > kMaxBeta) {
        throw std::domain_error("TiltedSampler: beta > 64 is unsupported");
    }
    normalizer_ = std::exp(lambda(beta));
    gaussian_envelope_ = beta > 1.0;
    sigma_ = 1.0 / (kPi * std::sqrt(beta));
    // Target mass of cos(pi w)^beta on [0, 1/2].
    double target_mass = normalizer_ / std::exp2(beta + 1.0);
    double envelope_mass = gaussian_envelope_ ? sigma_ * std::sqrt(kPi / 2.0) : 0.5;
    acceptance_ = target_mass / envelope_mass;
}

double TiltedSampler::sample_offset(RandomStream& stream) const {
    for (;;) {
        if (gaussian_envelope_) {
            double w = std::abs(sigma_ * stream.normal());
            if (w > 0.5) {
                continue;
            }
            double log_ratio = beta_ * (std::log(std::cos(kPi * w)) + 0.5 * kPi * kPi * w * w);
            if (std::log(stream.uniform_open()) < log_ratio) {
                return w;
            }
        } else {
            double w = 0.5 * stream.uniform();
            if (stream.uniform() < std::pow(std::cos(kPi * w), beta_)) {
                return w;
            }
        }
    }
}

double TiltedSampler::sample(RandomStream& stream) const {
    double w = sample_offset(stream);
    double u = stream.uniform() < 0.5 ? 0.5 - w : 0.5 + w;
    return u >= 1.0 ? 0.0 : u;
}

double TiltedSampler::sample_log_distance(RandomStream& stream) const {
    double w = sample_offset(stream);
    return std::log(2.0 * std::cos(kPi * w));
}

double sample_tilted_v(const TiltedSampler& sampler, RandomStream& stream) {
    return sampler.sample(stream);
}

} // namespace permfield
