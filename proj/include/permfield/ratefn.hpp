#pragma once

#include <permfield/random.hpp>

#include <cstdint>

namespace permfield {

/// lambda(beta) = log int_0^1 |1 - e(u)|^beta du in closed form:
/// beta log 2 + lgamma((beta+1)/2) - lgamma(beta/2 + 1) - log(pi)/2.
/// Throws std::domain_error for beta <= 0.
double lambda(double beta);

struct LambdaDerivs {
    double first;
    double second;
};

/// lambda'(beta) and lambda''(beta) from digamma and trigamma.
LambdaDerivs lambda_derivs(double beta);

/// Quadrature route to lambda(beta), independent of the closed form.
double lambda_quadrature(double beta);

/// Quadrature of int_0^1 log|1 - e(u)| du (zero analytically).
double mean_log_distance_quadrature();

struct LegendrePoint {
    double value; // lambda*(x)
    double beta;  // maximiser beta_*(x), also d lambda*/dx
};

/// Legendre transform sup_{beta > 0} {x beta - lambda(beta)} for 0 < x < log 2.
LegendrePoint legendre(double x);

struct RateSolution {
    double x_crit;
    double beta_crit;
    double lambda_at;  // lambda(beta_crit)
    double lambda2_at; // lambda''(beta_crit)
    double residual;   // |lambda*(x_crit) - 1|
};

/// Root of lambda*(x) = 1 by safeguarded Newton on x.
RateSolution solve_xcrit();

/// Cached result of solve_xcrit().
const RateSolution& critical_solution();

/// Sharp large-deviation estimate of P(V_1 + ... + V_q >= y q) for i.i.d.
/// V = log|1 - e(U)|: exp(-lambda*(y) q) / (beta sqrt(lambda''(beta) q)).
double bahadur_rao_tail(double y, std::uint64_t q);

/// Exact P(V >= y) for a single uniform point.
double single_tail_probability(double y);

/// Draws u from the density |1 - e(u)|^beta / e^{lambda(beta)} on [0, 1).
/// Writing u = 1/2 +- w, the target in w is cos(pi w)^beta on [0, 1/2],
/// sampled by rejection from a uniform envelope (beta <= 1) or from the
/// half-normal exp(-beta pi^2 w^2 / 2), which dominates since
/// log cos x <= -x^2/2.
class TiltedSampler {
public:
    static constexpr double kMaxBeta = 64.0;

    /// Throws std::domain_error unless 0 < beta <= kMaxBeta.
    explicit TiltedSampler(double beta);

    double beta() const { return beta_; }
    double normalizer() const { return normalizer_; }
    /// Probability that one proposal is accepted.
    double acceptance() const { return acceptance_; }

    double sample(RandomStream& stream) const;
    /// log|1 - e(u)| for a tilted draw, computed from the offset w directly.
    double sample_log_distance(RandomStream& stream) const;

private:
    double sample_offset(RandomStream& stream) const;

    double beta_;
    double normalizer_;
    double acceptance_;
    double sigma_;
    bool gaussian_envelope_;
};

double sample_tilted_v(const TiltedSampler& sampler, RandomStream& stream);

} // namespace permfield
