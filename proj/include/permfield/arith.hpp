#pragma once

#include <permfield/field.hpp>
#include <permfield/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace permfield {

enum class ArcKind { major, minor };

std::string to_string(ArcKind kind);

/// Major iff some 1 <= xi <= xi0 has ||xi t|| <= kappa; `witness` is the
/// smallest such xi and is present exactly for major points.
struct ArcClassification {
    ArcKind kind = ArcKind::minor;
    std::optional<std::uint64_t> witness;
};

/// Bohr set B_xi(kappa) = {t : ||xi t|| <= kappa}.
struct BohrSpec {
    std::int64_t xi;
    double kappa;

    /// Throws std::invalid_argument unless xi != 0 and 0 < kappa < 1/2.
    BohrSpec(std::int64_t frequency, double width);
};

/// Distance to the nearest integer.
double torus_norm(double x);
/// Exact, returned as a rational in [0, 1/2].
Rational torus_norm(const Rational& x);

/// Exact test of ||x|| <= kappa for rational x (kappa taken as its exact
/// binary value).
bool torus_norm_at_most(const Rational& x, double kappa);

ArcClassification classify(double t, std::uint64_t xi0, double kappa);
ArcClassification classify(const Rational& t, std::uint64_t xi0, double kappa);
ArcClassification classify(const TorusPoint& t, std::uint64_t xi0, double kappa);

/// min over nonzero xi, xi' in [-xi0, xi0] of ||xi s + xi' t||.
double arithmetic_distance(double s, double t, std::uint64_t xi0);

/// Exact |mesh ∩ B_xi(kappa)|, counted arc by arc in O(|xi|) big-integer steps.
std::uint64_t mesh_bohr_count(const Mesh& mesh, const BohrSpec& spec);

/// Search constant standing in for the implied constant of the detection bound.
inline constexpr double kVinogradovConstant = 100.0;

/// Small frequency xi <= 2/delta with ||xi t|| <= C kappa / (delta M), or none
/// when M <= 2/delta, kappa >= delta/100, or no frequency qualifies.
/// Throws std::invalid_argument unless kappa, delta lie in (0, 1) and M > 0.
std::optional<std::uint64_t> vinogradov_detect(double t, double interval_len, double kappa, double delta);

} // namespace permfield
