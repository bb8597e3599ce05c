#pragma once

#include <permfield/field.hpp>
#include <permfield/rational.hpp>
#include <permfield/report.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace permfield {

struct ExperimentConfig {
    std::string name;
    std::vector<std::uint64_t> n_values;
    std::uint64_t replicas = 20;
    std::uint64_t seed = 1;
    std::uint64_t mesh_factor = 2;
    Rational theta{1, 7};
    std::uint64_t xi0 = 5;
    std::optional<double> kappa; // unset: N^-alpha
    double alpha = 0.3;
    double rho = 0.05;
    long m = 185;
    long n_blocks = 2000;
    std::uint64_t q = 32;
    std::string t = "golden";
    std::optional<double> y; // unset: x*
    std::uint64_t samples = 1000000;
    std::uint64_t points = 32;
    std::uint64_t cutoff_w = 100;
    double occupancy_c = 8.0;
    unsigned threads = 0; // not echoed: reports must not depend on it

    /// Defaults for a named experiment. Throws std::invalid_argument for an
    /// unknown name.
    static ExperimentConfig defaults(const std::string& name);
    /// Overlays a JSON object on the defaults. Unknown keys are rejected.
    static ExperimentConfig from_json(const std::string& name, const nlohmann::json& overrides);
    nlohmann::json to_json() const;
    void validate() const;
};

const std::vector<std::string>& experiment_names();

/// Golden-ratio fractional part when text is "golden".
TorusPoint resolve_torus_point(const std::string& text);

ExperimentReport run_field_scan(const ExperimentConfig& config);
ExperimentReport run_lln_scan(const ExperimentConfig& config);
ExperimentReport run_imag_scan(const ExperimentConfig& config);
ExperimentReport run_clt_check(const ExperimentConfig& config);
ExperimentReport run_conditional_tail(const ExperimentConfig& config);
ExperimentReport run_two_point(const ExperimentConfig& config);
ExperimentReport run_arc_profile(const ExperimentConfig& config);
ExperimentReport run_occupancy(const ExperimentConfig& config);
ExperimentReport run_poisson_consistency(const ExperimentConfig& config);

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Tail probability of an i.i.d. sum of q copies of log|1-e(U)| above y*q.
struct TailEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    bool tilted = false;
};

/// Naive sampling when the predicted probability is at least 1e-5, tilted
/// importance sampling otherwise. Exactly 0 when y >= log 2.
TailEstimate estimate_iid_tail(double y, std::uint64_t q, std::uint64_t samples, std::uint64_t seed,
                               unsigned threads = 0);

} // namespace permfield
