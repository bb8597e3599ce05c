#pragma once

#include <permfield/cycles.hpp>
#include <permfield/rational.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace permfield {

/// Value in [-inf, inf) with an exact -inf state. -inf absorbs addition.
class ExtReal {
public:
    constexpr ExtReal() = default;
    constexpr ExtReal(double value) : value_(value) {}

    static constexpr ExtReal neg_inf() {
        ExtReal out;
        out.neg_inf_ = true;
        return out;
    }

    constexpr bool is_neg_inf() const { return neg_inf_; }
    constexpr bool is_finite() const { return !neg_inf_; }
    /// The finite value, or -HUGE_VAL for -inf.
    double value() const;

    ExtReal& operator+=(const ExtReal& other);
    friend ExtReal operator+(ExtReal a, const ExtReal& b) { return a += b; }

    friend bool operator==(const ExtReal& a, const ExtReal& b);
    friend std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b);

    /// "-inf" or a round-trippable decimal.
    std::string to_string() const;

private:
    double value_ = 0.0;
    bool neg_inf_ = false;
};

/// Rotated rational grid {j/q + theta/q^2 : 0 <= j < q}, theta = theta_num/theta_den.
/// Point j is exactly (j q theta_den + theta_num) / (q^2 theta_den).
class Mesh {
public:
    /// Throws std::invalid_argument for q = 0, theta_den < 1 or |theta| > 1, and
    /// CapacityError when q^2 theta_den does not fit a signed 64-bit integer.
    Mesh(std::uint64_t q, std::int64_t theta_num = 1, std::int64_t theta_den = 7);

    std::uint64_t q() const { return q_; }
    std::int64_t theta_num() const { return theta_num_; }
    std::int64_t theta_den() const { return theta_den_; }
    std::uint64_t size() const { return q_; }

    std::int64_t denominator() const { return denominator_; }
    /// Numerator step between consecutive points, q * theta_den.
    std::int64_t stride() const { return stride_; }

    Rational point(std::uint64_t j) const;
    double point_float(std::uint64_t j) const;

    /// Mesh index whose point is closest to x on the torus.
    std::uint64_t nearest_index(double x) const;

private:
    std::uint64_t q_;
    std::int64_t theta_num_;
    std::int64_t theta_den_;
    std::int64_t denominator_;
    std::int64_t stride_;
};

enum class FieldKind { real, imaginary };

struct Mode {
    Length length;
    std::uint64_t count;
};

/// Which cycle counts feed the field and whether its real or imaginary part
/// is evaluated. An optional truncation keeps only lengths <= truncation.
class FieldSpec {
public:
    FieldSpec(const CycleStructure& structure, FieldKind kind = FieldKind::real,
              std::optional<Length> truncation = std::nullopt);
    FieldSpec(const PoissonCounts& counts, FieldKind kind = FieldKind::real,
              std::optional<Length> truncation = std::nullopt);

    FieldKind kind() const { return kind_; }
    /// n for a permutation, max_len for Poisson counts.
    std::uint64_t size() const { return size_; }
    std::optional<Length> truncation() const { return truncation_; }
    /// Modes in increasing length order, after truncation.
    const std::vector<Mode>& modes() const { return modes_; }
    std::uint64_t total_cycles() const;

    FieldSpec with_kind(FieldKind kind) const;
    /// Keeps only modes with lo <= length <= hi.
    FieldSpec restricted(Length lo, Length hi) const;

private:
    FieldSpec(const CountMap& counts, std::uint64_t size, FieldKind kind, std::optional<Length> truncation);

    FieldKind kind_;
    std::uint64_t size_;
    std::optional<Length> truncation_;
    std::vector<Mode> modes_;
};

/// Float torus distances below this count as exact zeros.
inline constexpr double kSingularThreshold = 1e-15;

/// log|1 - e(u)| = log(2 |sin(pi u)|); -inf iff u is an integer.
ExtReal log_dist_term(double u);
ExtReal log_dist_term(const Rational& u);

/// arg(1 - e(u)) = pi (u - 1/2) for u reduced to [0, 1).
double arg_term(double u);
double arg_term(const Rational& u);

/// l t mod 1 with the product formed exactly before reduction.
double reduce_multiple(Length l, double t);

ExtReal eval_point(const FieldSpec& spec, const Rational& t);
ExtReal eval_point(const FieldSpec& spec, double t);
ExtReal eval_point(const FieldSpec& spec, const TorusPoint& t);

struct ScanResult {
    std::uint64_t argmax = 0;
    ExtReal max = ExtReal::neg_inf();
    std::vector<ExtReal> trace; // filled only on request
};

/// Points per parallel task in scan_max.
inline constexpr std::uint64_t kScanChunk = 1ULL << 16;

/// Exact maximiser of the field over the mesh; ties and the all -inf case
/// resolve to the smallest index. Output does not depend on `threads`.
ScanResult scan_max(const FieldSpec& spec, const Mesh& mesh, unsigned threads = 0, bool keep_trace = false);

struct SplitValue {
    ExtReal low;  // lengths <= n / W
    ExtReal high; // lengths > n / W
};

/// Requires 2 <= W <= n.
SplitValue split_field(const FieldSpec& spec, std::uint64_t cutoff_w, const TorusPoint& t);

} // namespace permfield
