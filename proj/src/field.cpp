#include <permfield/errors.hpp>
#include <permfield/field.hpp>
#include <permfield/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace permfield {

namespace {

constexpr double kPi = std::numbers::pi;

// Residue r of a point r/D with 0 < r < D.
inline double log_term_residue(std::uint64_t r, std::uint64_t den) {
    std::uint64_t s = std::min(r, den - r);
    return std::log(2.0 * std::sin(kPi * (static_cast<double>(s) / static_cast<double>(den))));
}

inline double arg_term_residue(std::uint64_t r, std::uint64_t den) {
    return kPi * (static_cast<double>(r) / static_cast<double>(den) - 0.5);
}

struct Partial {
    double sum = 0.0;
    bool singular = false;
};

struct ChunkBest {
    std::uint64_t index = 0;
    ExtReal value = ExtReal::neg_inf();
};

inline ExtReal to_ext(double sum, bool singular) {
    return singular ? ExtReal::neg_inf() : ExtReal(sum);
}

template <typename Residue>
void accumulate_chunk(const FieldSpec& spec, Residue den, std::uint64_t count, std::vector<double>& acc,
                      std::vector<unsigned char>& singular, auto&& start_fn, auto&& step_fn) {
    const bool real = spec.kind() == FieldKind::real;
    for (const Mode& mode : spec.modes()) {
        Residue r = start_fn(mode.length);
        Residue step = step_fn(mode.length);
        auto weight = static_cast<double>(mode.count);
        for (std::uint64_t i = 0; i < count; ++i) {
            if (real) {
                if (r == 0) {
                    singular[i] = 1;
                } else {
                    acc[i] += weight * log_term_residue(static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(den));
                }
            } else {
                acc[i] += weight * arg_term_residue(static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(den));
            }
            r += step;
            if (r >= den) {
                r -= den;
            }
        }
    }
}

} // namespace

// ---- ExtReal ----

double ExtReal::value() const {
    return neg_inf_ ? -std::numeric_limits<double>::infinity() : value_;
}

ExtReal& ExtReal::operator+=(const ExtReal& other) {
    if (neg_inf_ || other.neg_inf_) {
        *this = neg_inf();
    } else {
        value_ += other.value_;
    }
    return *this;
}

bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.neg_inf_ || b.neg_inf_) {
        return a.neg_inf_ == b.neg_inf_;
    }
    return a.value_ == b.value_;
}

std::partial_ordering operator<=>(const ExtReal& a, const ExtReal& b) {
    if (a.neg_inf_ && b.neg_inf_) {
        return std::partial_ordering::equivalent;
    }
    if (a.neg_inf_) {
        return std::partial_ordering::less;
    }
    if (b.neg_inf_) {
        return std::partial_ordering::greater;
    }
    return a.value_ <=> b.value_;
}

std::string ExtReal::to_string() const {
    if (neg_inf_) {
        return "-inf";
    }
    std::ostringstream out;
    out.precision(17);
    out << value_;
    return out.str();
}

// ---- Mesh ----

Mesh::Mesh(std::uint64_t q, std::int64_t theta_num, std::int64_t theta_den)
    : q_(q), theta_num_(theta_num), theta_den_(theta_den) {
    if (q == 0) {
        throw std::invalid_argument("mesh size q must be >= 1");
    }
    if (theta_den < 1) {
        throw std::invalid_argument("mesh rotation denominator must be >= 1");
    }
    if (theta_num > theta_den || theta_num < -theta_den) {
        throw std::invalid_argument("mesh rotation must satisfy |theta| <= 1");
    }
    __int128 den = static_cast<__int128>(q) * q * theta_den;
    if (den > std::numeric_limits<std::int64_t>::max()) {
        throw CapacityError("q", "mesh denominator q^2 * theta_den exceeds 2^63; reduce q (or theta_den)");
    }
    denominator_ = static_cast<std::int64_t>(den);
    stride_ = static_cast<std::int64_t>(q) * theta_den;
}

Rational Mesh::point(std::uint64_t j) const {
    if (j >= q_) {
        throw std::out_of_range("mesh index out of range");
    }
    return Rational(static_cast<std::int64_t>(j) * stride_ + theta_num_, denominator_);
}

double Mesh::point_float(std::uint64_t j) const {
    return point(j).to_double();
}

std::uint64_t Mesh::nearest_index(double x) const {
    double shift = static_cast<double>(theta_num_) / static_cast<double>(theta_den_) /
                   (static_cast<double>(q_) * static_cast<double>(q_));
    double pos = std::nearbyint((x - shift) * static_cast<double>(q_));
    double wrapped = std::fmod(pos, static_cast<double>(q_));
    if (wrapped < 0) {
        wrapped += static_cast<double>(q_);
    }
    return static_cast<std::uint64_t>(wrapped);
}

// ---- FieldSpec ----

FieldSpec::FieldSpec(const CountMap& counts, std::uint64_t size, FieldKind kind, std::optional<Length> truncation)
    : kind_(kind), size_(size), truncation_(truncation) {
    if (truncation && *truncation > size) {
        throw std::invalid_argument("field truncation exceeds the field size");
    }
    for (const auto& [length, count] : counts) {
        if (truncation && length > *truncation) {
            break;
        }
        modes_.push_back(Mode{length, count});
    }
}

FieldSpec::FieldSpec(const CycleStructure& structure, FieldKind kind, std::optional<Length> truncation)
    : FieldSpec(structure.counts(), structure.n(), kind, truncation) {}

FieldSpec::FieldSpec(const PoissonCounts& counts, FieldKind kind, std::optional<Length> truncation)
    : FieldSpec(counts.counts, counts.max_len, kind, truncation) {}

std::uint64_t FieldSpec::total_cycles() const {
    std::uint64_t total = 0;
    for (const Mode& mode : modes_) {
        total += mode.count;
    }
    return total;
}

FieldSpec FieldSpec::with_kind(FieldKind kind) const {
    FieldSpec out = *this;
    out.kind_ = kind;
    return out;
}

FieldSpec FieldSpec::restricted(Length lo, Length hi) const {
    FieldSpec out = *this;
    std::erase_if(out.modes_, [&](const Mode& m) { return m.length < lo || m.length > hi; });
    return out;
}

// ---- point terms ----

double reduce_multiple(Length l, double t) {
    auto lf = static_cast<double>(l);
    double product = lf * t;
    double error = std::fma(lf, t, -product);
    double u = (product - std::floor(product)) + error;
    u -= std::floor(u);
    return u >= 1.0 ? 0.0 : u;
}

ExtReal log_dist_term(double u) {
    u -= std::floor(u);
    double s = std::min(u, 1.0 - u);
    if (s < kSingularThreshold) {
        return ExtReal::neg_inf();
    }
    return std::log(2.0 * std::sin(kPi * s));
}

ExtReal log_dist_term(const Rational& u) {
    auto r = static_cast<std::uint64_t>(mod_floor(u.num, u.den));
    if (r == 0) {
        return ExtReal::neg_inf();
    }
    return log_term_residue(r, static_cast<std::uint64_t>(u.den));
}

double arg_term(double u) {
    u -= std::floor(u);
    if (u >= 1.0) {
        u = 0.0;
    }
    return kPi * (u - 0.5);
}

double arg_term(const Rational& u) {
    auto r = static_cast<std::uint64_t>(mod_floor(u.num, u.den));
    return arg_term_residue(r, static_cast<std::uint64_t>(u.den));
}

ExtReal eval_point(const FieldSpec& spec, const Rational& t) {
    auto den = static_cast<std::uint64_t>(t.den);
    double sum = 0.0;
    bool singular = false;
    for (const Mode& mode : spec.modes()) {
        auto r = static_cast<std::uint64_t>(mod_floor(static_cast<__int128>(mode.length) * t.num, t.den));
        auto weight = static_cast<double>(mode.count);
        if (spec.kind() == FieldKind::real) {
            if (r == 0) {
                singular = true;
            } else {
                sum += weight * log_term_residue(r, den);
            }
        } else {
            sum += weight * arg_term_residue(r, den);
        }
    }
    return to_ext(sum, singular);
}

ExtReal eval_point(const FieldSpec& spec, double t) {
    double sum = 0.0;
    bool singular = false;
    for (const Mode& mode : spec.modes()) {
        double u = reduce_multiple(mode.length, t);
        auto weight = static_cast<double>(mode.count);
        if (spec.kind() == FieldKind::real) {
            ExtReal term = log_dist_term(u);
            if (term.is_neg_inf()) {
                singular = true;
            } else {
                sum += weight * term.value();
            }
        } else {
            sum += weight * arg_term(u);
        }
    }
    return to_ext(sum, singular);
}

ExtReal eval_point(const FieldSpec& spec, const TorusPoint& t) {
    return std::visit([&](const auto& point) { return eval_point(spec, point); }, t);
}

// ---- mesh scan ----

ScanResult scan_max(const FieldSpec& spec, const Mesh& mesh, unsigned threads, bool keep_trace) {
    const std::uint64_t q = mesh.size();
    const std::uint64_t chunks = (q + kScanChunk - 1) / kScanChunk;
    const __int128 den = mesh.denominator();
    const __int128 stride = mesh.stride();
    const __int128 offset = mesh.theta_num();
    const bool narrow = den < (static_cast<__int128>(1) << 62);

    ScanResult result;
    if (keep_trace) {
        result.trace.assign(q, ExtReal::neg_inf());
    }
    std::vector<ChunkBest> best(chunks);

    parallel_for(chunks, threads, [&](std::size_t c) {
        const std::uint64_t j0 = c * kScanChunk;
        const std::uint64_t count = std::min(kScanChunk, q - j0);
        std::vector<double> acc(count, 0.0);
        std::vector<unsigned char> singular(count, 0);
        auto start = [&](Length l) {
            return mod_floor(static_cast<__int128>(l) * (static_cast<__int128>(j0) * stride + offset), den);
        };
        auto step = [&](Length l) { return mod_floor(static_cast<__int128>(l) * stride, den); };
        if (narrow) {
            auto d = static_cast<std::uint64_t>(den);
            accumulate_chunk<std::uint64_t>(
                spec, d, count, acc, singular,
                [&](Length l) { return static_cast<std::uint64_t>(start(l)); },
                [&](Length l) { return static_cast<std::uint64_t>(step(l)); });
        } else {
            accumulate_chunk<unsigned __int128>(
                spec, static_cast<unsigned __int128>(den), count, acc, singular,
                [&](Length l) { return static_cast<unsigned __int128>(start(l)); },
                [&](Length l) { return static_cast<unsigned __int128>(step(l)); });
        }
        ChunkBest local{j0, ExtReal::neg_inf()};
        for (std::uint64_t i = 0; i < count; ++i) {
            ExtReal v = to_ext(acc[i], singular[i] != 0);
            if (keep_trace) {
                result.trace[j0 + i] = v;
            }
            if (v > local.value) {
                local = ChunkBest{j0 + i, v};
            }
        }
        best[c] = local;
    });

    for (const ChunkBest& b : best) {
        if (b.value > result.max) {
            result.max = b.value;
            result.argmax = b.index;
        }
    }
    return result;
}

SplitValue split_field(const FieldSpec& spec, std::uint64_t cutoff_w, const TorusPoint& t) {
    const std::uint64_t n = spec.size();
    if (cutoff_w < 2 || cutoff_w > n) {
        throw std::invalid_argument("split_field: need 2 <= W <= n");
    }
    const Length boundary = n / cutoff_w;
    SplitValue out;
    out.low = eval_point(spec.restricted(1, boundary), t);
    out.high = eval_point(spec.restricted(boundary + 1, n), t);
    return out;
}

} // namespace permfield
