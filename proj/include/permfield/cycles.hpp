#pragma once

#include <permfield/random.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace permfield {

using Length = std::uint64_t;
using CountMap = std::map<Length, std::uint64_t>;

/// Cycle type of a permutation of [n]: sparse map length -> multiplicity.
class CycleStructure {
public:
    /// Throws std::invalid_argument unless sum(length * count) == n and all
    /// stored counts are >= 1.
    CycleStructure(std::uint64_t n, CountMap counts);

    std::uint64_t n() const { return n_; }
    const CountMap& counts() const { return counts_; }
    std::uint64_t count(Length length) const;
    std::uint64_t total_cycles() const;

    /// "n,<n>", then a "length,count" header, then one row per length.
    void write_csv(std::ostream& out) const;
    std::string to_csv() const;
    static CycleStructure read_csv(std::istream& in);
    static CycleStructure from_csv(const std::string& text);

    friend bool operator==(const CycleStructure&, const CycleStructure&) = default;

private:
    std::uint64_t n_;
    CountMap counts_;
};

/// Independent Poisson(1/l) counts for l <= max_len, stored sparsely.
struct PoissonCounts {
    std::uint64_t max_len = 1;
    CountMap counts;

    std::uint64_t total() const;
};

/// Block indices of [m, n) split by the number of cycles in I_k.
struct Occupancy {
    double rho = 0.0;
    long m = 0;
    long n = 0;
    std::vector<long> q0;
    std::vector<long> q1;
    std::vector<long> q2plus;
};

/// Integer block I_k = [lo, hi) with lo = ceil(e^{rho k}), hi = ceil(e^{rho (k+1)}).
struct Block {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;

    bool empty() const { return hi <= lo; }
    std::uint64_t size() const { return empty() ? 0 : hi - lo; }
};

/// Throws CapacityError when the block endpoints exceed 2^53.
Block block_range(long k, double rho);

/// Sum of 1/l over integers lo <= l < hi.
double harmonic_range(double lo, double hi);

/// Expected number of Poisson cycles in I_k, i.e. sum_{l in I_k} 1/l. Valid for
/// blocks far beyond 2^64, where the endpoints are handled in floating point.
double block_mass(long k, double rho);

/// Cycle type of a uniform permutation of [n] by stick breaking: the cycle
/// through the smallest remaining element has length uniform on
/// {1, ..., remaining}.
CycleStructure sample_cycle_structure(std::uint64_t n, RandomStream& stream);

/// Cauchy's formula: prod_l l^{-c_l} / c_l!.
double exact_cycle_type_probability(const CycleStructure& structure);

/// All cycle types of [n], in no particular order. Intended for small n.
std::vector<CycleStructure> enumerate_cycle_types(std::uint64_t n);

std::uint64_t sample_poisson(double mean, RandomStream& stream);

PoissonCounts sample_poisson_counts(std::uint64_t max_len, RandomStream& stream);

/// Length l in I_k drawn with probability (1/l) / rho_k.
std::uint64_t sample_block_cycle(long k, double rho, RandomStream& stream);

/// Classifies blocks k in [m, n) by N(I_k) computed from explicit counts.
Occupancy coarse_occupancy(const CountMap& counts, double rho, long m, long n);
Occupancy coarse_occupancy(const CycleStructure& structure, double rho, long m, long n);
Occupancy coarse_occupancy(const PoissonCounts& counts, double rho, long m, long n);

/// Draws N(I_k) ~ Poisson(rho_k) for each block in [m, n). Equal in law to
/// aggregating sample_poisson_counts over each block, without touching the
/// individual lengths.
std::vector<std::uint64_t> sample_block_counts(double rho, long m, long n, RandomStream& stream);

Occupancy occupancy_from_block_counts(const std::vector<std::uint64_t>& block_counts, double rho, long m);

} // namespace permfield
