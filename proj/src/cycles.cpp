#include <permfield/cycles.hpp>
#include <permfield/errors.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace permfield {

namespace {

constexpr double kExactIntegerLimit = 9007199254740992.0; // 2^53
constexpr double kHarmonicLoopLimit = 1048576.0;          // 2^20

std::uint64_t parse_u64(const std::string& field, const std::string& line) {
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
        value = std::stoull(field, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("cycle csv: bad integer in line '" + line + "'");
    }
    if (used != field.size() || field.empty() || field.front() == '-') {
        throw std::invalid_argument("cycle csv: bad integer in line '" + line + "'");
    }
    return value;
}

// psi(b) - psi(a) for a >= 2^20 from the asymptotic series of the digamma
// function; truncation error is below a^-4 / 120.
double digamma_difference(double a, double b) {
    auto tail = [](double x) {
        double inv = 1.0 / x;
        double inv2 = inv * inv;
        return -0.5 * inv - inv2 / 12.0 + inv2 * inv2 / 120.0;
    };
    return std::log1p((b - a) / a) + (tail(b) - tail(a));
}

long block_index_of(Length length, double rho) {
    long k = static_cast<long>(std::floor(std::log(static_cast<double>(length)) / rho));
    // Nudge against rounding of exp/log near block boundaries.
    while (k > 0 && static_cast<double>(length) < std::ceil(std::exp(rho * static_cast<double>(k)))) {
        --k;
    }
    while (static_cast<double>(length) >= std::ceil(std::exp(rho * static_cast<double>(k + 1)))) {
        ++k;
    }
    return k;
}

void validate_rho(double rho) {
    if (!(rho > 0.0 && rho < 0.5)) {
        throw std::invalid_argument("block scale rho must lie in (0, 1/2)");
    }
}

} // namespace

CycleStructure::CycleStructure(std::uint64_t n, CountMap counts) : n_(n), counts_(std::move(counts)) {
    if (n_ == 0) {
        throw std::invalid_argument("cycle structure needs n >= 1");
    }
    std::uint64_t total = 0;
    for (const auto& [length, count] : counts_) {
        if (length == 0 || length > n_) {
            throw std::invalid_argument("cycle length out of range [1, n]");
        }
        if (count == 0) {
            throw std::invalid_argument("stored cycle multiplicities must be >= 1");
        }
        if (count > (n_ - total) / length) {
            throw std::invalid_argument("cycle lengths sum past n");
        }
        total += length * count;
    }
    if (total != n_) {
        throw std::invalid_argument("cycle lengths sum to " + std::to_string(total) + ", expected " +
                                    std::to_string(n_));
    }
}

std::uint64_t CycleStructure::count(Length length) const {
    auto it = counts_.find(length);
    return it == counts_.end() ? 0 : it->second;
}

std::uint64_t CycleStructure::total_cycles() const {
    std::uint64_t total = 0;
    for (const auto& [length, count] : counts_) {
        total += count;
    }
    return total;
}

void CycleStructure::write_csv(std::ostream& out) const {
    out << "n," << n_ << '\n' << "length,count\n";
    for (const auto& [length, count] : counts_) {
        out << length << ',' << count << '\n';
    }
}

std::string CycleStructure::to_csv() const {
    std::ostringstream out;
    write_csv(out);
    return out.str();
}

CycleStructure CycleStructure::read_csv(std::istream& in) {
    std::string line;
    std::uint64_t n = 0;
    bool have_header = false;
    CountMap counts;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("cycle csv: expected two columns in '" + line + "'");
        }
        std::string key = line.substr(0, comma);
        std::string value = line.substr(comma + 1);
        if (!have_header) {
            if (key != "n") {
                throw std::invalid_argument("cycle csv: first row must be 'n,<n>'");
            }
            n = parse_u64(value, line);
            have_header = true;
            continue;
        }
        if (key == "length" && value == "count") {
            continue;
        }
        Length length = parse_u64(key, line);
        std::uint64_t count = parse_u64(value, line);
        if (count == 0) {
            continue;
        }
        if (!counts.emplace(length, count).second) {
            throw std::invalid_argument("cycle csv: duplicate length " + key);
        }
    }
    if (!have_header) {
        throw std::invalid_argument("cycle csv: missing 'n,<n>' header");
    }
    return CycleStructure(n, std::move(counts));
}

CycleStructure CycleStructure::from_csv(const std::string& text) {
    std::istringstream in(text);
    return read_csv(in);
}

std::uint64_t PoissonCounts::total() const {
    std::uint64_t total = 0;
    for (const auto& [length, count] : counts) {
        total += count;
    }
    return total;
}

Block block_range(long k, double rho) {
    validate_rho(rho);
    if (k < 0) {
        throw std::invalid_argument("block index must be >= 0");
    }
    double lo = std::ceil(std::exp(rho * static_cast<double>(k)));
    double hi = std::ceil(std::exp(rho * static_cast<double>(k + 1)));
    if (!(hi <= kExactIntegerLimit)) {
        throw CapacityError("k", "block I_k endpoints exceed 2^53; reduce k or rho");
    }
    return Block{static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi)};
}

double harmonic_range(double lo, double hi) {
    if (!(hi > lo)) {
        return 0.0;
    }
    double sum = 0.0;
    double loop_end = std::min(hi, kHarmonicLoopLimit);
    if (lo < loop_end) {
        // Smallest terms first.
        auto first = static_cast<std::uint64_t>(lo);
        for (auto l = static_cast<std::uint64_t>(loop_end); l-- > first;) {
            sum += 1.0 / static_cast<double>(l);
        }
    }
    double tail_lo = std::max(lo, kHarmonicLoopLimit);
    if (hi > tail_lo) {
        sum += digamma_difference(tail_lo, hi);
    }
    return sum;
}

double block_mass(long k, double rho) {
    validate_rho(rho);
    if (k < 0) {
        throw std::invalid_argument("block index must be >= 0");
    }
    double upper_exponent = rho * static_cast<double>(k + 1);
    if (upper_exponent > 700.0) {
        // Integer rounding and 1/l corrections are below e^-600 here.
        return rho;
    }
    double lo = std::ceil(std::exp(rho * static_cast<double>(k)));
    double hi = std::ceil(std::exp(upper_exponent));
    return harmonic_range(lo, hi);
}

CycleStructure sample_cycle_structure(std::uint64_t n, RandomStream& stream) {
    if (n == 0) {
        throw std::invalid_argument("sample_cycle_structure: n must be >= 1");
    }
    CountMap counts;
    std::uint64_t remaining = n;
    while (remaining > 0) {
        Length length = stream.uniform_int(1, remaining);
        ++counts[length];
        remaining -= length;
    }
    return CycleStructure(n, std::move(counts));
}

double exact_cycle_type_probability(const CycleStructure& structure) {
    double log_p = 0.0;
    for (const auto& [length, count] : structure.counts()) {
        auto c = static_cast<double>(count);
        log_p -= c * std::log(static_cast<double>(length)) + std::lgamma(c + 1.0);
    }
    return std::exp(log_p);
}

std::vector<CycleStructure> enumerate_cycle_types(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("enumerate_cycle_types: n must be >= 1");
    }
    std::vector<CycleStructure> out;
    CountMap current;
    std::function<void(std::uint64_t, std::uint64_t)> recurse = [&](std::uint64_t remaining, Length max_part) {
        if (remaining == 0) {
            out.emplace_back(n, current);
            return;
        }
        for (Length part = std::min<Length>(remaining, max_part); part >= 1; --part) {
            ++current[part];
            recurse(remaining - part, part);
            if (--current[part] == 0) {
                current.erase(part);
            }
        }
    };
    recurse(n, n);
    return out;
}

std::uint64_t sample_poisson(double mean, RandomStream& stream) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson mean must be finite and >= 0");
    }
    if (mean == 0.0) {
        return 0;
    }
    // Inversion is exact for moderate means; larger means split by additivity.
    constexpr double kChunk = 30.0;
    std::uint64_t total = 0;
    while (mean > kChunk) {
        total += sample_poisson(kChunk, stream);
        mean -= kChunk;
    }
    double u = stream.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u >= cdf) {
        ++k;
        p *= mean / static_cast<double>(k);
        if (p == 0.0) {
            break;
        }
        cdf += p;
    }
    return total + k;
}

PoissonCounts sample_poisson_counts(std::uint64_t max_len, RandomStream& stream) {
    if (max_len == 0) {
        throw std::invalid_argument("sample_poisson_counts: max_len must be >= 1");
    }
    PoissonCounts out;
    out.max_len = max_len;
    for (Length l = 1; l <= max_len; ++l) {
        std::uint64_t z = sample_poisson(1.0 / static_cast<double>(l), stream);
        if (z > 0) {
            out.counts.emplace_hint(out.counts.end(), l, z);
        }
    }
    return out;
}

std::uint64_t sample_block_cycle(long k, double rho, RandomStream& stream) {
    Block block = block_range(k, rho);
    if (block.empty()) {
        throw std::invalid_argument("sample_block_cycle: block I_" + std::to_string(k) + " has no integers");
    }
    if (block.size() == 1) {
        return block.lo;
    }
    // Propose floor(X) with X log-uniform on [lo, hi): P(l) ~ log(1 + 1/l).
    // The target/proposal ratio 1/(l log(1 + 1/l)) decreases in l.
    auto lo = static_cast<double>(block.lo);
    double log_span = std::log(static_cast<double>(block.hi) / lo);
    auto ratio = [](double l) { return 1.0 / (l * std::log1p(1.0 / l)); };
    double ratio_max = ratio(lo);
    for (;;) {
        double x = lo * std::exp(stream.uniform() * log_span);
        auto l = static_cast<std::uint64_t>(std::floor(x));
        l = std::clamp(l, block.lo, block.hi - 1);
        if (stream.uniform() * ratio_max < ratio(static_cast<double>(l))) {
            return l;
        }
    }
}

Occupancy coarse_occupancy(const CountMap& counts, double rho, long m, long n) {
    validate_rho(rho);
    if (!(m < n) || m < 0) {
        throw std::invalid_argument("coarse_occupancy: need 0 <= m < n");
    }
    std::vector<std::uint64_t> per_block(static_cast<std::size_t>(n - m), 0);
    for (const auto& [length, count] : counts) {
        long k = block_index_of(length, rho);
        if (k >= m && k < n) {
            per_block[static_cast<std::size_t>(k - m)] += count;
        }
    }
    return occupancy_from_block_counts(per_block, rho, m);
}

Occupancy coarse_occupancy(const CycleStructure& structure, double rho, long m, long n) {
    return coarse_occupancy(structure.counts(), rho, m, n);
}

Occupancy coarse_occupancy(const PoissonCounts& counts, double rho, long m, long n) {
    return coarse_occupancy(counts.counts, rho, m, n);
}

std::vector<std::uint64_t> sample_block_counts(double rho, long m, long n, RandomStream& stream) {
    validate_rho(rho);
    if (!(m < n) || m < 0) {
        throw std::invalid_argument("sample_block_counts: need 0 <= m < n");
    }
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(n - m));
    for (long k = m; k < n; ++k) {
        out.push_back(sample_poisson(block_mass(k, rho), stream));
    }
    return out;
}

Occupancy occupancy_from_block_counts(const std::vector<std::uint64_t>& block_counts, double rho, long m) {
    Occupancy occ;
    occ.rho = rho;
    occ.m = m;
    occ.n = m + static_cast<long>(block_counts.size());
    for (std::size_t i = 0; i < block_counts.size(); ++i) {
        long k = m + static_cast<long>(i);
        switch (block_counts[i]) {
        case 0:
            occ.q0.push_back(k);
            break;
        case 1:
            occ.q1.push_back(k);
            break;
        default:
            occ.q2plus.push_back(k);
            break;
        }
    }
    return occ;
}

} // namespace permfield
