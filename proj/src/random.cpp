#include <permfield/random.hpp>

namespace permfield {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words) {
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (auto w : words) {
        h = splitmix64(h ^ splitmix64(w));
    }
    return h;
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

RandomStream RandomStream::split(std::uint64_t index) const {
    return RandomStream(mix_seed({seed_, index}));
}

double RandomStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform_open() {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
}

std::uint64_t RandomStream::uniform_int(std::uint64_t lo, std::uint64_t hi) {
    std::uniform_int_distribution<std::uint64_t> dist(lo, hi);
    return dist(engine_);
}

double RandomStream::normal() {
    return normal_(engine_);
}

} // namespace permfield
