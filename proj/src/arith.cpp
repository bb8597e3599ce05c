#include <permfield/arith.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace permfield {

namespace {

using boost::multiprecision::cpp_int;

// kappa = mantissa / 2^shift exactly.
struct Dyadic {
    cpp_int mantissa;
    unsigned shift;
};

Dyadic to_dyadic(double kappa) {
    int exponent = 0;
    double fraction = std::frexp(kappa, &exponent);
    auto mantissa = static_cast<std::int64_t>(std::ldexp(fraction, 53));
    int shift = 53 - exponent;
    while (shift > 0 && mantissa % 2 == 0) {
        mantissa /= 2;
        --shift;
    }
    if (shift < 0) {
        return Dyadic{cpp_int(mantissa) << -shift, 0};
    }
    return Dyadic{cpp_int(mantissa), static_cast<unsigned>(shift)};
}

cpp_int floor_div(const cpp_int& a, const cpp_int& b) {
    cpp_int q = a / b;
    if (a % b != 0 && a < 0) {
        q -= 1;
    }
    return q;
}

cpp_int ceil_div(const cpp_int& a, const cpp_int& b) {
    return -floor_div(-a, b);
}

void validate_kappa(double kappa) {
    if (!(kappa > 0.0 && kappa < 0.5)) {
        throw std::invalid_argument("kappa must lie in (0, 1/2)");
    }
}

} // namespace

std::string to_string(ArcKind kind) {
    return kind == ArcKind::major ? "major" : "minor";
}

BohrSpec::BohrSpec(std::int64_t frequency, double width) : xi(frequency), kappa(width) {
    if (xi == 0) {
        throw std::invalid_argument("Bohr frequency must be nonzero");
    }
    validate_kappa(kappa);
}

double torus_norm(double x) {
    double f = x - std::floor(x);
    return std::min(f, 1.0 - f);
}

Rational torus_norm(const Rational& x) {
    auto r = static_cast<std::int64_t>(mod_floor(x.num, x.den));
    return Rational(std::min(r, x.den - r), x.den);
}

bool torus_norm_at_most(const Rational& x, double kappa) {
    if (kappa >= 0.5) {
        return true;
    }
    if (kappa < 0) {
        return false;
    }
    Rational d = torus_norm(x);
    if (kappa == 0) {
        return d.num == 0;
    }
    Dyadic k = to_dyadic(kappa);
    return (cpp_int(d.num) << k.shift) <= k.mantissa * d.den;
}

ArcClassification classify(double t, std::uint64_t xi0, double kappa) {
    validate_kappa(kappa);
    if (xi0 == 0) {
        throw std::invalid_argument("classify: xi0 must be >= 1");
    }
    for (std::uint64_t xi = 1; xi <= xi0; ++xi) {
        if (torus_norm(reduce_multiple(xi, t)) <= kappa) {
            return ArcClassification{ArcKind::major, xi};
        }
    }
    return ArcClassification{};
}

ArcClassification classify(const Rational& t, std::uint64_t xi0, double kappa) {
    validate_kappa(kappa);
    if (xi0 == 0) {
        throw std::invalid_argument("classify: xi0 must be >= 1");
    }
    Rational base = t.reduced_mod_one();
    for (std::uint64_t xi = 1; xi <= xi0; ++xi) {
        auto num = static_cast<std::int64_t>(mod_floor(static_cast<__int128>(base.num) * xi, base.den));
        if (torus_norm_at_most(Rational(num, base.den), kappa)) {
            return ArcClassification{ArcKind::major, xi};
        }
    }
    return ArcClassification{};
}

ArcClassification classify(const TorusPoint& t, std::uint64_t xi0, double kappa) {
    return std::visit([&](const auto& point) { return classify(point, xi0, kappa); }, t);
}

double arithmetic_distance(double s, double t, std::uint64_t xi0) {
    if (xi0 == 0) {
        throw std::invalid_argument("arithmetic_distance: xi0 must be >= 1");
    }
    // (xi, xi') and (-xi, -xi') give the same norm, so xi > 0 suffices.
    double best = 0.5;
    for (std::uint64_t a = 1; a <= xi0; ++a) {
        double as = reduce_multiple(a, s);
        for (std::uint64_t b = 1; b <= xi0; ++b) {
            double bt = reduce_multiple(b, t);
            best = std::min({best, torus_norm(as + bt), torus_norm(as - bt)});
        }
    }
    return best;
}

std::uint64_t mesh_bohr_count(const Mesh& mesh, const BohrSpec& spec) {
    // Point j is (j a + b) / D. It lies in B_xi(kappa) iff for some integer i,
    // |xi (j a + b) - i D| <= kappa D.
    const cpp_int den(mesh.denominator());
    const cpp_int a(mesh.stride());
    const cpp_int b(mesh.theta_num());
    const cpp_int xi(spec.xi < 0 ? -spec.xi : spec.xi);
    const Dyadic k = to_dyadic(spec.kappa);
    const cpp_int scale = cpp_int(1) << k.shift;
    const cpp_int step = xi * a * scale;
    const cpp_int width = k.mantissa * den;
    const cpp_int last = cpp_int(mesh.size() - 1);

    cpp_int lowest = floor_div(xi * b, den) - 1;
    cpp_int highest = ceil_div(xi * (last * a + b), den) + 1;
    cpp_int total = 0;
    for (cpp_int i = lowest; i <= highest; ++i) {
        cpp_int centre = (i * den - xi * b) * scale;
        cpp_int j_lo = std::max(cpp_int(0), ceil_div(centre - width, step));
        cpp_int j_hi = std::min(last, floor_div(centre + width, step));
        if (j_hi >= j_lo) {
            total += j_hi - j_lo + 1;
        }
    }
    return total.convert_to<std::uint64_t>();
}

std::optional<std::uint64_t> vinogradov_detect(double t, double interval_len, double kappa, double delta) {
    if (!(kappa > 0.0 && kappa < 1.0) || !(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("vinogradov_detect: kappa and delta must lie in (0, 1)");
    }
    if (!(interval_len > 0.0)) {
        throw std::invalid_argument("vinogradov_detect: interval length must be > 0");
    }
    if (interval_len <= 2.0 / delta || kappa >= delta / 100.0) {
        return std::nullopt;
    }
    const double bound = kVinogradovConstant * kappa / (delta * interval_len);
    const auto xi_max = static_cast<std::uint64_t>(std::floor(2.0 / delta));
    for (std::uint64_t xi = 1; xi <= xi_max; ++xi) {
        if (torus_norm(reduce_multiple(xi, t)) <= bound) {
            return xi;
        }
    }
    return std::nullopt;
}

} // namespace permfield
