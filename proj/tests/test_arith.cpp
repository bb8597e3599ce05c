#include <permfield/arith.hpp>
#include <permfield/field.hpp>
#include <permfield/random.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace permfield;

namespace {

// Brute-force membership of (j a + b)/D in B_xi(kappa), integer residues.
std::uint64_t brute_bohr_count(const Mesh& mesh, std::int64_t xi, double kappa) {
    std::uint64_t count = 0;
    const __int128 d = mesh.denominator();
    for (std::uint64_t j = 0; j < mesh.size(); ++j) {
        __int128 p = static_cast<__int128>(j) * mesh.stride() + mesh.theta_num();
        __int128 r = mod_floor(p * (xi < 0 ? -xi : xi), d);
        __int128 dist = std::min(r, d - r);
        if (static_cast<long double>(dist) <= static_cast<long double>(kappa) * static_cast<long double>(d)) {
            ++count;
        }
    }
    return count;
}

// Exact Lebesgue measure of the union of B_xi(kappa) over 1 <= xi <= xi0.
double union_measure(std::uint64_t xi0, double kappa) {
    std::vector<std::pair<double, double>> arcs;
    for (std::uint64_t xi = 1; xi <= xi0; ++xi) {
        double w = kappa / static_cast<double>(xi);
        for (std::uint64_t a = 0; a <= xi; ++a) {
            double c = static_cast<double>(a) / static_cast<double>(xi);
            arcs.emplace_back(std::max(0.0, c - w), std::min(1.0, c + w));
        }
    }
    std::sort(arcs.begin(), arcs.end());
    double total = 0.0;
    double lo = arcs[0].first;
    double hi = arcs[0].second;
    for (const auto& [a, b] : arcs) {
        if (a > hi) {
            total += hi - lo;
            lo = a;
            hi = b;
        } else {
            hi = std::max(hi, b);
        }
    }
    return total + (hi - lo);
}

} // namespace

TEST(TorusNorm, Basics) {
    EXPECT_DOUBLE_EQ(torus_norm(0.75), 0.25);
    EXPECT_DOUBLE_EQ(torus_norm(0.0), 0.0);
    EXPECT_DOUBLE_EQ(torus_norm(-0.3), 0.3);
    EXPECT_EQ(torus_norm(Rational(13, 5)), Rational(2, 5));
    EXPECT_EQ(torus_norm(Rational(-1, 3)), Rational(1, 3));
    EXPECT_TRUE(torus_norm_at_most(Rational(1, 8), 0.125));
    EXPECT_FALSE(torus_norm_at_most(Rational(1, 8), 0.12499999999999999));
}

TEST(Classify, Examples) {
    auto a = classify(Rational(1, 3), 3, 0.1);
    EXPECT_EQ(a.kind, ArcKind::major);
    EXPECT_EQ(a.witness, 3u);
    double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    auto b = classify(golden, 10, 1e-3);
    EXPECT_EQ(b.kind, ArcKind::minor);
    EXPECT_FALSE(b.witness.has_value());
    auto c = classify(0.5001, 2, 0.001);
    EXPECT_EQ(c.kind, ArcKind::major);
    EXPECT_EQ(c.witness, 2u);
    EXPECT_THROW(classify(0.3, 0, 0.1), std::invalid_argument);
    EXPECT_THROW(classify(0.3, 2, 0.5), std::invalid_argument);
}

TEST(Classify, AgreesWithBruteForce) {
    RandomStream s(12);
    for (int i = 0; i < 10000; ++i) {
        double t = s.uniform();
        std::uint64_t xi0 = 1 + s.uniform_int(0, 9);
        double kappa = 0.001 + 0.1 * s.uniform();
        std::optional<std::uint64_t> first;
        for (std::uint64_t xi = 1; xi <= xi0 && !first; ++xi) {
            double x = std::fmod(static_cast<double>(xi) * t, 1.0);
            if (std::min(x, 1.0 - x) <= kappa) {
                first = xi;
            }
        }
        auto c = classify(t, xi0, kappa);
        ASSERT_EQ(c.kind == ArcKind::major, first.has_value()) << t;
        ASSERT_EQ(c.witness, first);
    }
}

TEST(Classify, MajorMeasureMatchesUnionOracle) {
    RandomStream s(13);
    const int n = 200000;
    for (std::uint64_t xi0 : {1u, 2u, 3u, 4u}) {
        const double kappa = 0.03;
        int hits = 0;
        for (int i = 0; i < n; ++i) {
            hits += classify(s.uniform(), xi0, kappa).kind == ArcKind::major;
        }
        double p = union_measure(xi0, kappa);
        double f = static_cast<double>(hits) / n;
        EXPECT_NEAR(f, p, 4.0 * std::sqrt(p * (1 - p) / n)) << xi0;
        EXPECT_LE(p, 2.0 * kappa * static_cast<double>(xi0) + 1e-15);
    }
}

TEST(ArithmeticDistance, Examples) {
    EXPECT_NEAR(arithmetic_distance(0.25, 0.5, 2), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(arithmetic_distance(0.3, 0.3, 1), 0.0);
    RandomStream s(14);
    for (int i = 0; i < 100; ++i) {
        double a = s.uniform();
        double b = s.uniform();
        EXPECT_DOUBLE_EQ(arithmetic_distance(a, b, 5), arithmetic_distance(b, a, 5));
        EXPECT_LE(arithmetic_distance(a, b, 5), torus_norm(a - b) + 1e-15);
        // Exhaustive oracle over signed frequencies.
        double best = 0.5;
        for (int x = -5; x <= 5; ++x) {
            for (int y = -5; y <= 5; ++y) {
                if (x != 0 && y != 0) {
                    double v = std::fmod(x * a + y * b, 1.0);
                    if (v < 0) {
                        v += 1.0;
                    }
                    best = std::min({best, v, 1.0 - v});
                }
            }
        }
        EXPECT_NEAR(arithmetic_distance(a, b, 5), best, 1e-14);
    }
}

TEST(BohrCount, Examples) {
    EXPECT_EQ(mesh_bohr_count(Mesh(1000, 0, 1), BohrSpec(1, 0.1)), 201u);
    EXPECT_EQ(mesh_bohr_count(Mesh(1000, 0, 1), BohrSpec(-1, 0.1)), 201u);
    EXPECT_THROW(BohrSpec(0, 0.1), std::invalid_argument);
    EXPECT_THROW(BohrSpec(1, 0.5), std::invalid_argument);
    // Tiny kappa with a rotation: only exact hits, none here.
    std::uint64_t c = mesh_bohr_count(Mesh(997, 1, 7), BohrSpec(3, 1e-12));
    EXPECT_TRUE(c == 0 || c == 3);
}

TEST(BohrCount, MatchesEnumeration) {
    RandomStream s(15);
    for (int i = 0; i < 300; ++i) {
        std::uint64_t q = 1 + s.uniform_int(0, 9999);
        std::int64_t den = static_cast<std::int64_t>(1 + s.uniform_int(0, 12));
        std::int64_t num = static_cast<std::int64_t>(s.uniform_int(0, static_cast<std::uint64_t>(den))) *
                           (s.uniform() < 0.5 ? 1 : -1);
        std::int64_t xi = static_cast<std::int64_t>(1 + s.uniform_int(0, 40)) * (s.uniform() < 0.5 ? 1 : -1);
        double kappa = i % 3 == 0 ? 0.125 : 0.49 * s.uniform_open();
        Mesh mesh(q, num, den);
        std::uint64_t exact = mesh_bohr_count(mesh, BohrSpec(xi, kappa));
        ASSERT_EQ(exact, brute_bohr_count(mesh, xi, kappa)) << q << " " << num << "/" << den << " " << xi;
        double diff = std::fabs(static_cast<double>(exact) - 2.0 * kappa * static_cast<double>(q));
        EXPECT_LE(diff, 2.0 * std::abs(xi) + 2.0);
    }
}

TEST(Vinogradov, DetectsSevenths) {
    double t = 1.0 / 7.0 + 1e-9;
    // delta = 0.4 only searches xi <= 5.
    EXPECT_FALSE(vinogradov_detect(t, 1e6, 1e-3, 0.4).has_value());
    EXPECT_EQ(vinogradov_detect(t, 1e6, 1e-3, 0.25), 7u);
    // M <= 2/delta branch, and the literal M = 4 case whose search is empty.
    EXPECT_FALSE(vinogradov_detect(t, 2.0, 1e-3, 0.9).has_value());
    EXPECT_FALSE(vinogradov_detect(t, 4.0, 1e-3, 0.9).has_value());
    // kappa >= delta/100 branch.
    EXPECT_FALSE(vinogradov_detect(t, 1e6, 0.01, 0.9).has_value());
    EXPECT_THROW(vinogradov_detect(t, 1e6, 0.0, 0.5), std::invalid_argument);
}

TEST(Vinogradov, RandomPointsRarelyDetected) {
    RandomStream s(16);
    int detected = 0;
    for (int i = 0; i < 1000; ++i) {
        detected += vinogradov_detect(s.uniform(), 1e6, 1e-6, 0.01).has_value();
    }
    EXPECT_LT(detected, 50);
}
