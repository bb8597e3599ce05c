#include <permfield/rational.hpp>

#include <cmath>
#include <stdexcept>

namespace permfield {

namespace {

std::int64_t parse_i64(const std::string& text) {
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not an integer: '" + text + "'");
    }
    if (used != text.size()) {
        throw std::invalid_argument("not an integer: '" + text + "'");
    }
    return value;
}

bool is_integer_literal(const std::string& text) {
    std::size_t start = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
    if (start == text.size()) {
        return false;
    }
    for (std::size_t i = start; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') {
            return false;
        }
    }
    return true;
}

} // namespace

Rational::Rational(std::int64_t numerator, std::int64_t denominator) : num(numerator), den(denominator) {
    if (den < 1) {
        throw std::invalid_argument("rational denominator must be >= 1");
    }
}

double Rational::to_double() const {
    auto r = reduced_mod_one();
    return static_cast<double>(r.num) / static_cast<double>(r.den);
}

Rational Rational::reduced_mod_one() const {
    return Rational(static_cast<std::int64_t>(mod_floor(num, den)), den);
}

std::string Rational::to_string() const {
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!is_integer_literal(text)) {
            throw std::invalid_argument("not a rational: '" + text + "'");
        }
        return Rational(parse_i64(text), 1);
    }
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den)) {
        throw std::invalid_argument("not a rational: '" + text + "'");
    }
    std::int64_t d = parse_i64(den);
    if (d < 1) {
        throw std::invalid_argument("rational denominator must be >= 1: '" + text + "'");
    }
    return Rational(parse_i64(num), d);
}

TorusPoint parse_torus_point(const std::string& text) {
    if (text.find('/') != std::string::npos || is_integer_literal(text)) {
        return parse_rational(text);
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a torus point: '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(value)) {
        throw std::invalid_argument("not a torus point: '" + text + "'");
    }
    return value;
}

double to_double(const TorusPoint& point) {
    if (const auto* r = std::get_if<Rational>(&point)) {
        return r->to_double();
    }
    double x = std::get<double>(point);
    return x - std::floor(x);
}

} // namespace permfield
