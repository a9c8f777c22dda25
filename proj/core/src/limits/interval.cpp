#include "qarena/interval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace qarena::limits {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_finite_order(double lo, double hi) {
    if (std::isnan(lo) || std::isnan(hi)) throw domain_error("interval bound is NaN");
    if (lo > hi) throw std::invalid_argument("interval lower bound exceeds upper bound");
}

// |x|^n for x >= 0, rounded in one direction after every multiplication.
double pow_nonneg(double x, int n, bool up) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r = up ? round_up(r * x) : std::max(0.0, round_down(r * x));
    return r;
}

}  // namespace

Interval::Interval(double point) : lo(point), hi(point) { check_finite_order(lo, hi); }

Interval::Interval(double l, double h) : lo(l), hi(h) { check_finite_order(lo, hi); }

double Interval::midpoint() const { return lo + (hi - lo) / 2.0; }

double Interval::mig() const {
    if (contains_zero()) return 0.0;
    return std::min(std::fabs(lo), std::fabs(hi));
}

double Interval::mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }

double round_down(double v) { return std::isinf(v) ? v : std::nextafter(v, -kInf); }

double round_up(double v) { return std::isinf(v) ? v : std::nextafter(v, kInf); }

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator+(const Interval& a, const Interval& b) {
    return {round_down(a.lo + b.lo), round_up(a.hi + b.hi)};
}

Interval operator-(const Interval& a, const Interval& b) {
    return {round_down(a.lo - b.hi), round_up(a.hi - b.lo)};
}

Interval operator*(const Interval& a, const Interval& b) {
    const double p[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    double lo = kInf, hi = -kInf;
    for (double v : p) {
        // 0 * inf is NaN; a zero bound times anything contributes 0
        if (std::isnan(v)) v = 0.0;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {round_down(lo), round_up(hi)};
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw domain_error("division by an interval containing zero");
    const double q[] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
    return {round_down(*std::min_element(std::begin(q), std::end(q))),
            round_up(*std::max_element(std::begin(q), std::end(q)))};
}

Interval abs(const Interval& a) {
    if (a.lo >= 0) return a;
    if (a.hi <= 0) return -a;
    return {0.0, a.mag()};
}

Interval sqrt(const Interval& a) {
    if (a.lo < 0) throw domain_error("square root of an interval reaching below zero");
    return {std::max(0.0, round_down(std::sqrt(a.lo))), round_up(std::sqrt(a.hi))};
}

Interval pow(const Interval& a, int exponent) {
    if (exponent == 0) return {1.0};
    if (exponent < 0) return Interval(1.0) / pow(a, -exponent);
    if (exponent % 2 == 0) return {pow_nonneg(a.mig(), exponent, false), pow_nonneg(a.mag(), exponent, true)};
    const auto signed_pow = [&](double x, bool up) {
        return x >= 0 ? pow_nonneg(x, exponent, up) : -pow_nonneg(-x, exponent, !up);
    };
    return {signed_pow(a.lo, false), signed_pow(a.hi, true)};
}

Interval ceil(const Interval& a) { return {std::ceil(a.lo), std::ceil(a.hi)}; }

Interval floor(const Interval& a) { return {std::floor(a.lo), std::floor(a.hi)}; }

std::string to_string(const Interval& a) {
    const auto text = [](double v) {
        char buf[32];
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    };
    return "[" + text(a.lo) + ", " + text(a.hi) + "]";
}

}  // namespace qarena::limits
