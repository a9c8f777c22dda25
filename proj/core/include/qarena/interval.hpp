#pragma once

// Closed intervals with outward rounding: every operation rounds to nearest
// and then widens each bound by one ulp, so the exact real result set is
// always enclosed.

#include <stdexcept>
#include <string>

namespace qarena::limits {

class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double point);  // NOLINT(google-explicit-constructor)
    Interval(double lo, double hi);

    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
    double width() const { return hi - lo; }
    double midpoint() const;
    /// Smallest absolute value over the interval.
    double mig() const;
    /// Largest absolute value over the interval.
    double mag() const;

    friend bool operator==(const Interval&, const Interval&) = default;
};

double round_down(double v);
double round_up(double v);

Interval operator-(const Interval& a);
Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
/// Throws domain_error when the divisor contains zero.
Interval operator/(const Interval& a, const Interval& b);

Interval abs(const Interval& a);
/// Throws domain_error when the interval reaches below zero.
Interval sqrt(const Interval& a);
Interval pow(const Interval& a, int exponent);
Interval ceil(const Interval& a);
Interval floor(const Interval& a);

std::string to_string(const Interval& a);

}  // namespace qarena::limits
