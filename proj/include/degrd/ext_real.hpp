#pragma once

#include <string>

namespace degrd {

// Real number stored as sign and natural log of magnitude. The constant chain
// produces values like exp(1e7) that no double can hold; this keeps them
// comparable and printable.
class ExtReal {
public:
    ExtReal() = default;

    static ExtReal from_double(double v);
    // e^{log_abs}, with the given sign.
    static ExtReal from_log(double log_abs, int sign = 1);
    // e^{x}; saturates to zero when x is far below the double range of log values.
    static ExtReal exp(const ExtReal& x);
    static ExtReal zero() { return ExtReal{}; }

    int sign() const { return sign_; }
    bool is_zero() const { return sign_ == 0; }
    // ln|x|; -inf for zero.
    double log_abs() const;
    // Natural log of a positive value, as an ExtReal.
    ExtReal log() const;

    // Nearest double; overflows to +-inf and underflows to 0.
    double to_double() const;
    bool fits_double() const;

    ExtReal operator-() const;
    ExtReal& operator+=(const ExtReal& o);
    ExtReal& operator-=(const ExtReal& o);
    ExtReal& operator*=(const ExtReal& o);
    ExtReal& operator/=(const ExtReal& o);

    friend ExtReal operator+(ExtReal a, const ExtReal& b) { return a += b; }
    friend ExtReal operator-(ExtReal a, const ExtReal& b) { return a -= b; }
    friend ExtReal operator*(ExtReal a, const ExtReal& b) { return a *= b; }
    friend ExtReal operator/(ExtReal a, const ExtReal& b) { return a /= b; }

    // x^p for x > 0.
    ExtReal pow(double p) const;

    friend bool operator==(const ExtReal& a, const ExtReal& b);
    friend bool operator<(const ExtReal& a, const ExtReal& b);
    friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }
    friend bool operator>(const ExtReal& a, const ExtReal& b) { return b < a; }
    friend bool operator>=(const ExtReal& a, const ExtReal& b) { return !(a < b); }

    // Scientific notation with an unbounded decimal exponent, e.g. "3.14159e+4352117".
    std::string str(int digits = 8) const;

private:
    int sign_ = 0;
    double log_abs_ = 0.0;
};

ExtReal max(const ExtReal& a, const ExtReal& b);
ExtReal min(const ExtReal& a, const ExtReal& b);

// ln(e^a + e^b) for plain doubles, stable for large arguments.
double log_add(double a, double b);

}  // namespace degrd
