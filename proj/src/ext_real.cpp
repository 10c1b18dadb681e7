#include "degrd/ext_real.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace degrd {

namespace {
constexpr double kLog10e = 0.43429448190325182765;
// exp(x) is exactly representable as a nonzero finite double for x in this range.
constexpr double kMaxLog = 709.78;
constexpr double kMinLog = -745.0;
}  // namespace

double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double hi = std::max(a, b);
    double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

ExtReal ExtReal::from_double(double v) {
    if (!std::isfinite(v)) throw std::domain_error("ExtReal: non-finite input");
    ExtReal r;
    if (v == 0.0) return r;
    r.sign_ = v > 0 ? 1 : -1;
    r.log_abs_ = std::log(std::fabs(v));
    return r;
}

ExtReal ExtReal::from_log(double log_abs, int sign) {
    if (std::isnan(log_abs) || log_abs == std::numeric_limits<double>::infinity())
        throw std::domain_error("ExtReal: invalid log magnitude");
    ExtReal r;
    if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return r;
    r.sign_ = sign > 0 ? 1 : -1;
    r.log_abs_ = log_abs;
    return r;
}

ExtReal ExtReal::exp(const ExtReal& x) {
    if (x.fits_double()) return from_log(x.to_double());
    if (x.sign_ < 0) return zero();
    throw std::overflow_error("ExtReal: exponent too large");
}

double ExtReal::log_abs() const {
    return sign_ == 0 ? -std::numeric_limits<double>::infinity() : log_abs_;
}

ExtReal ExtReal::log() const {
    if (sign_ <= 0) throw std::domain_error("ExtReal: log of non-positive value");
    return from_double(log_abs_);
}

double ExtReal::to_double() const {
    if (sign_ == 0) return 0.0;
    return sign_ * std::exp(log_abs_);
}

bool ExtReal::fits_double() const {
    return sign_ == 0 || (log_abs_ < kMaxLog && log_abs_ > kMinLog);
}

ExtReal ExtReal::operator-() const {
    ExtReal r = *this;
    r.sign_ = -r.sign_;
    return r;
}

ExtReal& ExtReal::operator+=(const ExtReal& o) {
    if (o.sign_ == 0) return *this;
    if (sign_ == 0) return *this = o;
    double hi = std::max(log_abs_, o.log_abs_);
    double lo = std::min(log_abs_, o.log_abs_);
    if (sign_ == o.sign_) {
        log_abs_ = hi + std::log1p(std::exp(lo - hi));
        return *this;
    }
    if (hi == lo) return *this = ExtReal{};
    int big_sign = log_abs_ > o.log_abs_ ? sign_ : o.sign_;
    double diff = std::exp(lo - hi);
    sign_ = big_sign;
    log_abs_ = hi + std::log1p(-diff);
    return *this;
}

ExtReal& ExtReal::operator-=(const ExtReal& o) { return *this += -o; }

ExtReal& ExtReal::operator*=(const ExtReal& o) {
    if (sign_ == 0 || o.sign_ == 0) return *this = ExtReal{};
    sign_ *= o.sign_;
    log_abs_ += o.log_abs_;
    return *this;
}

ExtReal& ExtReal::operator/=(const ExtReal& o) {
    if (o.sign_ == 0) throw std::domain_error("ExtReal: division by zero");
    if (sign_ == 0) return *this;
    sign_ *= o.sign_;
    log_abs_ -= o.log_abs_;
    return *this;
}

ExtReal ExtReal::pow(double p) const {
    if (sign_ < 0) throw std::domain_error("ExtReal: pow of negative value");
    if (sign_ == 0) {
        if (p > 0) return *this;
        throw std::domain_error("ExtReal: pow of zero with non-positive exponent");
    }
    return from_log(log_abs_ * p);
}

bool operator==(const ExtReal& a, const ExtReal& b) {
    if (a.sign_ != b.sign_) return false;
    return a.sign_ == 0 || a.log_abs_ == b.log_abs_;
}

bool operator<(const ExtReal& a, const ExtReal& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
    if (a.sign_ == 0) return false;
    return a.sign_ > 0 ? a.log_abs_ < b.log_abs_ : a.log_abs_ > b.log_abs_;
}

ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }
ExtReal min(const ExtReal& a, const ExtReal& b) { return b < a ? b : a; }

std::string ExtReal::str(int digits) const {
    if (sign_ == 0) return "0";
    if (fits_double()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.*g", digits, to_double());
        return buf;
    }
    double l10 = log_abs_ * kLog10e;
    double expo = std::floor(l10);
    double mant = std::pow(10.0, l10 - expo);
    if (mant >= 10.0) {
        mant /= 10.0;
        expo += 1.0;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s%.*fe%+.0f", sign_ < 0 ? "-" : "", digits - 1, mant, expo);
    return buf;
}

}  // namespace degrd
