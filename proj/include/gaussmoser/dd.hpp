#ifndef GAUSSMOSER_DD_HPP
#define GAUSSMOSER_DD_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace gaussmoser {

// Double-double arithmetic: an unevaluated sum hi + lo of two doubles giving
// roughly 31-32 significant decimal digits. Used as the extended-precision
// evaluation path for tail quantities whose leading terms cancel far beyond
// what 53-bit doubles can resolve.
struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double h) : hi(h), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi + lo; }
};

namespace detail {

inline dd two_sum(double a, double b) {
    double s = a + b;
    double v = s - a;
    double e = (a - (s - v)) + (b - v);
    return {s, e};
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    double e = b - (s - a);
    return {s, e};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    double e = std::fma(a, b, -p);
    return {p, e};
}

} // namespace detail

inline dd operator+(dd a, dd b) {
    dd s = detail::two_sum(a.hi, b.hi);
    double e = s.lo + a.lo + b.lo;
    return detail::quick_two_sum(s.hi, e);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
    dd p = detail::two_prod(a.hi, b.hi);
    double e = p.lo + a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, e);
}

inline dd operator/(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = a - dd(q1) * b;
    double q2 = r.hi / b.hi;
    r = r - dd(q2) * b;
    double q3 = r.hi / b.hi;
    dd q = detail::quick_two_sum(q1, q2);
    return q + dd(q3);
}

inline dd operator+(dd a, double b) { return a + dd(b); }
inline dd operator+(double a, dd b) { return dd(a) + b; }
inline dd operator-(dd a, double b) { return a - dd(b); }
inline dd operator-(double a, dd b) { return dd(a) - b; }
inline dd operator*(dd a, double b) { return a * dd(b); }
inline dd operator*(double a, dd b) { return dd(a) * b; }
inline dd operator/(dd a, double b) { return a / dd(b); }
inline dd operator/(double a, dd b) { return dd(a) / b; }

inline dd& operator+=(dd& a, dd b) { a = a + b; return a; }
inline dd& operator-=(dd& a, dd b) { a = a - b; return a; }
inline dd& operator*=(dd& a, dd b) { a = a * b; return a; }
inline dd& operator/=(dd& a, dd b) { a = a / b; return a; }

inline bool operator<(dd a, dd b)  { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b)  { return b < a; }
inline bool operator<=(dd a, dd b) { return !(b < a); }
inline bool operator>=(dd a, dd b) { return !(a < b); }
inline bool operator==(dd a, dd b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(dd a, dd b) { return !(a == b); }

inline dd fabs(dd a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }
inline double to_double(dd a) { return a.hi + a.lo; }

inline dd ldexp(dd a, int n) { return {std::ldexp(a.hi, n), std::ldexp(a.lo, n)}; }

inline dd sqrt(dd a) {
    if (a.hi == 0.0 && a.lo == 0.0) return dd(0.0);
    double x = 1.0 / std::sqrt(a.hi);
    double y = a.hi * x;
    // One Newton step on y ~ sqrt(a): y + (a - y^2) * x / 2
    dd r = (a - detail::two_prod(y, y)) * dd(x * 0.5);
    return dd(y) + r;
}

namespace ddc {
// Constants to double-double precision.
inline const dd ln2{6.9314718055994530942e-01, 2.3190468138462995584e-17};
inline const dd pi{3.1415926535897932385e+00, 1.2246467991473531772e-16};
inline const dd sqrt_2pi{2.5066282746310007e+00, -1.8328579980459167e-16};
inline const dd log_sqrt_2pi{9.189385332046728e-01, -3.8782941580672414e-17};
inline const dd sqrt_pi_over_2{1.2533141373155003e+00, -9.164289990229583e-17};
} // namespace ddc

inline dd exp(dd a) {
    // e^a = 2^m e^r with r = a - m ln2, |r| <= ln2/2, then Taylor in r.
    if (a.hi > 709.0) return dd(std::numeric_limits<double>::infinity());
    if (a.hi < -709.0) return dd(0.0);
    double m = std::round(a.hi / 0.69314718055994531);
    dd r = a - ddc::ln2 * dd(m);
    dd sum = dd(1.0) + r;
    dd term = r;
    for (int k = 2; k < 32; ++k) {
        term = term * r / dd(double(k));
        sum += term;
        if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) break;
    }
    return ldexp(sum, int(m));
}

inline dd log(dd a) {
    // Newton iteration on exp(y) = a, seeded from the double log.
    double y0 = std::log(a.hi);
    dd y{y0, 0.0};
    for (int i = 0; i < 3; ++i) {
        dd e = exp(y);
        y = y + (a - e) / e;
    }
    return y;
}

inline dd log1p(dd a) {
    if (std::fabs(a.hi) > 0.5) return log(dd(1.0) + a);
    // log(1+a) = a - a^2/2 + a^3/3 - ...
    dd sum = a;
    dd pw = a;
    for (int k = 2; k < 64; ++k) {
        pw = pw * a;
        dd term = pw / dd(double(k));
        sum = (k % 2 == 0) ? sum - term : sum + term;
        if (std::fabs(term.hi) < 1e-35 * std::fabs(sum.hi)) break;
    }
    return sum;
}

inline dd pow(dd a, dd p) { return exp(p * log(a)); }
inline dd pow(dd a, double p) { return exp(dd(p) * log(a)); }

} // namespace gaussmoser

#endif
