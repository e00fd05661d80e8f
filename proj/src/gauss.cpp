#include "gaussmoser/gauss.hpp"

#include <cmath>
#include <stdexcept>

namespace gaussmoser {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt2Pi = 2.5066282746310005024;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

inline double to_double(double x) { return x; }

// Laplace continued fraction for the Mills ratio,
//   H(t) = 1/(t + 1/(t + 2/(t + 3/(t + ...)))),
// evaluated by the modified Lentz algorithm. Converges for t > 0; used
// only for t >= 4 where the iteration count stays moderate.
template <class R>
R mills_cf(R t, double tol, int max_iter) {
    using std::fabs;
    R tiny{1e-300};
    R f = t;
    if (!(f > R{0.0})) f = tiny;
    R c = f, d = R{0.0};
    for (int n = 1; n <= max_iter; ++n) {
        R an{double(n)};
        d = t + an * d;
        if (fabs(d) < tiny) d = tiny;
        c = t + an / c;
        if (fabs(c) < tiny) c = tiny;
        d = R{1.0} / d;
        R delta = c * d;
        f = f * delta;
        if (std::fabs(to_double(delta - R{1.0})) < tol) break;
    }
    return R{1.0} / f;
}

// Lower Gaussian integral via the all-positive series
//   \int_0^t e^{-tau^2/2} dtau = e^{-t^2/2} sum_{n>=0} t^{2n+1}/(2n+1)!!.
// Only used in dd where the e^{t^2/2} cancellation against the half mass
// still leaves ample precision for t <= 4.5.
dd mills_series_dd(dd t) {
    dd t2 = t * t;
    dd term = t;
    dd sum = t;
    for (int n = 1; n < 300; ++n) {
        term = term * t2 / dd(double(2 * n + 1));
        sum += term;
        if (std::fabs(term.hi) < 1e-36 * std::fabs(sum.hi)) break;
    }
    // H(t) = sqrt(2pi) e^{t^2/2} Phi(t) = sqrt(pi/2) e^{t^2/2} - sum
    return ddc::sqrt_pi_over_2 * exp(ldexp(t2, -1)) - sum;
}

} // namespace

double gauss_density(double t) {
    return std::exp(-0.5 * t * t) / kSqrt2Pi;
}

double mills_ratio(double t) {
    if (!(t >= 0.0)) throw std::domain_error("mills_ratio: t must be >= 0");
    if (t < 8.0)
        return 0.5 * std::erfc(t / kSqrt2) * kSqrt2Pi * std::exp(0.5 * t * t);
    return mills_cf(t, 1e-17, 200);
}

double gauss_tail(double t) {
    if (!std::isfinite(t)) throw std::domain_error("gauss_tail: non-finite input");
    if (t < 0.0) return 1.0 - gauss_tail(-t);
    if (t <= 36.0) return 0.5 * std::erfc(t / kSqrt2);
    return std::exp(log_gauss_tail(t));
}

double log_gauss_tail(double t) {
    if (!std::isfinite(t) || t < 0.0)
        throw std::domain_error("log_gauss_tail: t must be finite and >= 0");
    if (t < 8.0) return std::log(0.5 * std::erfc(t / kSqrt2));
    return -0.5 * t * t - kLogSqrt2Pi + std::log(mills_cf(t, 1e-17, 200));
}

double gauss_tail_inv(double s) {
    if (!(s > 0.0) || !(s < 1.0))
        throw std::domain_error("gauss_tail_inv: s must lie in (0,1)");
    if (s == 0.5) return 0.0;
    const bool flip = s > 0.5;
    const double p = flip ? 1.0 - s : s;
    const double target = std::log(p);
    // Seed: asymptotic for small p, linearization near the median otherwise.
    double t;
    if (p < 0.1) {
        t = std::sqrt(-2.0 * target);
        // one refinement of the asymptotic seed: Phi ~ phi(t)/t
        double corr = std::log(t) + kLogSqrt2Pi;
        double tt = -2.0 * (target + corr);
        if (tt > 0.0) t = std::sqrt(tt);
    } else {
        t = (0.5 - p) * kSqrt2Pi;
    }
    double lo = 0.0, hi = 40.0;
    for (int it = 0; it < 100; ++it) {
        double g = log_gauss_tail(t) - target; // decreasing in t
        if (g > 0.0) lo = t; else hi = t;
        double step = g * mills_ratio(t); // Newton: dlogPhi/dt = -1/H
        double tn = t + step;
        if (!(tn > lo) || !(tn < hi)) tn = 0.5 * (lo + hi);
        if (std::fabs(tn - t) < 1e-15 * (1.0 + std::fabs(t))) { t = tn; break; }
        t = tn;
    }
    return flip ? -t : t;
}

double isoperimetric(double s) {
    if (!(s >= 0.0) || !(s <= 1.0))
        throw std::domain_error("isoperimetric: s must lie in [0,1]");
    double p = s > 0.5 ? 1.0 - s : s;
    if (p <= 0.0) return 0.0;
    if (p == 0.5) return 1.0 / kSqrt2Pi;
    double t = gauss_tail_inv(p);
    return p / mills_ratio(t);
}

dd mills_ratio_dd(dd t) {
    if (t.hi < 3.0) return mills_series_dd(t);
    return mills_cf(t, 1e-34, 20000);
}

dd log_gauss_tail_dd(dd t) {
    return ldexp(-(t * t), -1) - ddc::log_sqrt_2pi + log(mills_ratio_dd(t));
}

dd gauss_tail_dd(dd t) {
    if (t.hi < 0.0) return dd(1.0) - gauss_tail_dd(-t);
    return exp(log_gauss_tail_dd(t));
}

} // namespace gaussmoser
