#ifndef GAUSSMOSER_TESTS_SUPPORT_HPP
#define GAUSSMOSER_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include "gaussmoser/gauss.hpp"
#include "gaussmoser/rearrange.hpp"
#include "gaussmoser/young.hpp"

namespace gmtest {

using namespace gaussmoser;

// attach the generic Gaussian pullback tau -> value(Phi(tau)); safe for
// bounded families whose value extends continuously to s = 0
inline void attach_gauss_form(RearrangedFunction& f) {
    auto v = f.value;
    f.value_at_gauss = [v](double tau) { return v(std::max(gauss_tail(tau), 1e-310)); };
}

inline RearrangedFunction rf_constant(double c, double end = 1.0) {
    RearrangedFunction f;
    f.support_end = end;
    f.value = [c, end](double s) { return s < end ? c : 0.0; };
    f.breakpoints = {end};
    attach_gauss_form(f);
    return f;
}

inline RearrangedFunction rf_linear_drop(double c, double end) {
    RearrangedFunction f;
    f.support_end = end;
    f.value = [c, end](double s) { return s < end ? c * (1.0 - s / end) : 0.0; };
    f.breakpoints = {end};
    attach_gauss_form(f);
    return f;
}

// c * (log(1/(N s)))^{1/beta} on (0, s0), with the stable Gaussian pullback.
inline RearrangedFunction rf_powerlog(double c, double N, double beta,
                                      double s0) {
    RearrangedFunction f;
    f.support_end = s0;
    f.breakpoints = {s0};
    f.value = [=](double s) {
        if (s >= s0) return 0.0;
        return c * std::pow(std::log(1.0 / (N * s)), 1.0 / beta);
    };
    f.value_at_gauss = [=](double tau) {
        double s = gauss_tail(tau);
        if (s >= s0) return 0.0;
        return c * std::pow(-log_gauss_tail(std::max(tau, 0.0)) - std::log(N),
                            1.0 / beta);
    };
    return f;
}

inline RearrangedFunction rf_power(double c, double alpha, double end = 1.0) {
    // c * s^{-alpha}, integrable for alpha < 1
    RearrangedFunction f;
    f.support_end = end;
    f.value = [=](double s) { return s < end ? c * std::pow(s, -alpha) : 0.0; };
    f.value_at_gauss = [=](double tau) {
        if (tau < -41.0) return 0.0; // s -> 1, outside the support iff end < 1
        double ls = tau >= 0.0 ? log_gauss_tail(tau)
                               : std::log(gauss_tail(tau));
        return ls < std::log(end) ? c * std::exp(-alpha * ls) : 0.0;
    };
    return f;
}

inline RearrangedFunction rf_scale(const RearrangedFunction& f, double c) {
    RearrangedFunction g;
    g.support_end = f.support_end;
    g.breakpoints = f.breakpoints;
    auto v = f.value;
    g.value = [v, c](double s) { return c * v(s); };
    if (f.value_at_gauss) {
        auto vg = f.value_at_gauss;
        g.value_at_gauss = [vg, c](double tau) { return c * vg(tau); };
    }
    return g;
}

inline RearrangedFunction rf_sum(const RearrangedFunction& f,
                                 const RearrangedFunction& g) {
    RearrangedFunction h;
    h.support_end = std::max(f.support_end, g.support_end);
    h.breakpoints = f.breakpoints;
    h.breakpoints.insert(h.breakpoints.end(), g.breakpoints.begin(),
                         g.breakpoints.end());
    auto a = f.value, b = g.value;
    h.value = [a, b](double s) { return a(s) + b(s); };
    if (f.value_at_gauss && g.value_at_gauss) {
        auto ag = f.value_at_gauss, bg = g.value_at_gauss;
        h.value_at_gauss = [ag, bg](double tau) { return ag(tau) + bg(tau); };
    }
    return h;
}

inline RearrangedFunction random_rf(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    switch (rng() % 4) {
        case 0: return rf_constant(0.2 + 2.0 * u(rng), 0.1 + 0.9 * u(rng));
        case 1: return rf_linear_drop(0.2 + 2.0 * u(rng), 0.1 + 0.9 * u(rng));
        case 2:
            return rf_powerlog(0.3 + 0.7 * u(rng), 1.0 + u(rng),
                               1.0 + 2.0 * u(rng), 0.05 + 0.3 * u(rng));
        default: return rf_power(0.2 + u(rng), 0.15 + 0.3 * u(rng), 1.0);
    }
}

// (A, f) pairs whose modular genuinely crosses 1: f grows no faster than
// the log-power profile matching A's own exponent.
inline RearrangedFunction random_matched_rf(std::mt19937_64& rng,
                                            const YoungFunction& A) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    switch (rng() % 3) {
        case 0: return rf_constant(0.2 + 2.0 * u(rng), 0.1 + 0.9 * u(rng));
        case 1: return rf_linear_drop(0.2 + 2.0 * u(rng), 0.1 + 0.9 * u(rng));
        default:
            // strictly slower growth than A's own exponent, away from the
            // critical edge where the norm sits on a divergence boundary
            return rf_powerlog(0.3 + 0.7 * u(rng), 1.0 + u(rng),
                               A.beta() * (1.05 + 0.45 * u(rng)),
                               0.05 + 0.3 * u(rng));
    }
}

inline YoungFunction random_proper_young(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    switch (rng() % 3) {
        case 0: return construct_head_tail(1.5 + 3.0 * u(rng), 0.6 + 2.4 * u(rng)).B;
        case 1: {
            // keep t0^beta moderate: doubles cannot resolve a Luxemburg
            // root sitting on a ramp steeper than ~1e9
            double beta = 2.5 + 2.0 * u(rng);
            double t0 = std::pow(2.5 + 2.0 * u(rng), 1.0 / beta);
            return construct_flattened(0.4 + u(rng), beta, t0);
        }
        default: return construct_envelope_M(1.3 + 2.0 * u(rng), 1.0 + 2.0 * u(rng));
    }
}

// nondecreasing piecewise-linear profile from knots and nonnegative slopes
inline Profile piecewise_linear_profile(const std::vector<double>& knots,
                                        const std::vector<double>& slopes) {
    auto h = [knots, slopes](double t) {
        double acc = 0.0;
        for (size_t j = 0; j + 1 < knots.size(); ++j) {
            double lo = knots[j], hi = knots[j + 1];
            double c = std::min(std::max(t, lo), hi);
            acc += slopes[j] * (c - lo);
        }
        return acc;
    };
    auto hp = [knots, slopes](double t) {
        for (size_t j = 0; j + 1 < knots.size(); ++j)
            if (t >= knots[j] && t < knots[j + 1]) return slopes[j];
        return 0.0;
    };
    Profile p;
    p.h = h;
    p.h_prime = hp;
    p.breakpoints = knots;
    return p;
}

inline Profile random_profile(std::mt19937_64& rng, int pieces = 3) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> knots;
    double t = -3.0 * u(rng) - 0.2;
    for (int i = 0; i <= pieces; ++i) {
        knots.push_back(t);
        t += 0.3 + 2.0 * u(rng);
    }
    std::vector<double> slopes;
    for (int i = 0; i < pieces; ++i) slopes.push_back(3.0 * u(rng));
    return piecewise_linear_profile(knots, slopes);
}

} // namespace gmtest

#endif
