#include "gaussmoser/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "gaussmoser/gauss.hpp"
#include "gaussmoser/norms.hpp"

namespace gaussmoser {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLineCut = 42.0; // gamma_1 mass beyond is below 1e-380

struct Branch {
    double lo, hi;      // clipped to [-kLineCut, kLineCut]
    double v_lo, v_hi;  // |h'| just inside each end
    bool increasing;
};

std::vector<Branch> gradient_branches(const Profile& p) {
    std::vector<double> knots;
    knots.push_back(-kLineCut);
    for (double b : p.breakpoints)
        if (b > -kLineCut && b < kLineCut) knots.push_back(b);
    knots.push_back(kLineCut);
    std::sort(knots.begin(), knots.end());

    std::vector<Branch> out;
    for (size_t i = 0; i + 1 < knots.size(); ++i) {
        double lo = knots[i], hi = knots[i + 1];
        if (hi - lo < 1e-13) continue;
        double eps = std::min(1e-9, (hi - lo) * 1e-6);
        double v_lo = std::fabs(p.h_prime(lo + eps));
        double v_hi = std::fabs(p.h_prime(hi - eps));
        bool increasing = v_hi >= v_lo;
        // the level-set inversion needs one monotone piece per branch
        double prev = v_lo;
        for (int k = 1; k <= 16; ++k) {
            double v = std::fabs(p.h_prime(lo + (hi - lo) * k / 17.0));
            bool ok = increasing ? v + 1e-10 * (1.0 + v) >= prev
                                 : v <= prev * (1.0 + 1e-10) + 1e-10;
            if (!ok)
                throw std::invalid_argument(
                    "gradient_rearrangement: |h'| not monotone between "
                    "breakpoints");
            prev = v;
        }
        out.push_back({lo, hi, v_lo, v_hi, increasing});
    }
    return out;
}

// Gaussian measure of {tau in (lo,hi) : |h'(tau)| > y} on a monotone branch.
double branch_measure_above(const Profile& p, const Branch& br, double y) {
    if (y >= std::max(br.v_lo, br.v_hi)) return 0.0;
    double full = gauss_tail(br.lo) - gauss_tail(br.hi);
    if (y < std::min(br.v_lo, br.v_hi)) return full;
    double lo = br.lo, hi = br.hi;
    for (int i = 0; i < 120; ++i) {
        double mid = 0.5 * (lo + hi);
        bool above = std::fabs(p.h_prime(mid)) > y;
        if (above == br.increasing) hi = mid; else lo = mid;
        if (hi - lo < 1e-13 * (1.0 + std::fabs(hi))) break;
    }
    double c = 0.5 * (lo + hi);
    return br.increasing ? gauss_tail(c) - gauss_tail(br.hi)
                         : gauss_tail(br.lo) - gauss_tail(c);
}

} // namespace

std::function<double(double)> signed_rearrangement(const Profile& p) {
    auto h = p.h;
    return [h](double s) { return h(gauss_tail_inv(s)); };
}

RearrangedFunction gradient_rearrangement(const Profile& p) {
    auto branches = std::make_shared<std::vector<Branch>>(gradient_branches(p));
    auto prof = std::make_shared<Profile>(p);

    auto measure_above = [branches, prof](double y) {
        double m = 0.0;
        for (const auto& br : *branches)
            m += branch_measure_above(*prof, br, y);
        return m;
    };

    RearrangedFunction out;
    out.support_end = std::min(1.0, measure_above(0.0));
    out.value = [measure_above](double s) {
        if (!(s > 0.0) || s >= 1.0)
            throw std::domain_error("rearrangement: s outside (0,1)");
        if (measure_above(0.0) <= s) return 0.0;
        double lo = 0.0, hi = 1.0;
        for (int i = 0; i < 200 && measure_above(hi) > s; ++i) {
            lo = hi;
            hi *= 2.0;
        }
        for (int i = 0; i < 120; ++i) {
            double mid = 0.5 * (lo + hi);
            (measure_above(mid) > s ? lo : hi) = mid;
            if (hi - lo < 1e-12 * (1.0 + hi)) break;
        }
        return 0.5 * (lo + hi);
    };
    return out;
}

double maximal_function(const RearrangedFunction& f, double s,
                        const Quadrature& q) {
    if (!(s > 0.0) || !(s < 1.0))
        throw std::domain_error("maximal_function: s outside (0,1)");
    // (1/s) int_0^s f(r) dr = int_0^inf f(s e^{-x}) e^{-x} dx; the
    // integrand switches on at x = log(s/support_end) and kinks at the
    // declared shape switches, so the segments split there
    auto integrand = [&](double x) {
        double w = std::exp(-x);
        double r = s * w;
        if (!(r > 0.0)) return 0.0; // below the underflow floor
        return f.value(r) * w;
    };
    double x0 = 0.0;
    if (f.support_end < 1.0 && s > f.support_end)
        x0 = std::log(s / f.support_end);
    std::vector<double> xs{x0};
    for (double b : f.breakpoints)
        if (b > 0.0 && b < s) xs.push_back(std::log(s / b));
    std::sort(xs.begin(), xs.end());
    double total = 0.0;
    try {
        for (size_t i = 0; i + 1 < xs.size(); ++i)
            total += integrate(integrand, xs[i], xs[i + 1], q);
    } catch (const IntegrationError&) {
        return std::numeric_limits<double>::infinity();
    }
    double tail = integrate_to_inf_or_inf(integrand, xs.back(), q);
    return total + tail;
}

double gauss_line_integral(const std::function<double(double)>& fn,
                           const std::vector<double>& knots,
                           const Quadrature& q) {
    std::vector<double> pts;
    pts.push_back(-kLineCut);
    for (double k : knots)
        if (k > -kLineCut && k < kLineCut) pts.push_back(k);
    for (double a : {-20.0, -8.0, -2.0, 0.0, 2.0, 8.0, 20.0}) pts.push_back(a);
    pts.push_back(kLineCut);
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1] - pts[i] < 1e-14) continue;
        total += integrate(
            [&](double t) { return fn(t) * gauss_density(t); }, pts[i],
            pts[i + 1], q);
    }
    return total;
}

std::pair<double, double> median_and_mean(const Profile& p,
                                          const Quadrature& q) {
    double med = p.h(0.0);
    double mv = gauss_line_integral(p.h, p.breakpoints, q);
    return {med, mv};
}

std::pair<double, double> med_mv_bound(const Profile& p, const Quadrature& q) {
    auto [med, mv] = median_and_mean(p, q);
    double grad_l1 = gauss_line_integral(
        [&](double t) { return std::fabs(p.h_prime(t)); }, p.breakpoints, q);
    return {std::fabs(med - mv), std::sqrt(M_PI / 2.0) * grad_l1};
}

double symubound_rhs(const RearrangedFunction& grad_star, double s,
                     const Quadrature& q) {
    if (!(s > 0.0) || !(s <= 0.5))
        throw std::domain_error("symubound_rhs: s outside (0,1/2]");
    double first = maximal_function(grad_star, s, q) * s / isoperimetric(s);
    if (!std::isfinite(first)) return kInf;
    double second = 0.0;
    if (s < 0.5) {
        double hi = std::min(0.5, std::max(s, grad_star.support_end));
        if (hi > s)
            second = integrate(
                [&](double r) { return grad_star.value(r) / isoperimetric(r); },
                s, hi, q);
    }
    return first + second;
}

std::pair<double, double> polya_szego_check(const Profile& p,
                                            const YoungFunction& B,
                                            const Quadrature& q) {
    // lhs: -u°'(s) I(s) = h'(PhiInv(s)); modular over the unit interval,
    // geometric shells toward both endpoints
    auto w = [&p](double s) {
        s = std::min(std::max(s, 1e-300), 1.0 - 1e-16);
        return std::fabs(p.h_prime(gauss_tail_inv(s)));
    };
    auto modular_unit = [&B, w, &q](double lambda) {
        double lower = integrate_from_zero(
            [&](double s) { return B.value(w(s) / lambda); }, 0.5, q);
        if (!std::isfinite(lower)) return kInf;
        double upper = integrate_from_zero(
            [&](double r) { return B.value(w(1.0 - r) / lambda); }, 0.5, q);
        if (!std::isfinite(upper)) return kInf;
        return lower + upper;
    };
    double lhs = luxemburg_norm_from_modular(modular_unit).value;

    // rhs: Gaussian-route modular of |h'|
    auto modular_gauss = [&p, &B, &q](double lambda) {
        try {
            return gauss_line_integral(
                [&](double t) {
                    return B.value(std::fabs(p.h_prime(t)) / lambda);
                },
                p.breakpoints, q);
        } catch (const IntegrationError&) {
            return kInf;
        }
    };
    double rhs = luxemburg_norm_from_modular(modular_gauss).value;
    return {lhs, rhs};
}

std::vector<double> sample_rearrangement(std::vector<double> v) {
    for (auto& x : v) x = std::fabs(x);
    std::sort(v.begin(), v.end(), std::greater<double>());
    return v;
}

std::pair<double, double> hardy_littlewood_check(
    const std::vector<double>& f, const std::vector<double>& g,
    const std::vector<int>& subset) {
    if (f.size() != g.size())
        throw std::invalid_argument("hardy_littlewood_check: length mismatch");
    double n = double(f.size());
    double lhs = 0.0;
    for (int i : subset) lhs += std::fabs(f[size_t(i)] * g[size_t(i)]);
    lhs /= n;
    auto fs = sample_rearrangement(f);
    auto gs = sample_rearrangement(g);
    double rhs = 0.0;
    for (size_t k = 0; k < subset.size(); ++k) rhs += fs[k] * gs[k];
    rhs /= n;
    return {lhs, rhs};
}

} // namespace gaussmoser
