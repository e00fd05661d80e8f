#include "gaussmoser/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gaussmoser/gauss.hpp"

namespace gaussmoser {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double log_A_of(const YoungFunction& A, double x) {
    return x > 0.0 ? A.log_value(x) : -kInf;
}
double log_A_of(const ConjugateYoung& A, double x) {
    if (!(x > 0.0)) return -kInf;
    double L = std::log(x);
    double f = A.value_factor_log(L);
    return f > 0.0 ? L + std::log(f) : -kInf;
}

// sorted interior shape switches of f within (0, 1), support edge included
std::vector<double> shape_breaks(const RearrangedFunction& f) {
    std::vector<double> out;
    if (f.support_end > 0.0 && f.support_end < 1.0)
        out.push_back(f.support_end);
    for (double b : f.breakpoints)
        if (b > 0.0 && b < 1.0) out.push_back(b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-15; }),
              out.end());
    return out;
}

// Integral of A(scale * f) over (0,1). Uses the Gaussian pullback when the
// function carries one (turning the near-singular endpoint into a smooth
// Gaussian-weighted tail), otherwise geometric shells toward 0. Values are
// assembled in the log domain so that a divergent modular surfaces as +inf
// rather than overflow noise. Quadrature segments split at the function's
// declared shape switches: a step hiding next to a panel edge is invisible
// to the error estimate otherwise.
template <class Y>
double modular_at_scale(const Y& A, const RearrangedFunction& f, double scale,
                        const Quadrature& q) {
    if (!(scale > 0.0)) return 0.0;
    auto breaks = shape_breaks(f);
    if (f.value_at_gauss) {
        double tau_start = -42.0;
        if (f.support_end < 1.0)
            tau_start = std::max(-42.0, gauss_tail_inv(f.support_end));
        std::vector<double> taus;
        taus.push_back(tau_start);
        for (double b : breaks) {
            double tb = gauss_tail_inv(b);
            if (tb > tau_start + 1e-13 && tb > -42.0) taus.push_back(tb);
        }
        if (tau_start < 0.0) taus.push_back(0.0);
        std::sort(taus.begin(), taus.end());
        auto integrand = [&](double tau) {
            double land = log_A_of(A, scale * f.value_at_gauss(tau)) -
                          0.5 * tau * tau - kLogSqrt2Pi;
            return land > 700.0 ? kInf : std::exp(land);
        };
        double total = 0.0;
        try {
            for (size_t i = 0; i + 1 < taus.size(); ++i)
                total += integrate(integrand, taus[i], taus[i + 1], q);
        } catch (const IntegrationError&) {
            return kInf;
        }
        double tail = integrate_to_inf_or_inf(integrand, taus.back(), q);
        if (!std::isfinite(tail)) return kInf;
        return total + tail;
    }
    auto eval = [&](double s) {
        double land = log_A_of(A, scale * f.value(s));
        return land > 700.0 ? kInf : std::exp(land);
    };
    // segment boundaries below and above s = 1/2
    double hi = std::min(0.5, f.support_end);
    double first = hi;
    std::vector<double> seg;
    for (double b : breaks)
        if (b < hi - 1e-15) seg.push_back(b);
    if (!seg.empty()) first = seg.front();
    double lower = integrate_from_zero(eval, first, q);
    if (!std::isfinite(lower)) return kInf;
    try {
        seg.push_back(hi);
        for (size_t i = 0; i + 1 < seg.size(); ++i)
            lower += integrate(eval, seg[i], seg[i + 1], q);
        double upper = 0.0;
        if (f.support_end > 0.5) {
            std::vector<double> up{0.5};
            for (double b : breaks)
                if (b > 0.5 + 1e-15) up.push_back(b);
            up.push_back(std::min(1.0, f.support_end));
            std::sort(up.begin(), up.end());
            for (size_t i = 0; i + 1 < up.size(); ++i)
                upper += integrate(eval, up[i], up[i + 1], q);
        }
        return lower + upper;
    } catch (const IntegrationError&) {
        return kInf;
    }
}

// Growth exponent of log A(f(Phi(tau))) in log tau. Above 2 the Gaussian
// weight e^{-tau^2/2} loses for every scaling, so the modular is infinite
// for all lambda and the norm carries the +inf tag.
inline bool beyond_every_scale(const YoungFunction& A,
                               const RearrangedFunction& f) {
    if (!f.value_at_gauss) return false;
    double t1 = 1e4, t2 = 1e8;
    double x1 = f.value_at_gauss(t1), x2 = f.value_at_gauss(t2);
    if (!(x1 > 0.0) || !(x2 > 0.0)) return false;
    double w1 = A.beta() * std::log(x1), w2 = A.beta() * std::log(x2);
    double slope = (w2 - w1) / (std::log(t2) - std::log(t1));
    return slope > 2.0 * (1.0 + 1e-9);
}
inline bool beyond_every_scale(const ConjugateYoung&,
                               const RearrangedFunction&) {
    return false; // conjugates grow like t log t, never beyond scaling
}

template <class Y>
NormResult luxemburg_impl(const Y& A, const RearrangedFunction& f,
                          const Quadrature& q) {
    if (beyond_every_scale(A, f))
        return {std::numeric_limits<double>::infinity(), 0.0,
                NormMethod::root_find};
    auto modular = [&](double lambda) {
        return modular_at_scale(A, f, 1.0 / lambda, q);
    };
    return luxemburg_norm_from_modular(modular);
}

template <class Y>
NormResult orlicz_impl(const Y& A, const RearrangedFunction& f,
                       const Quadrature& q) {
    auto scaled = [&](double k) { return modular_at_scale(A, f, k, q); };
    return orlicz_norm_via_scaled(scaled);
}

} // namespace

double young_modular(const YoungFunction& A, const RearrangedFunction& f,
                     double scale, const Quadrature& q) {
    return modular_at_scale(A, f, scale, q);
}

NormResult luxemburg_norm_from_modular(
    const std::function<double(double)>& modular) {
    // zero function: the modular vanishes at arbitrarily small lambda
    if (modular(1e-9) == 0.0) return {0.0, 0.0, NormMethod::closed_form};

    double lo, hi;
    double m1 = modular(1.0);
    int inf_streak = 0;
    if (m1 > 1.0) {
        lo = 1.0;
        hi = 2.0;
        for (int i = 0;; ++i) {
            double m = modular(hi);
            if (m <= 1.0) break;
            inf_streak = std::isfinite(m) ? 0 : inf_streak + 1;
            if (inf_streak > 40 || i > 900)
                return {kInf, 0.0, NormMethod::root_find};
            lo = hi;
            hi *= 2.0;
        }
    } else {
        hi = 1.0;
        lo = 0.5;
        for (int i = 0; modular(lo) <= 1.0; ++i) {
            hi = lo;
            lo *= 0.5;
            if (i > 1050) // modular stays <= 1 down to denormal scale
                return {0.0, modular(hi) - 1.0, NormMethod::root_find};
        }
    }
    // modular(lo) > 1 >= modular(hi), modular nonincreasing; log-log secant
    // with bisection fallback
    double m_lo = modular(lo), m_hi = modular(hi);
    double mid = hi;
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        // secant in log-log on odd steps; plain bisection on even steps
        // guarantees the bracket halves at least every other iteration
        if (i % 2 == 1 && std::isfinite(m_lo) && m_lo > 1.0 && m_hi > 0.0 &&
            m_hi < 1.0) {
            double llo = std::log(lo), lhi = std::log(hi);
            double glo = std::log(m_lo), ghi = std::log(m_hi);
            double cand = std::exp(llo + (lhi - llo) * (0.0 - glo) / (ghi - glo));
            if (cand > lo * (1.0 + 1e-15) && cand < hi * (1.0 - 1e-15))
                mid = cand;
        }
        double m = modular(mid);
        if (std::isfinite(m) && std::fabs(m - 1.0) < 5e-12)
            return {mid, m - 1.0, NormMethod::root_find};
        if (m > 1.0) {
            lo = mid;
            m_lo = m;
        } else {
            hi = mid;
            m_hi = m;
        }
        if (hi - lo < 1e-14 * hi) { mid = hi; break; }
    }
    return {mid, modular(mid) - 1.0, NormMethod::root_find};
}

NormResult orlicz_norm_via_scaled(
    const std::function<double(double)>& modular_at_scale, double seed_k) {
    auto u = [&](double lk) {
        double k = std::exp(lk);
        double m = modular_at_scale(k);
        return std::isfinite(m) ? (1.0 + m) / k : kInf;
    };
    if (modular_at_scale(1.0) == 0.0 && modular_at_scale(1e8) == 0.0)
        return {0.0, 0.0, NormMethod::inf_over_k};

    // walk downhill from the seed to a unimodal bracket
    double b = std::log(seed_k);
    double ub = u(b);
    double step = 1.0;
    double a = b - step, c = b + step;
    double ua = u(a), uc = u(c);
    for (int i = 0; i < 300 && ua < ub; ++i) {
        c = b; uc = ub;
        b = a; ub = ua;
        step *= 1.6;
        a = b - step;
        ua = u(a);
    }
    for (int i = 0; i < 300 && uc < ub; ++i) {
        a = b; ua = ub;
        b = c; ub = uc;
        step *= 1.6;
        c = b + step;
        uc = u(c);
    }
    // golden section on [a, c]
    const double gr = 0.6180339887498949;
    double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
    double f1 = u(x1), f2 = u(x2);
    for (int i = 0; i < 120 && c - a > 1e-12; ++i) {
        if (f1 < f2) {
            c = x2; x2 = x1; f2 = f1;
            x1 = c - gr * (c - a);
            f1 = u(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (c - a);
            f2 = u(x2);
        }
    }
    return {std::min(f1, f2), 0.0, NormMethod::inf_over_k};
}

NormResult luxemburg_norm(const YoungFunction& A, const RearrangedFunction& f,
                          const Quadrature& q) {
    return luxemburg_impl(A, f, q);
}
NormResult luxemburg_norm(const ConjugateYoung& A, const RearrangedFunction& f,
                          const Quadrature& q) {
    return luxemburg_impl(A, f, q);
}

NormResult orlicz_norm_inf(const YoungFunction& A, const RearrangedFunction& f,
                           const Quadrature& q) {
    return orlicz_impl(A, f, q);
}
NormResult orlicz_norm_inf(const ConjugateYoung& A, const RearrangedFunction& f,
                           const Quadrature& q) {
    return orlicz_impl(A, f, q);
}

double char_norm(const YoungFunction& A, double measure) {
    if (!(measure > 0.0) || !(measure <= 1.0))
        throw std::domain_error("char_norm: measure outside (0,1]");
    ConjugateYoung conj(A);
    return measure * conj.inverse(1.0 / measure);
}

namespace {

double marcinkiewicz_sup(const YoungFunction& A, const RearrangedFunction& f,
                         bool use_maximal, const Quadrature& q) {
    auto ratio = [&](double log_s) {
        double s = std::exp(log_s);
        double val = use_maximal ? maximal_function(f, s, q) : f.value(s);
        if (!(val > 0.0)) return 0.0;
        if (!std::isfinite(val)) return kInf;
        double denom = A.inverse_from_log(-log_s);
        if (!(denom > 0.0)) return kInf;
        return val / denom;
    };
    const int n = 512;
    double l_lo = std::log(1e-12), l_hi = std::log(1.0 - 1e-9);
    double best = 0.0, best_l = l_lo;
    for (int i = 0; i <= n; ++i) {
        double l = l_lo + (l_hi - l_lo) * i / n;
        double r = ratio(l);
        if (r > best) { best = r; best_l = l; }
    }
    if (!std::isfinite(best)) return best;
    // golden refinement on the bracketing cell pair
    double a = std::max(l_lo, best_l - (l_hi - l_lo) / n);
    double c = std::min(l_hi, best_l + (l_hi - l_lo) / n);
    const double gr = 0.6180339887498949;
    double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
    double f1 = ratio(x1), f2 = ratio(x2);
    for (int i = 0; i < 60; ++i) {
        if (f1 > f2) {
            c = x2; x2 = x1; f2 = f1;
            x1 = c - gr * (c - a);
            f1 = ratio(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (c - a);
            f2 = ratio(x2);
        }
    }
    return std::max({best, f1, f2});
}

} // namespace

double marcinkiewicz_M_norm(const YoungFunction& A, const RearrangedFunction& f,
                            const Quadrature& q) {
    return marcinkiewicz_sup(A, f, true, q);
}

double marcinkiewicz_m_norm(const YoungFunction& A, const RearrangedFunction& f,
                            const Quadrature& q) {
    return marcinkiewicz_sup(A, f, false, q);
}

double unit_inner_product(const RearrangedFunction& f,
                          const RearrangedFunction& g,
                          const Quadrature& q) {
    auto prod = [&](double s) { return f.value(s) * g.value(s); };
    std::vector<double> cuts;
    for (const auto* h : {&f, &g}) {
        if (h->support_end > 0.0 && h->support_end < 1.0)
            cuts.push_back(h->support_end);
        for (double b : h->breakpoints)
            if (b > 0.0 && b < 1.0) cuts.push_back(b);
    }
    cuts.push_back(0.5);
    std::sort(cuts.begin(), cuts.end());
    double lower = integrate_from_zero(prod, cuts.front(), q);
    if (!std::isfinite(lower)) return kInf;
    try {
        for (size_t i = 0; i + 1 < cuts.size(); ++i)
            lower += integrate(prod, cuts[i], cuts[i + 1], q);
        double upper = integrate_from_zero(
            [&](double r) { return prod(1.0 - r); }, 1.0 - cuts.back(), q);
        return lower + upper;
    } catch (const IntegrationError&) {
        return kInf;
    }
}

std::pair<double, double> holder_pair(const YoungFunction& A,
                                      const RearrangedFunction& f,
                                      const RearrangedFunction& g,
                                      const Quadrature& q) {
    double lhs = unit_inner_product(f, g, q);
    double nf = luxemburg_norm(A, f, q).value;
    ConjugateYoung conj(A);
    double ng = orlicz_norm_inf(conj, g, q).value;
    return {lhs, nf * ng};
}

} // namespace gaussmoser
