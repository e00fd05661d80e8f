#include "gaussmoser/moser.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gaussmoser/gauss.hpp"
#include "json.hpp"

namespace gaussmoser {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kSqrt2Pi = 2.5066282746310005024;

// prefix integrals of a smooth weight on [a, inf), geometric panel cache
class Cumulative {
  public:
    Cumulative(std::function<double(double)> w, double a)
        : w_(std::move(w)), knots_{a}, prefix_{0.0} {}

    double operator()(double x) const {
        if (x <= knots_.front()) return 0.0;
        extend(x);
        auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
        size_t idx = size_t(it - knots_.begin()) - 1;
        return prefix_[idx] + panel(knots_[idx], x);
    }

  private:
    void extend(double x) const {
        while (knots_.back() < x) {
            double last = knots_.back();
            double width = std::max(0.5, last - knots_.front());
            double next = last + std::min(width, 32.0);
            prefix_.push_back(prefix_.back() + panel(last, next));
            knots_.push_back(next);
        }
    }
    double panel(double a, double b) const {
        Quadrature q;
        q.rel_tol = 1e-13;
        return integrate(w_, a, b, q);
    }
    std::function<double(double)> w_;
    mutable std::vector<double> knots_;
    mutable std::vector<double> prefix_;
};

double target_exponent_for(ReductionKind kind, double beta) {
    if (kind == ReductionKind::linf_median || kind == ReductionKind::linf_mean)
        return 2.0;
    return 2.0 * beta / (2.0 + beta);
}

// golden minimization with downhill bracket expansion
double golden_min(const std::function<double(double)>& u, double seed,
                  double step, double tol, double* arg_out) {
    double b = seed, ub = u(b);
    double a = b - step, c = b + step;
    double ua = u(a), uc = u(c);
    for (int i = 0; i < 200 && ua < ub; ++i) {
        c = b; uc = ub;
        b = a; ub = ua;
        step *= 1.7;
        a = b - step;
        ua = u(a);
    }
    for (int i = 0; i < 200 && uc < ub; ++i) {
        a = b; ua = ub;
        b = c; ub = uc;
        step *= 1.7;
        c = b + step;
        uc = u(c);
    }
    const double gr = 0.6180339887498949;
    double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
    double f1 = u(x1), f2 = u(x2);
    for (int i = 0; i < 200 && c - a > tol; ++i) {
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
    if (arg_out) *arg_out = 0.5 * (a + c);
    return std::min(f1, f2);
}

// |||1/I|||_{L^{conj B}(Phi(t), 1/2)} by the inf-over-k route after the
// substitution s = Phi(tau):
//   (1 + modular(k))/k = 1/k + int_0^t conj(e^{L(tau)}) e^{-L(tau)} dtau,
//   L(tau) = log(k sqrt(2pi)) + tau^2/2.
double orlicz_tail_norm(const ConjugateYoung& conj, double t,
                        const Quadrature& q, double seed_logk,
                        double* argmin_logk) {
    // the integrand kinks where the conjugate factor turns positive; find
    // that log-argument once (it does not depend on k) and split there
    double Lc = -50.0;
    if (conj.value_factor_log(-50.0) <= 0.0) {
        double lo = -50.0, hi = 400.0;
        for (int i = 0; i < 80; ++i) {
            double mid = 0.5 * (lo + hi);
            (conj.value_factor_log(mid) <= 0.0 ? lo : hi) = mid;
        }
        Lc = 0.5 * (lo + hi);
    }
    auto u = [&](double lk) {
        auto integrand = [&](double tau) {
            return conj.value_factor_log(lk + kLogSqrt2Pi + 0.5 * tau * tau);
        };
        double kink2 = 2.0 * (Lc - lk - kLogSqrt2Pi);
        double kink = kink2 > 0.0 ? std::sqrt(kink2) : 0.0;
        double total = std::exp(-lk);
        double lo = std::min(t, kink);
        if (t - lo < 1e-9 * (1.0 + t)) {
            // sliver between the switch-on point and the endpoint: bound it
            // by a rectangle instead of fighting roundoff
            double top = integrand(t);
            return total + 0.5 * top * (t - lo);
        }
        double width = std::min(1.0, std::max(t - lo, 1e-3));
        while (lo < t) {
            double hi = std::min(t, lo + width);
            total += integrate(integrand, lo, hi, q);
            lo = hi;
            width *= 2.0;
        }
        return total;
    };
    return golden_min(u, seed_logk, 0.75, 1e-8, argmin_logk);
}

double seed_logk_for(double beta, double t) {
    double s2; // sigma(t)^2 of the matched scale choice
    if (t <= M_E + 0.5) {
        s2 = 1.0;
    } else if (beta < 2.0) {
        s2 = 2.0 * (2.0 / beta - 1.0) * std::log(t);
    } else if (beta == 2.0) {
        s2 = 2.0 * std::log(std::log(t));
    } else {
        s2 = 1.0;
    }
    return -0.5 * s2 - kLogSqrt2Pi;
}

// least squares fit of samples (t, y) against a*t^2/2 + b*log^2 t + c*log t + d
struct FitResult {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

FitResult fit_log_integrand(const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 4) return {};
    double M[4][5] = {};
    for (auto [t, y] : pts) {
        double lt = std::log(t);
        double base[4] = {0.5 * t * t, lt * lt, lt, 1.0};
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) M[i][j] += base[i] * base[j];
            M[i][4] += base[i] * y;
        }
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        for (int j = 0; j < 5; ++j) std::swap(M[col][j], M[piv][j]);
        if (std::fabs(M[col][col]) < 1e-300) return {};
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            double f = M[r][col] / M[col][col];
            for (int j = col; j < 5; ++j) M[r][j] -= f * M[col][j];
        }
    }
    return {M[0][4] / M[0][0], M[1][4] / M[1][1], M[2][4] / M[2][2],
            M[3][4] / M[3][3]};
}

} // namespace

double kappa_beta(double beta) {
    if (!(beta > 0.0)) throw std::domain_error("kappa_beta: beta must be > 0");
    return 1.0 / std::sqrt(2.0) + std::sqrt(2.0) / beta;
}

ReductionFunctional::ReductionFunctional(ReductionKind kind, double beta,
                                         std::optional<YoungFunction> B,
                                         Quadrature q)
    : kind_(kind), beta_(beta), B_(std::move(B)), q_(q) {
    switch (kind_) {
        case ReductionKind::luxemburg: {
            if (!B_) throw std::invalid_argument("luxemburg kind needs B");
            conj_ = std::make_shared<ConjugateYoung>(*B_);
            constant_term_ = std::sqrt(M_PI / 2.0) * B_->inverse(1.0);
            break;
        }
        case ReductionKind::marcinkiewicz_m: {
            if (!B_) throw std::invalid_argument("marcinkiewicz kind needs B");
            auto integrand = [this](double x) {
                return B_->inverse_from_log(x) * std::exp(-x);
            };
            constant_term_ =
                std::sqrt(M_PI / 2.0) * integrate_to_inf(integrand, 0.0, q_);
            break;
        }
        default:
            constant_term_ = 0.0;
    }
}

double ReductionFunctional::target_exponent() const {
    return target_exponent_for(kind_, beta_);
}

double ReductionFunctional::operator()(double t) const {
    if (!(t > 0.0)) throw std::domain_error("ReductionFunctional: t must be > 0");
    switch (kind_) {
        case ReductionKind::linf_median:
            return t;
        case ReductionKind::linf_mean:
            return t + 2.0 * gauss_density(t) - 2.0 * t * gauss_tail(t);
        case ReductionKind::luxemburg: {
            double seed = warm_valid_ ? warm_logk_ : seed_logk_for(beta_, t);
            double arg = seed;
            double v = orlicz_tail_norm(*conj_, t, q_, seed, &arg);
            warm_logk_ = arg;
            warm_valid_ = true;
            return v + constant_term_;
        }
        case ReductionKind::marcinkiewicz_m: {
            // e^{t^2/2} int_t^inf B^{-1}(1/Phi) e^{-tau^2/2} dtau, tau = t + r
            auto head = [&](double r) {
                double lg = -log_gauss_tail(t + r);
                return B_->inverse_from_log(lg) *
                       std::exp(-t * r - 0.5 * r * r);
            };
            double term1 =
                integrate_to_inf(head, 0.0, q_, std::min(1.0, 1.0 / t));
            double term2 = 0.0;
            double lo = 0.0, width = std::min(1.0, t);
            auto j_int = [&](double tau) {
                return B_->inverse_from_log(-log_gauss_tail(tau));
            };
            while (lo < t) {
                double hi = std::min(t, lo + width);
                term2 += integrate(j_int, lo, hi, q_);
                lo = hi;
                width *= 2.0;
            }
            return term1 + term2 + constant_term_;
        }
    }
    return 0.0;
}

double functional_LB(const YoungFunction& B, double t, const Quadrature& q) {
    ReductionFunctional F(ReductionKind::luxemburg, B.beta(), B, q);
    return F(t);
}

double functional_mB(const YoungFunction& B, double t, const Quadrature& q) {
    ReductionFunctional F(ReductionKind::marcinkiewicz_m, B.beta(), B, q);
    return F(t);
}

double functional_Linf(double t, bool mean_centering) {
    if (!(t > 0.0)) throw std::domain_error("functional_Linf: t must be > 0");
    if (!mean_centering) return t;
    return t + 2.0 * gauss_density(t) - 2.0 * t * gauss_tail(t);
}

KappaVerdict moser_rhs(double kappa, const ReductionFunctional& F,
                       const Quadrature& q, const MoserOptions& opts) {
    if (!(kappa > 0.0)) throw std::domain_error("moser_rhs: kappa must be > 0");
    const double p = F.target_exponent();
    auto ell = [&](double t) {
        return std::pow(kappa * F(t), p) - 0.5 * t * t;
    };
    auto integrand = [&](double t) {
        double e = ell(t);
        return e > 700.0 ? kInf : std::sqrt(2.0 / M_PI) * std::exp(e);
    };

    KappaVerdict out;
    out.kappa = kappa;
    Quadrature qo = q;
    qo.rel_tol = std::max(q.rel_tol, 1e-9);
    // far panels: the log-integrand inherits t^2-amplified rounding noise
    // from F, which defeats adaptive error control; a fixed composite rule
    // averages through it
    Quadrature q_fixed;
    q_fixed.rel_tol = 1.0;
    q_fixed.abs_tol = 1e290;
    q_fixed.max_depth = 1;
    auto panel_value = [&](double a, double b) {
        if (a < 64.0) return integrate(integrand, a, b, qo);
        double sum = 0.0;
        int slices = 12;
        for (int i = 0; i < slices; ++i) {
            double x0 = a + (b - a) * i / slices;
            double x1 = a + (b - a) * (i + 1) / slices;
            sum += integrate(integrand, x0, x1, q_fixed);
        }
        return sum;
    };
    double value = 0.0;
    double T_prev = 0.0;
    double T = opts.T0;
    bool overflowed = false;
    for (int j = 0; j <= opts.max_doublings; ++j) {
        try {
            value += panel_value(T_prev, T);
        } catch (const IntegrationError&) {
            overflowed = true;
        }
        if (overflowed || !std::isfinite(value)) {
            out.classification = KappaClass::divergent;
            out.evidence.push_back({T, kInf, ell(std::max(T_prev, opts.T0))});
            break;
        }
        out.evidence.push_back({T, value, ell(T)});
        size_t n = out.evidence.size();
        if (n >= 2) {
            double prev = out.evidence[n - 2].value;
            if (std::fabs(value - prev) <= opts.rel_tol * value) {
                out.classification = KappaClass::finite;
                break;
            }
        }
        if (n >= 4) {
            // divergence: the last three doubling ratios all exceed the
            // growth floor and are not collapsing toward 1 (transient
            // growth of a finite integral decays quickly)
            double r1 = out.evidence[n - 3].value / out.evidence[n - 4].value;
            double r2 = out.evidence[n - 2].value / out.evidence[n - 3].value;
            double r3 = out.evidence[n - 1].value / out.evidence[n - 2].value;
            bool growing = r1 > 1.0 + opts.growth_tol &&
                           r2 > 1.0 + opts.growth_tol &&
                           r3 > 1.0 + opts.growth_tol;
            bool stable = (r2 - 1.0) >= 0.8 * (r1 - 1.0) &&
                          (r3 - 1.0) >= 0.8 * (r2 - 1.0);
            if (growing && stable) {
                out.classification = KappaClass::divergent;
                break;
            }
        }
        T_prev = T;
        T *= 2.0;
    }

    // late-window fit of the log-integrand
    double T_last = out.evidence.empty() ? opts.T0 : out.evidence.back().T;
    std::vector<std::pair<double, double>> pts;
    double lo = std::max(opts.T0 * 0.5, T_last / opts.fit_window);
    for (int i = 0; i <= 24; ++i) {
        double t = lo * std::pow(T_last / lo, i / 24.0);
        double e = ell(t);
        if (std::isfinite(e)) pts.emplace_back(t, e);
    }
    FitResult fit = fit_log_integrand(pts);
    out.exponent_estimate = fit.a;
    out.fit_log2 = fit.b;
    out.fit_log = fit.c;

    if (out.classification == KappaClass::divergent && !overflowed &&
        !(fit.a > 0.0 || fit.b > 0.0 || fit.c > 1.0)) {
        // growth without a positive fitted coefficient is not yet a witness
        out.classification = KappaClass::inconclusive;
    }
    return out;
}

// ---- families ---------------------------------------------------------------

SupercriticalFamily family_supercritical(double beta, double lambda,
                                         double t0) {
    if (!(t0 > 0.0) || !(lambda > 0.0) || !(lambda < 1.0))
        throw std::domain_error(
            "family_supercritical: need t0 > 0 and lambda in (0,1)");
    double lg0 = -log_gauss_tail(t0);
    auto w = [beta, lambda, lg0](double sigma) {
        double lg = -log_gauss_tail(sigma);
        double d = lg - lg0;
        return d > 0.0 ? std::pow(lambda * d, 1.0 / beta) : 0.0;
    };
    auto cum = std::make_shared<Cumulative>(w, t0);
    SupercriticalFamily fam;
    fam.lambda = lambda;
    fam.t0 = t0;
    fam.grad_modular_closed =
        1.0 + 2.0 * gauss_tail(t0) * lambda / (1.0 - lambda);
    fam.input.beta = beta;
    fam.input.label = "supercritical";
    fam.input.profile.h = [cum, t0](double x) {
        if (std::fabs(x) <= t0) return 0.0;
        double v = (*cum)(std::fabs(x));
        return x > 0.0 ? v : -v;
    };
    fam.input.profile.h_prime = [w, t0](double x) {
        return std::fabs(x) > t0 ? w(std::fabs(x)) : 0.0;
    };
    fam.input.profile.breakpoints = {-t0, t0};
    // two-sided level sets: |grad u|*(s) = g(s/2) on (0, 2 Phi(t0))
    double s_end = std::min(1.0, 2.0 * gauss_tail(t0));
    double st0 = gauss_tail(t0);
    RearrangedFunction gs;
    gs.support_end = s_end;
    gs.breakpoints = {s_end};
    gs.value = [beta, lambda, st0, s_end](double s) {
        if (s >= s_end) return 0.0;
        return std::pow(lambda * std::log(st0 / (0.5 * s)), 1.0 / beta);
    };
    fam.input.grad_star = gs;
    return fam;
}

MarcinkiewiczCriticalFamily family_marcinkiewicz_critical(double beta,
                                                          double N) {
    if (!(beta > 0.0) || beta > 2.0)
        throw std::domain_error(
            "family_marcinkiewicz_critical: beta must lie in (0,2]");
    double tau0 = std::max(1.0, std::pow(beta, -1.0 / beta));
    if (beta < 1.0)
        tau0 = std::max(tau0, std::pow((1.0 - beta) / beta, 1.0 / beta));
    YoungFunction B = head_tail_with(N, beta, tau0);
    double s0 = std::min(0.5, std::exp(-std::pow(tau0, beta)) / N);
    double t0 = gauss_tail_inv(s0);
    double logN = std::log(N);

    auto g_of_L = [beta](double L) {
        return std::pow(L, 1.0 / beta) -
               (1.0 / beta) * std::pow(L, 1.0 / beta - 1.0);
    };
    // certificate: g decreasing and nonnegative on (0, s0)
    {
        double L0 = std::log(1.0 / (N * s0));
        if (!(g_of_L(L0) >= 0.0))
            throw std::invalid_argument(
                "family_marcinkiewicz_critical: g negative near s0, N too small");
        // g decreasing in s means g nondecreasing in L = log(1/(Ns))
        double prev = -kInf;
        for (int i = 0; i <= 200; ++i) {
            double L = L0 + i * 0.5;
            double v = g_of_L(L);
            if (!(v >= prev * (1.0 - 1e-12) - 1e-300))
                throw std::invalid_argument(
                    "family_marcinkiewicz_critical: g not decreasing, N too small");
            prev = v;
        }
    }

    auto w = [g_of_L, logN, t0](double sigma) {
        double L = -log_gauss_tail(std::max(sigma, t0)) - logN;
        return g_of_L(L);
    };
    auto cum = std::make_shared<Cumulative>(w, t0);

    MarcinkiewiczCriticalFamily fam{{}, B, N, s0, t0, tau0};
    fam.input.beta = beta;
    fam.input.label = "marcinkiewicz-critical";
    // one-sided profile: the decreasing rearrangement of the gradient is
    // then exactly g on (0, s0); the odd variant would dilate it to g(s/2)
    fam.input.profile.h = [cum, t0](double x) {
        return x > t0 ? (*cum)(x) : 0.0;
    };
    fam.input.profile.h_prime = [w, t0](double x) {
        return x > t0 ? w(x) : 0.0;
    };
    fam.input.profile.breakpoints = {t0};
    RearrangedFunction gs;
    gs.support_end = s0;
    gs.breakpoints = {s0};
    gs.value = [g_of_L, logN, s0](double s) {
        if (s >= s0) return 0.0;
        return g_of_L(std::log(1.0 / s) - logN);
    };
    gs.value_at_gauss = [w, t0](double tau) {
        if (tau <= t0) return 0.0;
        return w(tau);
    };
    fam.input.grad_star = gs;
    return fam;
}

FlattenedFamily family_flattened(double beta, double N, double t0, double k) {
    YoungFunction B = construct_flattened(N, beta, t0);
    YoungFunction A = construct_flattened(1.0, beta, t0);
    double log_a0 =
        std::log(beta) + (beta - 1.0) * std::log(t0) + std::pow(t0, beta);
    double sigma0 = std::sqrt(2.0 * log_a0);
    if (!(k > sigma0))
        throw std::domain_error("family_flattened: need k > sigma(t0)");

    auto ainv = [A](double tau) {
        return A.derivative_inverse_from_log(0.5 * tau * tau);
    };
    auto cum = std::make_shared<Cumulative>(ainv, 0.0);

    FlattenedFamily fam{{}, B, A, N, t0, k, sigma0};
    fam.input.beta = beta;
    fam.input.label = "flattened";
    fam.input.profile.h = [cum, k](double x) {
        double v = (*cum)(std::min(std::fabs(x), k));
        return x >= 0.0 ? v : -v;
    };
    fam.input.profile.h_prime = [ainv, k](double x) {
        return std::fabs(x) < k ? ainv(std::fabs(x)) : 0.0;
    };
    fam.input.profile.breakpoints = {-k, -sigma0, 0.0, sigma0, k};
    return fam;
}

double FlattenedFamily::grad_modular(const Quadrature& q) const {
    // int B(|grad u_k|) dgamma = 2N/(beta sqrt(2pi)) *
    //   int_{sigma0}^{k} a^{-1}(e^{tau^2/2})^{1-beta} dtau
    // (the ramp region contributes A(t0') = 0)
    const YoungFunction& A = A_unscaled;
    double b = input.beta;
    auto integrand = [&](double tau) {
        double t = A.derivative_inverse_from_log(0.5 * tau * tau);
        return std::pow(t, 1.0 - b);
    };
    double v = integrate(integrand, sigma0, k, q);
    return 2.0 * N / (b * kSqrt2Pi) * v;
}

double FlattenedFamily::lower_bound_log(double kappa,
                                        const Quadrature& q) const {
    (void)q;
    double hk = input.profile.h(k);
    double p = 2.0 * input.beta / (2.0 + input.beta);
    return std::log(2.0) + log_gauss_tail(k) + std::pow(kappa * hk, p);
}

FamilyInput family_medmv(double k) {
    if (!(k >= 1.0)) throw std::domain_error("family_medmv: k must be >= 1");
    FamilyInput fam;
    fam.beta = 1.0;
    fam.label = "medmv";
    fam.profile.h = [k](double x) {
        if (x <= 0.0) return 0.0;
        return x <= 1.0 / k ? k * x : 1.0;
    };
    fam.profile.h_prime = [k](double x) {
        return x > 0.0 && x < 1.0 / k ? k : 0.0;
    };
    fam.profile.breakpoints = {0.0, 1.0 / k};
    RearrangedFunction gs;
    double cut = gauss_tail(0.0) - gauss_tail(1.0 / k);
    gs.support_end = cut;
    gs.breakpoints = {cut};
    gs.value = [k, cut](double s) { return s < cut ? k : 0.0; };
    fam.grad_star = gs;
    return fam;
}

FamilyInput family_linear() {
    FamilyInput fam;
    fam.beta = kInf;
    fam.label = "linear";
    fam.profile.h = [](double x) { return x; };
    fam.profile.h_prime = [](double) { return 1.0; };
    RearrangedFunction gs;
    gs.support_end = 1.0;
    gs.value = [](double) { return 1.0; };
    fam.grad_star = gs;
    return fam;
}

FamilyReport evaluate_family(const FamilyInput& fam, double kappa,
                             const YoungFunction* B,
                             const std::vector<double>& T_grid,
                             const Quadrature& q) {
    FamilyReport rep;
    rep.label = fam.label;
    auto [med, mv] = median_and_mean(fam.profile, q);
    rep.med = med;
    rep.mv = mv;

    const auto& h = fam.profile.h;
    const auto& hp = fam.profile.h_prime;

    double sup = 0.0;
    for (double t = -40.0; t <= 40.0; t += 0.05)
        sup = std::max(sup, std::fabs(hp(t)));
    for (double b : fam.profile.breakpoints)
        for (double e : {-1e-7, 1e-7})
            sup = std::max(sup, std::fabs(hp(b + e)));
    rep.grad_sup = sup;

    auto piecewise_gauss = [&](const std::function<double(double)>& fn) {
        std::vector<double> pts = fam.profile.breakpoints;
        pts.insert(pts.end(), {-42.0, -20.0, -8.0, 0.0, 8.0, 20.0, 42.0});
        std::sort(pts.begin(), pts.end());
        double total = 0.0;
        for (size_t i = 0; i + 1 < pts.size(); ++i) {
            if (pts[i + 1] <= -42.0 || pts[i] >= 42.0) continue;
            double a = std::max(pts[i], -42.0);
            double b2 = std::min(pts[i + 1], 42.0);
            if (b2 - a < 1e-14) continue;
            total += integrate(fn, a, b2, q);
        }
        return total;
    };

    if (std::isfinite(fam.beta)) {
        double bexp = fam.beta;
        auto integrand = [&](double tau) {
            double g = std::fabs(hp(tau));
            double land = (g > 0.0 ? std::pow(g, bexp) : 0.0) -
                          0.5 * tau * tau - kLogSqrt2Pi;
            return land > 700.0 ? kInf : std::exp(land);
        };
        try {
            rep.grad_exp_modular = piecewise_gauss(integrand);
        } catch (const IntegrationError&) {
            rep.grad_exp_modular = kInf;
        }
    }

    if (B) {
        auto modular_gauss = [&](double lambda) {
            auto fn = [&](double tau) {
                double g = std::fabs(hp(tau));
                double land = (g > 0.0 ? B->log_value(g / lambda) : -kInf) -
                              0.5 * tau * tau - kLogSqrt2Pi;
                return land > 700.0 ? kInf : std::exp(land);
            };
            try {
                return piecewise_gauss(fn);
            } catch (const IntegrationError&) {
                return kInf;
            }
        };
        rep.lux_norm = luxemburg_norm_from_modular(modular_gauss).value;
        if (fam.grad_star) {
            rep.marc_M = marcinkiewicz_M_norm(*B, *fam.grad_star, q);
            rep.marc_m = marcinkiewicz_m_norm(*B, *fam.grad_star, q);
        }
    }

    // truncated target integral over the T grid
    double p = std::isfinite(fam.beta) ? 2.0 * fam.beta / (2.0 + fam.beta)
                                       : 2.0;
    auto glog = [&](double tau) {
        double u = std::fabs(h(tau));
        return (u > 0.0 ? std::pow(kappa * u, p) : 0.0) - 0.5 * tau * tau -
               kLogSqrt2Pi;
    };
    auto target = [&](double tau) {
        double land = glog(tau);
        return land > 700.0 ? kInf : std::exp(land);
    };
    double value = 0.0;
    double prevT = 0.0;
    bool diverged = false;
    for (double T : T_grid) {
        if (!diverged) {
            try {
                value += integrate(target, prevT, T, q) +
                         integrate(target, -T, -prevT, q);
            } catch (const IntegrationError&) {
                diverged = true;
            }
        }
        double ell = std::max(glog(T), glog(-T)) + kLogSqrt2Pi;
        rep.curve.push_back({T, diverged ? kInf : value, ell});
        prevT = T;
    }

    if (!T_grid.empty()) {
        std::vector<std::pair<double, double>> pts;
        double T_last = T_grid.back();
        double lo = std::max(std::min(1.0, T_grid.front() * 0.5), T_last / 8.0);
        for (int i = 0; i <= 24; ++i) {
            double t = lo * std::pow(T_last / lo, i / 24.0);
            double e = std::max(glog(t), glog(-t)) + kLogSqrt2Pi;
            if (std::isfinite(e)) pts.emplace_back(t, e);
        }
        FitResult fit = fit_log_integrand(pts);
        rep.exponent_estimate = fit.a;
        rep.fit_log2 = fit.b;
        rep.fit_log = fit.c;
    }
    return rep;
}

ScanResult sharpness_scan(double beta, const YoungFunction& B,
                          ReductionKind kind, std::vector<double> kappas,
                          const Quadrature& q, const MoserOptions& opts) {
    std::sort(kappas.begin(), kappas.end());
    ReductionFunctional F(kind, beta, B, q);
    double kb = kappa_beta(beta);

    ScanResult out;
    for (double kappa : kappas) {
        KappaVerdict v = moser_rhs(kappa, F, q, opts);
        if (v.classification != KappaClass::finite) {
            bool shown_divergent = false;
            if (kind == ReductionKind::marcinkiewicz_m &&
                kappa >= kb * (1.0 - 1e-12) && beta <= 2.0) {
                auto fam = family_marcinkiewicz_critical(beta, B.tail_scale());
                auto rep = evaluate_family(fam.input, kappa, nullptr,
                                           {8.0, 16.0, 32.0, 64.0}, q);
                size_t n = rep.curve.size();
                shown_divergent =
                    !std::isfinite(rep.curve.back().value) ||
                    (n >= 2 &&
                     rep.curve[n - 1].value > rep.curve[n - 2].value * 1.5);
            }
            if (!shown_divergent && kappa > kb * (1.0 + 1e-12)) {
                double lam = 0.5 * (std::pow(kb / kappa, beta) + 1.0);
                auto fam = family_supercritical(beta, lam, 2.0);
                auto rep = evaluate_family(fam.input, kappa, nullptr,
                                           {8.0, 16.0, 32.0, 64.0}, q);
                size_t n = rep.curve.size();
                shown_divergent =
                    !std::isfinite(rep.curve.back().value) ||
                    (n >= 2 &&
                     rep.curve[n - 1].value > rep.curve[n - 2].value * 1.5 &&
                     rep.exponent_estimate > 0.0);
            }
            if (shown_divergent) v.classification = KappaClass::divergent;
        }
        out.verdicts.push_back(v);
    }

    double last_finite = 0.0, first_divergent = kInf;
    for (const auto& v : out.verdicts) {
        if (v.classification == KappaClass::finite)
            last_finite = std::max(last_finite, v.kappa);
        if (v.classification == KappaClass::divergent)
            first_divergent = std::min(first_divergent, v.kappa);
    }
    if (last_finite > 0.0 && std::isfinite(first_divergent) &&
        first_divergent > last_finite) {
        out.transition_estimate = 0.5 * (last_finite + first_divergent);
        out.transition_half_width = 0.5 * (first_divergent - last_finite);
    }
    return out;
}

// ---- serialization ----------------------------------------------------------

const char* kappa_class_name(KappaClass c) {
    switch (c) {
        case KappaClass::finite: return "finite";
        case KappaClass::divergent: return "divergent";
        default: return "inconclusive";
    }
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
    std::string out = "T,truncated_value,log_integrand_at_T\n";
    char buf[128];
    for (const auto& p : curve) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.T, p.value,
                      p.log_integrand);
        out += buf;
    }
    return out;
}

namespace {
nlohmann::ordered_json curve_json(const std::vector<CurvePoint>& curve) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& p : curve) {
        arr.push_back({{"T", p.T},
                       {"value", p.value},
                       {"log_integrand", p.log_integrand}});
    }
    return arr;
}
} // namespace

std::string verdict_to_json(const KappaVerdict& v) {
    nlohmann::ordered_json j;
    j["kappa"] = v.kappa;
    j["classification"] = kappa_class_name(v.classification);
    j["exponent_estimate"] = v.exponent_estimate;
    j["fit_log2"] = v.fit_log2;
    j["fit_log"] = v.fit_log;
    j["curve"] = curve_json(v.evidence);
    return j.dump(2);
}

std::string report_to_json(const FamilyReport& r) {
    nlohmann::ordered_json j;
    j["family"] = r.label;
    j["med"] = r.med;
    j["mv"] = r.mv;
    j["grad_exp_modular"] = r.grad_exp_modular;
    j["grad_sup"] = r.grad_sup;
    if (r.lux_norm) j["lux_norm"] = *r.lux_norm;
    if (r.marc_M) j["marc_M"] = *r.marc_M;
    if (r.marc_m) j["marc_m"] = *r.marc_m;
    j["exponent_estimate"] = r.exponent_estimate;
    j["fit_log2"] = r.fit_log2;
    j["fit_log"] = r.fit_log;
    j["curve"] = curve_json(r.curve);
    return j.dump(2);
}

std::string scan_to_json(const ScanResult& s) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& v : s.verdicts) {
        arr.push_back({{"kappa", v.kappa},
                       {"classification", kappa_class_name(v.classification)},
                       {"exponent_estimate", v.exponent_estimate}});
    }
    j["verdicts"] = arr;
    j["transition_estimate"] = s.transition_estimate;
    j["transition_half_width"] = s.transition_half_width;
    return j.dump(2);
}

} // namespace gaussmoser
