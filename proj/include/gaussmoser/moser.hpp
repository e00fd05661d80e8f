#ifndef GAUSSMOSER_MOSER_HPP
#define GAUSSMOSER_MOSER_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gaussmoser/norms.hpp"
#include "gaussmoser/quadrature.hpp"
#include "gaussmoser/rearrange.hpp"
#include "gaussmoser/young.hpp"

namespace gaussmoser {

// kappa_beta = 1/sqrt(2) + sqrt(2)/beta.
double kappa_beta(double beta);

enum class ReductionKind { luxemburg, marcinkiewicz_m, linf_median, linf_mean };

// One-variable upper envelope F(t) whose exponential integral bounds the
// n-dimensional target integral. The Luxemburg kind carries a warm-started
// inner minimization over the auxiliary scale k; the warm seed is a plain
// mutable cache, so share one instance per thread.
class ReductionFunctional {
  public:
    ReductionFunctional(ReductionKind kind, double beta,
                        std::optional<YoungFunction> B, Quadrature q = {});

    double operator()(double t) const;
    double constant_term() const { return constant_term_; }
    ReductionKind kind() const { return kind_; }
    double beta() const { return beta_; }
    // exponent applied to kappa*F inside the exponential integral
    double target_exponent() const;

  private:
    ReductionKind kind_;
    double beta_;
    std::optional<YoungFunction> B_;
    std::shared_ptr<ConjugateYoung> conj_;
    Quadrature q_;
    double constant_term_ = 0.0;
    mutable double warm_logk_ = 0.0;
    mutable bool warm_valid_ = false;
};

// Single evaluations of the three functionals.
double functional_LB(const YoungFunction& B, double t, const Quadrature& q = {});
double functional_mB(const YoungFunction& B, double t, const Quadrature& q = {});
double functional_Linf(double t, bool mean_centering);

struct CurvePoint {
    double T;
    double value;
    double log_integrand; // log-integrand model value at T
};

enum class KappaClass { finite, divergent, inconclusive };

struct KappaVerdict {
    double kappa = 0.0;
    KappaClass classification = KappaClass::inconclusive;
    std::vector<CurvePoint> evidence;
    // least-squares fit of the log-integrand against
    //   a*t^2/2 + b*(log t)^2 + c*log t + d
    double exponent_estimate = 0.0; // a
    double fit_log2 = 0.0;          // b
    double fit_log = 0.0;           // c
};

struct MoserOptions {
    double T0 = 1.0;
    int max_doublings = 24;
    double rel_tol = 1e-6;   // truncation agreement for a finite verdict
    double growth_tol = 0.02; // minimal per-doubling growth for divergence
    double fit_window = 8.0;  // fit over [T_last/fit_window, T_last]
};

// sqrt(2/pi) int_0^T exp([kappa F(t)]^p - t^2/2) dt over doubling T.
KappaVerdict moser_rhs(double kappa, const ReductionFunctional& F,
                       const Quadrature& q = {}, const MoserOptions& opts = {});

// ---- extremal families ----------------------------------------------------

struct FamilyInput {
    Profile profile;
    double beta; // gradient exponent; +inf for the L-infinity endpoint
    std::optional<RearrangedFunction> grad_star;
    std::string label;
};

// Odd profile vanishing on |x_1| < t0 with gradient
// (lambda log(Phi(t0)/Phi(|x_1|)))^{1/beta}; the gradient exponential
// modular has the closed form 1 + 2 Phi(t0) lambda/(1-lambda).
struct SupercriticalFamily {
    FamilyInput input;
    double lambda, t0;
    double grad_modular_closed;
};
SupercriticalFamily family_supercritical(double beta, double lambda, double t0);

// One-sided profile with gradient rearrangement
// g(s) = (log 1/(Ns))^{1/b} - (1/b)(log 1/(Ns))^{1/b-1} on (0, s0), built
// one-sided so that |grad u|*(s) = g(s) exactly; carries the companion
// Young function with the same N and the certificate data.
struct MarcinkiewiczCriticalFamily {
    FamilyInput input;
    YoungFunction B;
    double N, s0, t0, tau0;
};
MarcinkiewiczCriticalFamily family_marcinkiewicz_critical(double beta, double N);

// Odd profile with gradient a^{-1}(e^{x^2/2}) capped at |x_1| = k, built on
// the flattened Young function; sigma0 = sqrt(2 log a(t0)).
struct FlattenedFamily {
    FamilyInput input;
    YoungFunction B;          // N * underline-A
    YoungFunction A_unscaled; // underline-A itself
    double N, t0, k, sigma0;
    double grad_modular(const Quadrature& q = {}) const;       // int B(|grad u_k|)
    double lower_bound_log(double kappa, const Quadrature& q = {}) const;
};
FlattenedFamily family_flattened(double beta, double N, double t0, double k);

// 0 / k x_1 / 1 ramp family of the median-mean sharpness proof.
FamilyInput family_medmv(double k);

// u(x) = x_1.
FamilyInput family_linear();

// ---- family evaluation ------------------------------------------------------

struct FamilyReport {
    std::string label;
    double med = 0.0, mv = 0.0;
    double grad_exp_modular = 0.0; // int e^{|grad u|^beta} dgamma
    double grad_sup = 0.0;
    std::optional<double> lux_norm, marc_M, marc_m;
    std::vector<CurvePoint> curve;
    // fit of the curve's log-integrand, same basis as KappaVerdict
    double exponent_estimate = 0.0, fit_log2 = 0.0, fit_log = 0.0;
};

FamilyReport evaluate_family(const FamilyInput& fam, double kappa,
                             const YoungFunction* B,
                             const std::vector<double>& T_grid,
                             const Quadrature& q = {});

// ---- sharpness scan ---------------------------------------------------------

struct ScanResult {
    std::vector<KappaVerdict> verdicts;
    double transition_estimate = 0.0;
    double transition_half_width = 0.0;
};

ScanResult sharpness_scan(double beta, const YoungFunction& B,
                          ReductionKind kind, std::vector<double> kappas,
                          const Quadrature& q = {}, const MoserOptions& opts = {});

// ---- serialization ----------------------------------------------------------

std::string curve_to_csv(const std::vector<CurvePoint>& curve);
std::string verdict_to_json(const KappaVerdict& v);
std::string report_to_json(const FamilyReport& r);
std::string scan_to_json(const ScanResult& s);
const char* kappa_class_name(KappaClass c);

} // namespace gaussmoser

#endif
