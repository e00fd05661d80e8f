#ifndef GAUSSMOSER_REARRANGE_HPP
#define GAUSSMOSER_REARRANGE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "gaussmoser/quadrature.hpp"
#include "gaussmoser/young.hpp"

namespace gaussmoser {

// A monotone profile of the first Gaussian coordinate: u(x) = h(x_1) with h
// nondecreasing. h_prime is the a.e. derivative; breakpoints mark where h or
// h' switches branch.
struct Profile {
    std::function<double(double)> h;
    std::function<double(double)> h_prime;
    std::vector<double> breakpoints;
};

// A nonincreasing function on (0,1); zero from support_end on. When the
// function has the shape s -> w(PhiInv(s)), value_at_gauss carries the
// stable pullback tau -> value(Phi(tau)) and is preferred by quadratures.
struct RearrangedFunction {
    std::function<double(double)> value;
    double support_end = 1.0;
    std::function<double(double)> value_at_gauss; // may be empty
    std::vector<double> breakpoints;              // s-values where the shape switches
};

// u°(s) = h(PhiInv(s)); exact for monotone profiles.
std::function<double(double)> signed_rearrangement(const Profile& p);

// Decreasing rearrangement of |h'| with respect to the one-dimensional
// Gaussian measure, by level-set inversion over the monotone branches.
RearrangedFunction gradient_rearrangement(const Profile& p);

// phi**(s) = (1/s) int_0^s f(r) dr.
double maximal_function(const RearrangedFunction& f, double s,
                        const Quadrature& q = {});

// (med, mv): median h(0) and Gaussian mean of h.
std::pair<double, double> median_and_mean(const Profile& p,
                                          const Quadrature& q = {});

// lhs = |med - mv|, rhs = sqrt(pi/2) * ||h'||_{L^1(gamma_1)}.
std::pair<double, double> med_mv_bound(const Profile& p,
                                       const Quadrature& q = {});

// (1/I(s)) int_0^s g + int_s^{1/2} g/I for a rearranged gradient g.
double symubound_rhs(const RearrangedFunction& grad_star, double s,
                     const Quadrature& q = {});

// lhs = ||-u°' I||_{L^B(0,1)} via the unit-interval route, rhs =
// ||grad u||_{L^B(gamma)} via the Gaussian route; equal for monotone
// profiles, computed through independent quadratures.
std::pair<double, double> polya_szego_check(const Profile& p,
                                            const YoungFunction& B,
                                            const Quadrature& q = {});

// Discrete Hardy-Littlewood: lhs = (1/n) sum_{i in E} |f_i g_i|,
// rhs = (1/n) sum_{k < |E|} f*_k g*_k.
std::pair<double, double> hardy_littlewood_check(
    const std::vector<double>& f, const std::vector<double>& g,
    const std::vector<int>& subset);

// Decreasing rearrangement of a uniform-weight sample vector.
std::vector<double> sample_rearrangement(std::vector<double> v);

// int h'(tau) * weight(tau) dgamma_1-style helper used by several checks:
// integrates fn against the Gaussian density over the whole line, splitting
// at the profile's breakpoints.
double gauss_line_integral(const std::function<double(double)>& fn,
                           const std::vector<double>& knots,
                           const Quadrature& q = {});

} // namespace gaussmoser

#endif
