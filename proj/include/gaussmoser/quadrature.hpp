#ifndef GAUSSMOSER_QUADRATURE_HPP
#define GAUSSMOSER_QUADRATURE_HPP

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gaussmoser/dd.hpp"

namespace gaussmoser {

enum class Truncation { fixed_T, tail_bound };

struct Quadrature {
    double rel_tol = 1e-11;
    double abs_tol = 1e-300;
    int max_depth = 28;
    Truncation truncation = Truncation::tail_bound;
};

struct IntegrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Fn = std::function<double(double)>;

// Adaptive Gauss-Kronrod 7-15 on a finite interval.
double integrate(const Fn& f, double a, double b, const Quadrature& q = {});

// Integral over [a, +inf) of a decaying integrand: panels of doubling width
// until two consecutive panels fall below tolerance, with geometric
// extrapolation of the remainder. Throws IntegrationError when the panel
// sequence fails to decay (reported divergence), unless divergent_to_inf
// is the desired signal; see integrate_to_inf_or_inf.
double integrate_to_inf(const Fn& f, double a, const Quadrature& q = {},
                        double initial_width = 1.0);

// Same, but returns +inf instead of throwing when the tail does not decay.
double integrate_to_inf_or_inf(const Fn& f, double a, const Quadrature& q = {},
                               double initial_width = 1.0);

// Integral over (0, b] of an integrand with a possible integrable blow-up
// at 0: geometric shells b*2^{-k-1}..b*2^{-k} with ratio extrapolation of
// the remainder; returns +inf when the shell sequence does not decay.
double integrate_from_zero(const Fn& f, double b, const Quadrature& q = {});

// Fixed-order Gauss-Legendre panel in double-double arithmetic.
using FnDD = std::function<dd(dd)>;
dd integrate_gl_dd(const FnDD& f, dd a, dd b, int order = 40);

// Gauss-Legendre panel chain over [a, b] with geometrically growing panels
// (suited to slowly varying integrands over huge ranges).
dd integrate_geometric_dd(const FnDD& f, dd a, dd b, int order = 40);

// Nodes/weights of the n-point Gauss-Legendre rule on [-1,1] in dd.
const std::vector<std::pair<dd, dd>>& gauss_legendre_dd(int n);

} // namespace gaussmoser

#endif
