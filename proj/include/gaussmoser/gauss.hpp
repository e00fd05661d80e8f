#ifndef GAUSSMOSER_GAUSS_HPP
#define GAUSSMOSER_GAUSS_HPP

#include "gaussmoser/dd.hpp"

namespace gaussmoser {

// Standard Gaussian density (2pi)^{-1/2} e^{-t^2/2}.
double gauss_density(double t);

// Gaussian tail Phi(t) = (2pi)^{-1/2} \int_t^inf e^{-tau^2/2} dtau.
// Computed through the scaled complementary error integral; no intermediate
// underflow for t <= 37. For larger t use log_gauss_tail.
double gauss_tail(double t);

// log Phi(t) for t >= 0, valid arbitrarily far into the tail.
double log_gauss_tail(double t);

// Mills ratio H(t) = Phi(t) / density(t), t >= 0. Strictly decreasing,
// H(0) = sqrt(pi/2), H(t) ~ 1/t at infinity.
double mills_ratio(double t);

// Inverse of gauss_tail on (0,1): returns t with Phi(t) = s, relative
// accuracy 1e-12 in s. Monotone Newton with bracketing, seeded by
// sqrt(2 log(1/s)) for small s.
double gauss_tail_inv(double s);

// Gaussian isoperimetric profile I(s) = (2pi)^{-1/2} e^{-PhiInv(s)^2/2}
// on [0,1], I(0) = I(1) = 0, symmetric about 1/2. Evaluated as
// s / H(PhiInv(s)) so that values stay finite for s near the endpoints.
double isoperimetric(double s);

// Extended-precision path (roughly 31 significant digits).
dd mills_ratio_dd(dd t);
dd log_gauss_tail_dd(dd t);
dd gauss_tail_dd(dd t);

} // namespace gaussmoser

#endif
