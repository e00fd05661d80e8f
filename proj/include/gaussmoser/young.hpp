#ifndef GAUSSMOSER_YOUNG_HPP
#define GAUSSMOSER_YOUNG_HPP

#include <string>
#include <vector>

#include "gaussmoser/dd.hpp"

namespace gaussmoser {

enum class YoungFamily { plain_exp, envelope, head_tail, flattened };

// One piece of a piecewise Young function on [lo, hi).
struct YoungSegment {
    enum class Kind { zero, affine, exp_tail };
    Kind kind;
    double lo = 0.0;
    double hi = 0.0;             // +inf for the final piece
    double slope = 0.0;          // affine: slope*(t - t_ref) + offset
    double t_ref = 0.0;
    double offset = 0.0;
    double scale = 0.0;          // exp_tail: scale*e^{t^beta} + shift
    double shift = 0.0;
};

// Convex, left-continuous, vanishing at 0, with the analytic tail
// scale*e^{t^beta} (+shift) beyond the onset t0. Immutable once built.
class YoungFunction {
  public:
    YoungFunction(YoungFamily family, double beta, double N, double t0,
                  std::vector<YoungSegment> pieces, double M = 0.0);

    double value(double t) const;
    double log_value(double t) const;       // log B(t), stable for huge t
    double inverse(double y) const;         // right-continuous inverse
    double inverse_from_log(double log_y) const;
    dd inverse_from_log_dd(dd log_y) const; // tail branch, extended precision
    double derivative(double t) const;      // left-continuous b
    double derivative_inverse(double y) const;       // inf{t : b(t) >= y}
    double derivative_inverse_from_log(double log_y) const;
    dd derivative_inverse_from_log_dd(dd log_y) const;

    double beta() const { return beta_; }
    double tail_scale() const { return N_; }
    double tail_onset() const { return t0_; }
    double envelope_M() const { return M_; }
    YoungFamily family() const { return family_; }
    const std::vector<YoungSegment>& pieces() const { return pieces_; }

    // Junction slopes and per-piece curvature are monotone (convexity).
    bool convexity_certificate() const;

  private:
    const YoungSegment& piece_at(double t) const;
    YoungFamily family_;
    double beta_;
    double N_;
    double t0_;
    double M_;
    std::vector<YoungSegment> pieces_;
};

// B(t) = N e^{t^beta} on (0, inf), 0 at 0. Requires beta >= 1.
YoungFunction plain_exp(double N, double beta);

// B_M = E/(M-1) with E the convex envelope of e^{t^beta} - 1.
YoungFunction construct_envelope_M(double M, double beta);

struct HeadTailResult {
    YoungFunction B;
    double N;
    double t0;
};

// B = N*curlyA with curlyA linear up to t0 then e^{t^beta}; t0 picked just
// large enough for convexity, N = 1/(M + e^{t0^beta}).
HeadTailResult construct_head_tail(double M, double beta);

// Same shape with N and t0 prescribed directly.
YoungFunction head_tail_with(double N, double beta, double t0);

// N*underlineA: zero on [0,t0'), affine a(t0)(t-t0)+A(t0) on [t0',t0),
// e^{t^beta} beyond, with t0' = t0 - A(t0)/a(t0).
YoungFunction construct_flattened(double N, double beta, double t0);

// Young conjugate, evaluated through the derivative inverse rather than a
// gridded Legendre transform; junction support points kept for bracketing.
class ConjugateYoung {
  public:
    explicit ConjugateYoung(YoungFunction base);

    double value(double t) const;
    // conj(e^L) * e^{-L}: the per-unit-argument conjugate, usable when e^L
    // overflows doubles.
    double value_factor_log(double log_t) const;
    double inverse(double y) const;          // right-continuous inverse
    double plateau_end() const { return plateau_end_; }
    const YoungFunction& base() const { return base_; }

  private:
    YoungFunction base_;
    double plateau_end_;
    std::vector<std::pair<double, double>> table_; // (t, conj(t)) at junctions
};

std::string young_to_json(const YoungFunction& B);
YoungFunction young_from_json(const std::string& text);

} // namespace gaussmoser

#endif
