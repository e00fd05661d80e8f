#include "gaussmoser/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace gaussmoser {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tail_value(const YoungSegment& p, double beta, double t) {
    return p.scale * std::exp(std::pow(t, beta)) + p.shift;
}

// left-continuous derivative of the tail piece
double tail_slope(const YoungSegment& p, double beta, double t) {
    return p.scale * beta * std::pow(t, beta - 1.0) * std::exp(std::pow(t, beta));
}

double tail_log_slope(const YoungSegment& p, double beta, double t) {
    return std::log(p.scale * beta) + (beta - 1.0) * std::log(t) +
           std::pow(t, beta);
}

inline double to_double(double x) { return x; }

// Solve t^beta + (beta-1) log t = L - log(scale*beta) on [lo, inf).
template <class R>
R solve_tail_slope(double beta, double scale, R L, double lo) {
    R target = L - R{std::log(scale * beta)};
    double tg = to_double(target);
    double seed = tg > 1.0 ? std::pow(tg, 1.0 / beta) : 1.0;
    for (int i = 0; i < 80; ++i) {
        double f = std::pow(seed, beta) + (beta - 1.0) * std::log(seed) - tg;
        double fp = beta * std::pow(seed, beta - 1.0) + (beta - 1.0) / seed;
        double step = f / fp;
        double next = seed - step;
        if (!(next > 0.0)) next = 0.5 * seed;
        if (std::fabs(next - seed) < 1e-15 * (1.0 + seed)) { seed = next; break; }
        seed = next;
    }
    if (seed < lo) seed = lo;
    R t{seed};
    if constexpr (!std::is_same_v<R, double>) {
        // polish in extended precision
        for (int i = 0; i < 4; ++i) {
            R f = pow(t, beta) + R{beta - 1.0} * log(t) - target;
            R fp = R{beta} * pow(t, beta - 1.0) + R{beta - 1.0} / t;
            t = t - f / fp;
        }
        if (to_double(t) < lo) t = R{lo};
    }
    return t;
}

} // namespace

YoungFunction::YoungFunction(YoungFamily family, double beta, double N,
                             double t0, std::vector<YoungSegment> pieces,
                             double M)
    : family_(family), beta_(beta), N_(N), t0_(t0), M_(M),
      pieces_(std::move(pieces)) {
    if (!(beta_ > 0.0)) throw std::domain_error("YoungFunction: beta must be > 0");
    if (pieces_.empty() || pieces_.back().kind != YoungSegment::Kind::exp_tail)
        throw std::invalid_argument("YoungFunction: needs an exponential tail");
}

const YoungSegment& YoungFunction::piece_at(double t) const {
    for (const auto& p : pieces_)
        if (t < p.hi) return p;
    return pieces_.back();
}

double YoungFunction::value(double t) const {
    if (!(t >= 0.0)) throw std::domain_error("YoungFunction::value: t < 0");
    if (t == 0.0) return 0.0;
    const auto& p = piece_at(t);
    switch (p.kind) {
        case YoungSegment::Kind::zero: return 0.0;
        case YoungSegment::Kind::affine: return p.slope * (t - p.t_ref) + p.offset;
        case YoungSegment::Kind::exp_tail: return tail_value(p, beta_, t);
    }
    return 0.0;
}

double YoungFunction::log_value(double t) const {
    const auto& p = piece_at(t);
    if (p.kind == YoungSegment::Kind::exp_tail) {
        double e = std::pow(t, beta_);
        return std::log(p.scale) + e +
               std::log1p(p.shift / p.scale * std::exp(-e));
    }
    double v = value(t);
    return v > 0.0 ? std::log(v) : -kInf;
}

double YoungFunction::inverse(double y) const {
    if (!(y >= 0.0)) return 0.0;
    for (const auto& p : pieces_) {
        double v_start, v_end;
        switch (p.kind) {
            case YoungSegment::Kind::zero:
                continue; // handled by the jump test of the next piece
            case YoungSegment::Kind::affine:
                v_start = p.slope * (p.lo - p.t_ref) + p.offset;
                v_end = p.slope * (p.hi - p.t_ref) + p.offset;
                break;
            case YoungSegment::Kind::exp_tail:
                v_start = p.lo > 0.0 ? tail_value(p, beta_, p.lo) : p.scale + p.shift;
                v_end = kInf;
                break;
            default:
                continue;
        }
        if (y < v_start) return p.lo; // y falls in the jump (or plateau) at p.lo
        if (y < v_end) {
            if (p.kind == YoungSegment::Kind::affine)
                return p.t_ref + (y - p.offset) / p.slope;
            double arg = (y - p.shift) / p.scale;
            double e = std::log(arg);
            return e > 0.0 ? std::pow(e, 1.0 / beta_) : p.lo;
        }
    }
    return pieces_.back().hi;
}

double YoungFunction::inverse_from_log(double log_y) const {
    const auto& tail = pieces_.back();
    double onset_log = tail.lo > 0.0
                           ? std::log(tail_value(tail, beta_, tail.lo))
                           : std::log(tail.scale + tail.shift);
    if (log_y >= onset_log) {
        double e = log_y - std::log(tail.scale);
        if (tail.shift != 0.0) e += std::log1p(-tail.shift * std::exp(-log_y));
        return e > 0.0 ? std::pow(e, 1.0 / beta_) : 0.0;
    }
    return inverse(std::exp(log_y));
}

dd YoungFunction::inverse_from_log_dd(dd log_y) const {
    const auto& tail = pieces_.back();
    double onset_log = tail.lo > 0.0
                           ? std::log(tail_value(tail, beta_, tail.lo))
                           : std::log(tail.scale + tail.shift);
    if (log_y.hi < onset_log) return dd(inverse_from_log(to_double(log_y)));
    dd e = log_y - log(dd(tail.scale));
    if (tail.shift != 0.0) e += log1p(-dd(tail.shift) * exp(-log_y));
    if (!(e.hi > 0.0)) return dd(inverse_from_log(to_double(log_y)));
    return pow(e, 1.0 / beta_);
}

double YoungFunction::derivative(double t) const {
    if (!(t >= 0.0)) throw std::domain_error("YoungFunction::derivative: t < 0");
    if (t == 0.0) return 0.0;
    // left continuity: an interior junction belongs to the earlier piece
    const YoungSegment* sel = &pieces_.back();
    for (const auto& p : pieces_)
        if (t <= p.hi) { sel = &p; break; }
    switch (sel->kind) {
        case YoungSegment::Kind::zero: return 0.0;
        case YoungSegment::Kind::affine: return sel->slope;
        case YoungSegment::Kind::exp_tail: return tail_slope(*sel, beta_, t);
    }
    return 0.0;
}

double YoungFunction::derivative_inverse(double y) const {
    if (!(y > 0.0)) return 0.0;
    return derivative_inverse_from_log(std::log(y));
}

double YoungFunction::derivative_inverse_from_log(double log_y) const {
    for (const auto& p : pieces_) {
        switch (p.kind) {
            case YoungSegment::Kind::zero:
                break; // b = 0 here, never reaches a positive level
            case YoungSegment::Kind::affine:
                if (p.slope > 0.0 && log_y <= std::log(p.slope)) return p.lo;
                break;
            case YoungSegment::Kind::exp_tail: {
                if (p.lo > 0.0 && log_y <= tail_log_slope(p, beta_, p.lo))
                    return p.lo;
                if (p.lo <= 0.0 && beta_ == 1.0 &&
                    log_y <= std::log(p.scale))
                    return 0.0; // b(0+) = scale when beta = 1
                return solve_tail_slope<double>(beta_, p.scale, log_y, p.lo);
            }
        }
    }
    return pieces_.back().lo;
}

dd YoungFunction::derivative_inverse_from_log_dd(dd log_y) const {
    const auto& tail = pieces_.back();
    if (tail.lo > 0.0 && to_double(log_y) <= tail_log_slope(tail, beta_, tail.lo))
        return dd(derivative_inverse_from_log(to_double(log_y)));
    return solve_tail_slope<dd>(beta_, tail.scale, log_y, tail.lo);
}

bool YoungFunction::convexity_certificate() const {
    double prev_slope = 0.0;
    double prev_value = 0.0;
    const double tol = 1e-12;
    for (const auto& p : pieces_) {
        double v_start, s_start;
        switch (p.kind) {
            case YoungSegment::Kind::zero:
                v_start = 0.0;
                s_start = 0.0;
                break;
            case YoungSegment::Kind::affine:
                v_start = p.slope * (p.lo - p.t_ref) + p.offset;
                s_start = p.slope;
                break;
            case YoungSegment::Kind::exp_tail: {
                if (beta_ < 1.0) {
                    double t_min = std::pow((1.0 - beta_) / beta_, 1.0 / beta_);
                    if (p.lo < t_min * (1.0 - 1e-12)) return false;
                }
                v_start = p.lo > 0.0 ? tail_value(p, beta_, p.lo) : 0.0;
                s_start = p.lo > 0.0 ? tail_slope(p, beta_, p.lo)
                                     : (beta_ > 1.0 ? 0.0 : p.scale * beta_);
                break;
            }
            default:
                return false;
        }
        if (p.lo > 0.0 && v_start + tol * (1.0 + std::fabs(v_start)) < prev_value)
            return false;
        if (s_start + tol * (1.0 + std::fabs(s_start)) < prev_slope) return false;
        switch (p.kind) {
            case YoungSegment::Kind::zero:
                prev_slope = 0.0;
                prev_value = 0.0;
                break;
            case YoungSegment::Kind::affine:
                prev_slope = p.slope;
                prev_value = p.slope * (p.hi - p.t_ref) + p.offset;
                break;
            case YoungSegment::Kind::exp_tail:
                prev_slope = kInf;
                prev_value = kInf;
                break;
        }
    }
    return true;
}

YoungFunction plain_exp(double N, double beta) {
    if (!(N > 0.0)) throw std::domain_error("plain_exp: N must be > 0");
    if (!(beta >= 1.0))
        throw std::domain_error("plain_exp: needs beta >= 1 to be convex on (0,inf)");
    YoungSegment tail{YoungSegment::Kind::exp_tail, 0.0, kInf, 0, 0, 0, N, 0.0};
    return YoungFunction(YoungFamily::plain_exp, beta, N, 0.0, {tail});
}

YoungFunction construct_envelope_M(double M, double beta) {
    if (!(M > 1.0)) throw std::domain_error("construct_envelope_M: M must be > 1");
    double N = 1.0 / (M - 1.0);
    if (beta >= 1.0) {
        // e^{t^beta} - 1 is already convex
        YoungSegment tail{YoungSegment::Kind::exp_tail, 0.0, kInf, 0, 0, 0, N, -N};
        return YoungFunction(YoungFamily::envelope, beta, N, 0.0, {tail}, M);
    }
    // beta < 1: affine from the origin up to the tangency point with
    // e^{t^beta}-1; tangency solves 1 - e^{-y} = beta*y in y = t*^beta.
    double lo = 1e-14, hi = 1.0 / beta + 1.0;
    for (int i = 0; i < 200; ++i) {
        double y = 0.5 * (lo + hi);
        double g = 1.0 - std::exp(-y) - beta * y;
        (g > 0.0 ? lo : hi) = y;
        if (hi - lo < 1e-14 * hi) break;
    }
    double y = 0.5 * (lo + hi);
    double tstar = std::pow(y, 1.0 / beta);
    double slope = N * beta * std::pow(tstar, beta - 1.0) * std::exp(y);
    YoungSegment head{YoungSegment::Kind::affine, 0.0, tstar, slope, 0.0, 0.0, 0, 0};
    YoungSegment tail{YoungSegment::Kind::exp_tail, tstar, kInf, 0, 0, 0, N, -N};
    return YoungFunction(YoungFamily::envelope, beta, N, tstar, {head, tail}, M);
}

YoungFunction head_tail_with(double N, double beta, double t0) {
    if (!(N > 0.0) || !(t0 > 0.0))
        throw std::domain_error("head_tail_with: need N > 0 and t0 > 0");
    double A0 = std::exp(std::pow(t0, beta));
    YoungSegment head{YoungSegment::Kind::affine, 0.0, t0, N * A0 / t0, 0.0, 0.0, 0, 0};
    YoungSegment tail{YoungSegment::Kind::exp_tail, t0, kInf, 0, 0, 0, N, 0.0};
    YoungFunction B(YoungFamily::head_tail, beta, N, t0, {head, tail});
    if (!B.convexity_certificate())
        throw std::invalid_argument("head_tail_with: not convex for this t0");
    return B;
}

HeadTailResult construct_head_tail(double M, double beta) {
    if (!(M > 1.0)) throw std::domain_error("construct_head_tail: M must be > 1");
    // junction slope condition e^{t0^beta}/t0 <= beta t0^{beta-1} e^{t0^beta}
    double t0 = std::max(1.0, std::pow(beta, -1.0 / beta));
    if (beta < 1.0)
        t0 = std::max(t0, std::pow((1.0 - beta) / beta, 1.0 / beta));
    double N = 1.0 / (M + std::exp(std::pow(t0, beta)));
    return {head_tail_with(N, beta, t0), N, t0};
}

YoungFunction construct_flattened(double N, double beta, double t0) {
    if (!(beta > 2.0))
        throw std::domain_error("construct_flattened: beta must be > 2");
    if (!(N > 0.0)) throw std::domain_error("construct_flattened: N must be > 0");
    double A0 = std::exp(std::pow(t0, beta));
    double a0 = beta * std::pow(t0, beta - 1.0) * A0;
    double t0p = t0 - A0 / a0; // = t0 - t0^{1-beta}/beta
    if (!(t0p > 0.0))
        throw std::invalid_argument("construct_flattened: t0' <= 0, t0 too small");
    YoungSegment plateau{YoungSegment::Kind::zero, 0.0, t0p, 0, 0, 0, 0, 0};
    // anchored at t0' so the ramp vanishes there exactly
    YoungSegment ramp{YoungSegment::Kind::affine, t0p, t0, N * a0, t0p, 0.0, 0, 0};
    YoungSegment tail{YoungSegment::Kind::exp_tail, t0, kInf, 0, 0, 0, N, 0.0};
    return YoungFunction(YoungFamily::flattened, beta, N, t0, {plateau, ramp, tail});
}

ConjugateYoung::ConjugateYoung(YoungFunction base) : base_(std::move(base)) {
    // plateau of the conjugate: conj(t) = 0 for t <= inf B(tau)/tau
    const auto& first = base_.pieces().front();
    double beta = base_.beta();
    switch (first.kind) {
        case YoungSegment::Kind::zero: plateau_end_ = 0.0; break;
        case YoungSegment::Kind::affine: plateau_end_ = first.slope; break;
        case YoungSegment::Kind::exp_tail:
            if (first.shift == 0.0) {
                // N e^{tau^beta}/tau dips at tau = beta^{-1/beta}
                plateau_end_ = first.scale * std::pow(beta, 1.0 / beta) *
                               std::exp(1.0 / beta);
            } else {
                // continuous at 0 (envelope shape)
                plateau_end_ = beta > 1.0 ? 0.0 : first.scale * beta;
            }
            break;
        default: plateau_end_ = 0.0;
    }
    for (const auto& p : base_.pieces()) {
        if (p.lo <= 0.0) continue;
        double b_left = base_.derivative(p.lo);
        double b_right = base_.derivative(std::nextafter(p.lo, kInf));
        for (double y : {b_left, b_right}) {
            if (y > 0.0 && std::isfinite(y)) table_.emplace_back(y, value(y));
        }
    }
    std::sort(table_.begin(), table_.end());
}

double ConjugateYoung::value(double t) const {
    if (!(t >= 0.0)) throw std::domain_error("ConjugateYoung::value: t < 0");
    if (t == 0.0) return 0.0;
    double tau = base_.derivative_inverse(t);
    if (tau <= 0.0) return 0.0;
    return std::max(0.0, t * tau - base_.value(tau));
}

double ConjugateYoung::value_factor_log(double log_t) const {
    double beta = base_.beta();
    const auto& tail = base_.pieces().back();
    double onset = tail.lo > 0.0 ? tail_log_slope(tail, beta, tail.lo)
                                 : std::log(tail.scale * beta);
    bool on_tail = tail.lo <= 0.0 ? log_t > onset + 1.0 : log_t > onset;
    if (on_tail) {
        double tau = base_.derivative_inverse_from_log(log_t);
        if (tau > tail.lo || tail.lo <= 0.0) {
            // B(tau) e^{-L} = tau^{1-beta}/beta + shift e^{-L} via b(tau) = e^L
            double r = std::pow(tau, 1.0 - beta) / beta;
            if (tail.shift != 0.0 && log_t < 700.0)
                r += tail.shift * std::exp(-log_t);
            return std::max(0.0, tau - r);
        }
    }
    double t = std::exp(log_t);
    return value(t) / t;
}

double ConjugateYoung::inverse(double y) const {
    if (!(y > 0.0)) return plateau_end_;
    double lo = plateau_end_;
    double hi = std::max(1.0, 2.0 * lo + 1.0);
    for (int i = 0; i < 400 && value(hi) <= y; ++i) {
        lo = hi;
        hi *= 2.0;
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double v = value(mid);
        double tau = base_.derivative_inverse(mid); // conj'(t) = tau*(t)
        if (tau > 0.0) {
            double nt = mid - (v - y) / tau;
            if (nt > lo && nt < hi) {
                mid = nt;
                v = value(mid);
            }
        }
        (v <= y ? lo : hi) = mid;
        if (hi - lo <= 1e-14 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

std::string young_to_json(const YoungFunction& B) {
    nlohmann::ordered_json j;
    switch (B.family()) {
        case YoungFamily::plain_exp: j["family"] = "plain-exp"; break;
        case YoungFamily::envelope: j["family"] = "envelope"; break;
        case YoungFamily::head_tail: j["family"] = "head-tail"; break;
        case YoungFamily::flattened: j["family"] = "flattened"; break;
    }
    j["beta"] = B.beta();
    j["N"] = B.tail_scale();
    j["t0"] = B.tail_onset();
    if (B.family() == YoungFamily::envelope) j["M"] = B.envelope_M();
    return j.dump();
}

YoungFunction young_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    std::string family = j.at("family").get<std::string>();
    double beta = j.at("beta").get<double>();
    if (family == "plain-exp")
        return plain_exp(j.value("N", 1.0), beta);
    if (family == "envelope")
        return construct_envelope_M(j.at("M").get<double>(), beta);
    if (family == "head-tail") {
        if (j.contains("M") && !j.contains("t0"))
            return construct_head_tail(j.at("M").get<double>(), beta).B;
        return head_tail_with(j.value("N", 1.0), beta, j.at("t0").get<double>());
    }
    if (family == "flattened")
        return construct_flattened(j.value("N", 1.0), beta,
                                   j.at("t0").get<double>());
    throw std::invalid_argument("young_from_json: unknown family " + family);
}

} // namespace gaussmoser
