#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "gaussmoser/gauss.hpp"
#include "gaussmoser/norms.hpp"
#include "gaussmoser/rearrange.hpp"
#include "support.hpp"

using namespace gaussmoser;
using namespace gmtest;

namespace {

Profile identity_profile() {
    Profile p;
    p.h = [](double t) { return t; };
    p.h_prime = [](double) { return 1.0; };
    return p;
}

Profile medmv_profile(double k) {
    // 0 on (-inf,0], k*t on (0,1/k], 1 beyond
    return piecewise_linear_profile({0.0, 1.0 / k}, {k});
}

} // namespace

TEST_SUITE_BEGIN("rearrange");

TEST_CASE("signed rearrangement of the identity is the tail inverse") {
    auto u0 = signed_rearrangement(identity_profile());
    for (double s : {0.01, 0.2, 0.5, 0.8, 0.99}) {
        CHECK(u0(s) == doctest::Approx(gauss_tail_inv(s)).epsilon(1e-14));
    }
    Profile c;
    c.h = [](double) { return 3.25; };
    c.h_prime = [](double) { return 0.0; };
    auto uc = signed_rearrangement(c);
    CHECK(uc(0.1) == 3.25);
    CHECK(uc(0.9) == 3.25);
}

TEST_CASE("gradient rearrangement: identity and step families") {
    auto g1 = gradient_rearrangement(identity_profile());
    for (double s : {0.05, 0.3, 0.7, 0.95}) {
        CHECK(g1.value(s) == doctest::Approx(1.0).epsilon(1e-9));
    }

    double k = 4.0;
    auto gk = gradient_rearrangement(medmv_profile(k));
    double cut = gauss_tail(0.0) - gauss_tail(1.0 / k);
    CHECK(gk.support_end == doctest::Approx(cut).epsilon(1e-12));
    CHECK(gk.value(cut * 0.5) == doctest::Approx(k).epsilon(1e-9));
    CHECK(gk.value(cut * 1.01) == 0.0);
}

TEST_CASE("non-monotone gradient branches are rejected") {
    Profile wavy;
    wavy.h = [](double t) { return t + 0.5 * std::sin(t); };
    wavy.h_prime = [](double t) { return 1.0 + 0.5 * std::cos(t); };
    // no breakpoints declared, so |h'| oscillates inside one branch
    CHECK_THROWS_AS(gradient_rearrangement(wavy), std::invalid_argument);
}

TEST_CASE("maximal function: constants, powers, divergence") {
    Quadrature q;
    auto fc = rf_constant(2.5, 1.0);
    CHECK(maximal_function(fc, 0.3, q) == doctest::Approx(2.5).epsilon(1e-10));

    auto fp = rf_power(1.0, 0.5, 1.0); // r^{-1/2}: phi**(s) = 2 s^{-1/2}
    for (double s : {0.1, 0.4, 0.9}) {
        CHECK(maximal_function(fp, s, q) ==
              doctest::Approx(2.0 / std::sqrt(s)).epsilon(1e-9));
    }

    RearrangedFunction bad;
    bad.support_end = 1.0;
    bad.value = [](double s) { return 1.0 / s; };
    CHECK(maximal_function(bad, 0.5, q) ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("maximal function of the power-log family has the clean closed form") {
    // g(s) = (log(1/(Ns)))^{1/b} - (1/b)(log(1/(Ns)))^{1/b-1} integrates to
    // s (log(1/(Ns)))^{1/b}
    double N = 2.0, beta = 1.0, s0 = std::exp(-1.0) / N;
    RearrangedFunction g;
    g.support_end = s0;
    g.value = [=](double s) {
        if (s >= s0) return 0.0;
        double L = std::log(1.0 / (N * s));
        return std::pow(L, 1.0 / beta) -
               (1.0 / beta) * std::pow(L, 1.0 / beta - 1.0);
    };
    Quadrature q;
    for (double s : {s0 * 0.9, s0 * 0.3, s0 * 0.01}) {
        double expect = std::pow(std::log(1.0 / (N * s)), 1.0 / beta);
        CHECK(maximal_function(g, s, q) == doctest::Approx(expect).epsilon(1e-9));
    }
    // above the support the average decays like s0/s
    double above = maximal_function(g, 2.0 * s0, q);
    CHECK(above ==
          doctest::Approx(0.5 * std::pow(std::log(1.0 / (N * s0)), 1.0 / beta))
              .epsilon(1e-9));
}

TEST_CASE("median and mean") {
    Quadrature q;
    auto [m0, v0] = median_and_mean(identity_profile(), q);
    CHECK(m0 == 0.0);
    CHECK(std::fabs(v0) < 1e-12);

    // odd profile: zero mean
    Profile odd;
    odd.h = [](double t) { return t * t * t; };
    odd.h_prime = [](double t) { return 3.0 * t * t; };
    auto [m1, v1] = median_and_mean(odd, q);
    CHECK(m1 == 0.0);
    CHECK(std::fabs(v1) < 1e-11);

    // u_1: mean = int_0^1 t dgamma + Phi(1) = phi(0) - phi(1) + Phi(1)
    auto [m2, v2] = median_and_mean(medmv_profile(1.0), q);
    CHECK(m2 == 0.0);
    double expect = gauss_density(0.0) - gauss_density(1.0) + gauss_tail(1.0);
    CHECK(v2 == doctest::Approx(expect).epsilon(1e-11));
}

TEST_CASE("median-mean bound: sharp family and random profiles") {
    Quadrature q;
    Profile c;
    c.h = [](double) { return 1.0; };
    c.h_prime = [](double) { return 0.0; };
    auto [l0, r0] = med_mv_bound(c, q);
    CHECK(l0 == 0.0);
    CHECK(r0 == 0.0);

    auto [l1, r1] = med_mv_bound(medmv_profile(1000.0), q);
    CHECK(l1 <= r1 + 1e-10);
    CHECK(l1 / r1 > 0.99);
    CHECK(l1 / r1 <= 1.0);

    std::mt19937_64 rng(424242);
    for (int i = 0; i < 100; ++i) {
        auto p = random_profile(rng);
        auto [lhs, rhs] = med_mv_bound(p, q);
        CHECK(lhs <= rhs + 1e-10);
    }
}

TEST_CASE("symubound evaluation") {
    Quadrature q;
    auto zero = rf_constant(0.0, 0.5);
    CHECK(symubound_rhs(zero, 0.25, q) == 0.0);

    // identity profile: bound must dominate u°(s) on (0,1/2]
    auto ustar = gradient_rearrangement(identity_profile());
    auto ucirc = signed_rearrangement(identity_profile());
    for (double s : {gauss_tail(1.0), 0.1, 0.3}) {
        double bound = symubound_rhs(ustar, s, q);
        CHECK(bound + 1e-9 >= ucirc(s));
    }
}

TEST_CASE("Polya-Szego: equality for monotone profiles, zero for constants") {
    Quadrature q;
    auto B = construct_head_tail(2.0, 2.0).B;

    Profile smooth;
    smooth.h = [](double t) { return t + std::tanh(t); };
    smooth.h_prime = [](double t) {
        double c = std::cosh(t);
        return 1.0 + 1.0 / (c * c);
    };
    auto [lhs, rhs] = polya_szego_check(smooth, B, q);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));

    Profile c;
    c.h = [](double) { return 2.0; };
    c.h_prime = [](double) { return 0.0; };
    auto [lz, rz] = polya_szego_check(c, B, q);
    CHECK(lz == 0.0);
    CHECK(rz == 0.0);
}

TEST_CASE("Hardy-Littlewood: sorted equality, exhaustive small cases") {
    std::vector<double> f = {5.0, 4.0, 2.5, 1.0};
    std::vector<double> g = {3.0, 2.0, 1.5, 0.5};
    std::vector<int> full = {0, 1, 2, 3};
    auto [le, re] = hardy_littlewood_check(f, g, full);
    CHECK(le == doctest::Approx(re).epsilon(1e-15));

    // g identically 1: equality for any subset size measured from the top
    std::vector<double> ones(4, 1.0);
    auto [l1, r1] = hardy_littlewood_check(f, ones, full);
    CHECK(l1 == doctest::Approx(r1).epsilon(1e-15));

    std::vector<double> short_g = {1.0, 2.0};
    CHECK_THROWS_AS(hardy_littlewood_check(f, short_g, full),
                    std::invalid_argument);

    // exhaustive: all permutations for n <= 6, every prefix subset
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int n = 2; n <= 6; ++n) {
        std::vector<double> base(n), other(n);
        for (int i = 0; i < n; ++i) base[i] = u(rng), other[i] = u(rng);
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        bool strict_seen = false;
        do {
            std::vector<double> fp(n);
            for (int i = 0; i < n; ++i) fp[i] = base[size_t(perm[size_t(i)])];
            for (int m = 1; m <= n; ++m) {
                std::vector<int> subset;
                for (int i = 0; i < m; ++i) subset.push_back(i);
                auto [lhs, rhs] = hardy_littlewood_check(fp, other, subset);
                CHECK(lhs <= rhs + 1e-12);
                if (lhs < rhs - 1e-9) strict_seen = true;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        CHECK(strict_seen); // generically strict for some arrangement
    }
}

TEST_CASE("equimeasurability of monotone profiles") {
    // gamma({u > t}) computed by inverting h equals |{u° > t}|
    auto p = piecewise_linear_profile({-1.0, 0.5, 2.0}, {0.7, 1.9});
    auto ucirc = signed_rearrangement(p);
    double h_lo = p.h(-1.0), h_hi = p.h(2.0);
    for (int j = 1; j < 20; ++j) {
        double t = h_lo + (h_hi - h_lo) * j / 20.0;
        // invert h by bisection
        double lo = -1.0, hi = 2.0;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            (p.h(mid) <= t ? lo : hi) = mid;
        }
        double gamma_measure = gauss_tail(0.5 * (lo + hi));
        // |{s : u°(s) > t}| by bisection in s (u° nonincreasing)
        double slo = 1e-12, shi = 1.0 - 1e-12;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (slo + shi);
            (ucirc(mid) > t ? slo : shi) = mid;
        }
        CHECK(gamma_measure == doctest::Approx(0.5 * (slo + shi)).epsilon(1e-9));
    }
}

TEST_CASE("Ehrhard fixed point for monotone profiles") {
    auto p = piecewise_linear_profile({-0.5, 0.5, 1.5}, {1.2, 0.4});
    auto ucirc = signed_rearrangement(p);
    for (double x : {-2.0, -0.3, 0.2, 0.9, 2.5}) {
        CHECK(ucirc(gauss_tail(x)) == doctest::Approx(p.h(x)).epsilon(1e-12));
    }
}

TEST_CASE("sample rearrangement is idempotent and nonincreasing") {
    std::vector<double> v = {0.3, -2.0, 1.4, 1.4, 0.0};
    auto r = sample_rearrangement(v);
    CHECK(std::is_sorted(r.begin(), r.end(), std::greater<double>()));
    CHECK(sample_rearrangement(r) == r);
}

TEST_CASE("phi* <= phi** pointwise") {
    Quadrature q;
    auto f = rf_powerlog(1.0, 1.5, 2.0, 0.3);
    for (double s : {0.01, 0.05, 0.2, 0.6, 0.9}) {
        CHECK(f.value(s) <= maximal_function(f, s, q) + 1e-10);
    }
}

TEST_SUITE_END();
