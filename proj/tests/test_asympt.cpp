#include "doctest.h"

#include <cmath>

#include "gaussmoser/asympt.hpp"
#include "gaussmoser/gauss.hpp"
#include "gaussmoser/quadrature.hpp"

using namespace gaussmoser;

TEST_SUITE_BEGIN("asympt");

TEST_CASE("target equal to the first term gives ratio one identically") {
    AsymptoticExpansion e;
    e.label = "identity";
    e.grid = {2.0, 4.0, 8.0};
    e.target = [](double t) { return dd(t) * dd(t); };
    e.terms = {[](double t) { return dd(t) * dd(t); }};
    auto rows = ratio_curve(e);
    for (const auto& r : rows) CHECK(r.ratio == 1.0);
    CHECK(check_entry(e).pass);
}

TEST_CASE("vanishing term is a configuration error") {
    AsymptoticExpansion e;
    e.label = "bad";
    e.grid = {1.0};
    e.target = [](double t) { return dd(t); };
    e.terms = {[](double) { return dd(0.0); }};
    CHECK_THROWS_AS(ratio_curve(e), std::invalid_argument);
}

TEST_CASE("tail log-mass ratios approach one monotonically") {
    AsymptoticExpansion e;
    e.label = "neg-log-tail-short";
    e.grid = {5.0, 10.0, 20.0, 40.0};
    e.target = [](double t) { return -log_gauss_tail_dd(dd(t)); };
    e.terms = {[](double t) { return ldexp(dd(t) * dd(t), -1); },
               [](double t) { return log(dd(t)); }};
    auto rows = ratio_curve(e);
    double prev1 = 1e300, prev2 = 1e300;
    for (const auto& r : rows) {
        if (r.j == 1) {
            CHECK(std::fabs(r.ratio - 1.0) < prev1);
            prev1 = std::fabs(r.ratio - 1.0);
        } else {
            CHECK(std::fabs(r.ratio - 1.0) < prev2);
            prev2 = std::fabs(r.ratio - 1.0);
        }
    }
    CHECK(prev1 < 6e-3); // (log 40 + log sqrt(2pi)) / (40^2/2)
    CHECK(prev2 < 0.26); // second-order constant ~log sqrt(2pi) over log t
}

TEST_CASE("bracket power integrals against closed forms") {
    // sigma = 0: int_2^t dtau = t - 2 exactly
    auto cat = builtin_expansions(1.0, plain_exp(1.0, 1.0), true);
    Quadrature q;
    auto psi0 = [&](double t) {
        return integrate([](double) { return 1.0; }, 2.0, t, q);
    };
    CHECK(psi0(37.0) == doctest::Approx(35.0).epsilon(1e-14));

    // sigma = 1/2: t sqrt(t^2-1)/2 - (1/2) log(t + sqrt(t^2-1)), from 2
    for (const auto& e : cat.entries) {
        if (e.label != "bracket-area-half") continue;
        double t = 50.0;
        auto closed = [](double x) {
            return 0.5 * x * std::sqrt(x * x - 1.0) -
                   0.5 * std::log(x + std::sqrt(x * x - 1.0));
        };
        double expect = closed(t) - closed(2.0);
        CHECK(to_double(e.target(t)) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("catalog entries all pass their own invariants") {
    for (double beta : {1.0, 2.0}) {
        auto B = plain_exp(1.0, beta);
        auto cat = builtin_expansions(beta, B, true);
        CHECK(cat.entries.size() >= 7);
        for (const auto& e : cat.entries) {
            auto v = check_entry(e);
            INFO(e.label, " beta=", beta, " -> ", v.detail);
            CHECK(v.pass);
        }
    }
}

TEST_CASE("head-integral entry hits the documented accuracy at t=20") {
    auto B = plain_exp(1.0, 2.0);
    auto cat = builtin_expansions(2.0, B, true);
    for (const auto& e : cat.entries) {
        if (e.label != "head-integral") continue;
        auto rows = ratio_curve(e);
        for (const auto& r : rows) {
            if (r.t == 20.0) CHECK(std::fabs(r.ratio - 1.0) < 0.05);
        }
    }
}

TEST_CASE("tail-area second term: measured ratios along the deep grid") {
    auto B = plain_exp(1.0, 2.0);
    auto cat = builtin_expansions(2.0, B, true);
    for (const auto& e : cat.entries) {
        if (e.label != "tail-area-second") continue;
        auto rows = ratio_curve(e);
        double at_1e3 = 0.0, at_end = 0.0;
        for (const auto& r : rows) {
            if (r.j != 2) continue;
            if (r.t == 1e3) at_1e3 = r.ratio;
            at_end = r.ratio;
        }
        // the ratio at t = 1e3 genuinely sits near 1.30: the third-order
        // excess 2 log sqrt(2pi)/log t is still 0.27 there; it enters the
        // ten-percent band only out near t ~ 1e9
        CHECK(at_1e3 == doctest::Approx(1.3005).epsilon(2e-3));
        CHECK(std::fabs(at_end - 1.0) < 0.1);
    }
}

TEST_CASE("extended precision is load-bearing on the deep grid") {
    auto B = plain_exp(1.0, 2.0);
    auto hi = builtin_expansions(2.0, B, true);
    auto lo = builtin_expansions(2.0, B, false);
    double r_hi = 0.0, r_lo = 0.0;
    for (const auto& e : hi.entries)
        if (e.label == "tail-area-second") r_hi = check_entry(e).final_value;
    for (const auto& e : lo.entries)
        if (e.label == "tail-area-second") r_lo = check_entry(e).final_value;
    CHECK(std::fabs(r_hi - 1.0924) < 2e-3);
    // the double path drowns in rounding noise out there
    CHECK(std::fabs(r_lo - r_hi) > 0.05);
}

TEST_CASE("case-dependent registrations and notices") {
    {
        auto B = head_tail_with(1.0, 4.0, 3.0);
        auto cat = builtin_expansions(4.0, B, true);
        bool shift_seen = false, upsilon_note = false;
        for (const auto& e : cat.entries) {
            if (e.label == "head-tail-area-shift") {
                shift_seen = true;
                auto v = check_entry(e);
                CHECK(v.pass);
                CHECK(v.final_value < -1.0); // the shift is strongly negative
            }
            if (e.label == "flattened-shift") {
                auto v = check_entry(e);
                CHECK(v.pass);
            }
        }
        for (const auto& n : cat.notices)
            if (n.find("bracket-log-area") != std::string::npos)
                upsilon_note = true;
        CHECK(shift_seen);
        CHECK(upsilon_note);
    }
    {
        // near beta = 2 the Upsilon entry cannot settle and is omitted
        auto B = construct_head_tail(2.0, 1.8).B;
        auto cat = builtin_expansions(1.8, B, true);
        bool found = false, note = false;
        for (const auto& e : cat.entries)
            if (e.label == "bracket-log-area") found = true;
        for (const auto& n : cat.notices)
            if (n.find("bracket-log-area") != std::string::npos) note = true;
        CHECK_FALSE(found);
        CHECK(note);
    }
}

TEST_CASE("csv schema") {
    AsymptoticExpansion e;
    e.label = "identity";
    e.grid = {2.0};
    e.target = [](double t) { return dd(t); };
    e.terms = {[](double t) { return dd(t); }};
    auto csv = rows_to_csv(ratio_curve(e));
    CHECK(csv.rfind("label,j,t,ratio\n", 0) == 0);
    CHECK(csv.find("identity,1,2,1") != std::string::npos);
}

TEST_SUITE_END();
