#ifndef GAUSSMOSER_ASYMPT_HPP
#define GAUSSMOSER_ASYMPT_HPP

#include <functional>
#include <string>
#include <vector>

#include "gaussmoser/dd.hpp"
#include "gaussmoser/young.hpp"

namespace gaussmoser {

enum class EntryKind {
    ratio,      // (target - partial sum)/next term -> 1
    cauchy,     // target - full partial sum -> constant
    inequality, // target <= partial sum * (1 + tol)
};

// Targets and terms are evaluated in extended precision: several of the
// catalog's subtractions cancel far beyond double resolution on the grids
// where the ratios actually settle.
struct AsymptoticExpansion {
    std::string label;
    EntryKind kind = EntryKind::ratio;
    std::vector<double> grid; // sorted toward the limit
    std::function<dd(double)> target;
    std::vector<std::function<dd(double)>> terms;
    double tol = 0.1;
    std::string variable = "t";
};

struct RatioRow {
    std::string label;
    int j;
    double t;
    double ratio;
};

// r_j(t) = (target(t) - sum_{i<j} E_i(t)) / E_j(t) for every registered j.
// A term vanishing on the grid is a configuration error.
std::vector<RatioRow> ratio_curve(const AsymptoticExpansion& e);

struct EntryVerdict {
    std::string label;
    bool pass = false;
    double final_value = 0.0; // last ratio (or last residual for cauchy)
    std::string detail;
};

// Kind-specific check: final ratio inside [1-tol, 1+tol] with the distance
// to 1 shrinking over the last three grid points (ratio kind); Cauchy
// differences shrinking below tol (cauchy kind); ratio never above 1+tol
// (inequality kind).
EntryVerdict check_entry(const AsymptoticExpansion& e);

struct Catalog {
    std::vector<AsymptoticExpansion> entries;
    std::vector<std::string> notices; // omitted (beta, case) pairs
};

// The built-in registry of the tail expansions this library relies on,
// instantiated for one (beta, B) pair. extended_precision = false forces
// the double path everywhere (the deep grids then drown in roundoff).
Catalog builtin_expansions(double beta, const YoungFunction& B,
                           bool extended_precision = true);

std::string rows_to_csv(const std::vector<RatioRow>& rows);

} // namespace gaussmoser

#endif
