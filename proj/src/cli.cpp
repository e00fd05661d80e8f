#include "gaussmoser/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gaussmoser/asympt.hpp"
#include "gaussmoser/moser.hpp"
#include "gaussmoser/norms.hpp"
#include "gaussmoser/young.hpp"

namespace gaussmoser {

namespace {

YoungFunction parse_young(const std::string& spec, double beta_fallback) {
    if (spec.empty()) {
        // default: the plain exponential family at the requested exponent,
        // or the convex linear-head construction when that is not convex
        if (beta_fallback >= 1.0) return plain_exp(1.0, beta_fallback);
        return construct_head_tail(2.0, beta_fallback).B;
    }
    if (!spec.empty() && spec.front() == '{') return young_from_json(spec);
    std::ifstream in(spec);
    if (!in) throw std::runtime_error("cannot open Young spec file: " + spec);
    std::stringstream ss;
    ss << in.rdbuf();
    return young_from_json(ss.str());
}

ReductionKind parse_kind(const std::string& kind) {
    if (kind == "lux") return ReductionKind::luxemburg;
    if (kind == "marc-M" || kind == "marc-m")
        return ReductionKind::marcinkiewicz_m;
    if (kind == "linf-med") return ReductionKind::linf_median;
    if (kind == "linf-mean") return ReductionKind::linf_mean;
    throw std::runtime_error("unknown kind: " + kind);
}

void emit(std::ostream& out, const std::string& payload,
          const std::string& out_path) {
    if (out_path.empty()) {
        out << payload;
        if (!payload.empty() && payload.back() != '\n') out << "\n";
    } else {
        std::ofstream f(out_path);
        f << payload;
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Gaussian exponential Sobolev experiments"};
    app.require_subcommand(1);

    std::vector<double> betas;
    double beta = 2.0, kappa = 0.0, rel_tol = 1e-6;
    std::string young_spec, kind_name = "lux", format = "json", out_path;
    std::vector<double> kappa_grid, tmax_grid;
    std::string family, entries_filter;
    double lambda = 0.9, t0 = 2.0, n_param = 1.0, k_param = 8.0;

    auto* c_const = app.add_subcommand("constants",
                                       "table of the sharp constants");
    c_const->add_option("--beta", betas, "exponents")->required();
    c_const->add_option("--format", format);
    c_const->add_option("--out", out_path);

    auto* c_bound = app.add_subcommand(
        "bound", "reduction-functional upper bound at one kappa");
    c_bound->add_option("--beta", beta)->required();
    c_bound->add_option("--kappa", kappa)->required();
    c_bound->add_option("--young", young_spec,
                        "JSON string or file (default: plain exponential)");
    c_bound->add_option("--kind", kind_name)->capture_default_str();
    c_bound->add_option("--tmax-grid", tmax_grid);
    c_bound->add_option("--rel-tol", rel_tol)->capture_default_str();
    c_bound->add_option("--format", format)->capture_default_str();
    c_bound->add_option("--out", out_path);

    auto* c_ext = app.add_subcommand("extremal", "evaluate an extremal family");
    c_ext->add_option("--family", family)->required();
    c_ext->add_option("--beta", beta);
    c_ext->add_option("--kappa", kappa);
    c_ext->add_option("--lambda", lambda)->capture_default_str();
    c_ext->add_option("--t0", t0)->capture_default_str();
    c_ext->add_option("--N", n_param)->capture_default_str();
    c_ext->add_option("--k", k_param)->capture_default_str();
    c_ext->add_option("--young", young_spec);
    c_ext->add_option("--tmax-grid", tmax_grid);
    c_ext->add_option("--format", format);
    c_ext->add_option("--out", out_path);

    auto* c_scan = app.add_subcommand("scan", "classify kappas across a grid");
    c_scan->add_option("--beta", beta)->required();
    c_scan->add_option("--kappa-grid", kappa_grid)->required();
    c_scan->add_option("--young", young_spec);
    c_scan->add_option("--kind", kind_name)->capture_default_str();
    c_scan->add_option("--rel-tol", rel_tol)->capture_default_str();
    c_scan->add_option("--format", format)->capture_default_str();
    c_scan->add_option("--out", out_path);

    auto* c_verify = app.add_subcommand(
        "verify", "run the asymptotic-expansion catalog");
    c_verify->add_option("--beta", beta)->required();
    c_verify->add_option("--young", young_spec);
    c_verify->add_option("--entries", entries_filter, "label substring filter");
    c_verify->add_option("--format", format);
    c_verify->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*c_const) {
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            std::string csv = "beta,kappa_beta,exponent,kappa_beta_pow\n";
            for (double b : betas) {
                double kb = kappa_beta(b);
                double p = 2.0 * b / (2.0 + b);
                rows.push_back({{"beta", b},
                                {"kappa_beta", kb},
                                {"exponent", p},
                                {"kappa_beta_pow", std::pow(kb, p)}});
                csv += format_double(b) + "," + format_double(kb) + "," +
                       format_double(p) + "," + format_double(std::pow(kb, p)) +
                       "\n";
            }
            emit(out, format == "csv" ? csv : rows.dump(2), out_path);
            return 0;
        }

        if (*c_bound) {
            auto kind = parse_kind(kind_name);
            std::optional<YoungFunction> B;
            if (kind == ReductionKind::luxemburg ||
                kind == ReductionKind::marcinkiewicz_m)
                B = parse_young(young_spec, beta);
            Quadrature q;
            MoserOptions mo;
            mo.rel_tol = rel_tol;
            if (!tmax_grid.empty()) {
                mo.T0 = tmax_grid.front();
                mo.max_doublings =
                    int(std::ceil(std::log2(tmax_grid.back() / mo.T0))) + 1;
            }
            ReductionFunctional F(kind, beta, B, q);
            auto v = moser_rhs(kappa, F, q, mo);
            emit(out,
                 format == "csv" ? curve_to_csv(v.evidence) : verdict_to_json(v),
                 out_path);
            return v.classification == KappaClass::inconclusive ? 1 : 0;
        }

        if (*c_ext) {
            Quadrature q;
            std::vector<double> grid =
                tmax_grid.empty() ? std::vector<double>{4, 8, 16, 32} : tmax_grid;
            std::optional<YoungFunction> B;
            FamilyInput input;
            if (family == "supercritical") {
                auto fam = family_supercritical(beta, lambda, t0);
                input = fam.input;
                if (!young_spec.empty()) B = parse_young(young_spec, beta);
            } else if (family == "marc-critical") {
                auto fam = family_marcinkiewicz_critical(beta, n_param);
                input = fam.input;
                B = fam.B;
            } else if (family == "flattened") {
                auto fam = family_flattened(beta, n_param, t0, k_param);
                input = fam.input;
                B = fam.B;
            } else if (family == "medmv") {
                input = family_medmv(k_param);
            } else if (family == "linear") {
                input = family_linear();
            } else {
                throw std::runtime_error("unknown family: " + family);
            }
            if (kappa <= 0.0)
                kappa = std::isfinite(input.beta) ? kappa_beta(input.beta)
                                                  : 1.0 / std::sqrt(2.0);
            auto rep = evaluate_family(input, kappa, B ? &*B : nullptr, grid, q);
            emit(out,
                 format == "csv" ? curve_to_csv(rep.curve) : report_to_json(rep),
                 out_path);
            return 0;
        }

        if (*c_scan) {
            Quadrature q;
            auto B = parse_young(young_spec, beta);
            MoserOptions mo;
            mo.rel_tol = rel_tol;
            auto res = sharpness_scan(beta, B, parse_kind(kind_name),
                                      kappa_grid, q, mo);
            emit(out, scan_to_json(res), out_path);
            for (const auto& v : res.verdicts)
                if (v.classification == KappaClass::inconclusive) return 1;
            return 0;
        }

        if (*c_verify) {
            const char* env = std::getenv("GAUSSMOSER_PRECISION");
            bool extended = !(env && std::string(env) == "double");
            auto B = parse_young(young_spec, beta);
            auto cat = builtin_expansions(beta, B, extended);
            std::string csv;
            bool all_pass = true;
            std::string summary;
            for (const auto& e : cat.entries) {
                if (!entries_filter.empty() &&
                    e.label.find(entries_filter) == std::string::npos)
                    continue;
                if (e.kind == EntryKind::ratio) csv += rows_to_csv(ratio_curve(e));
                auto v = check_entry(e);
                all_pass = all_pass && v.pass;
                summary += std::string(v.pass ? "pass" : "FAIL") + "  " +
                           e.label + "  (" + v.detail + ")\n";
            }
            for (const auto& n : cat.notices) summary += "note  " + n + "\n";
            if (format == "csv") {
                emit(out, csv, out_path);
                out << summary;
            } else {
                emit(out, csv + summary, out_path);
            }
            return all_pass ? 0 : 1;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

} // namespace gaussmoser
