#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "futopt/calibration.hpp"
#include "futopt/csv.hpp"
#include "futopt/domain.hpp"
#include "futopt/model_selector.hpp"
#include "futopt/monte_carlo.hpp"
#include "futopt/pricing.hpp"

namespace futopt {

/// One analysis run: rates, strike grid, Monte Carlo budget and the
/// verbatim-mode toggles.
struct RunConfig {
    double rate = 0.0;
    std::optional<double> step_override;    // delta, years
    std::optional<double> lambda_override;  // else estimated from the series
    std::optional<double> sigma_override;   // sigma entering the lambda formula
    double strike_min = 0.0;
    double strike_max = 0.0;
    std::size_t strike_count = 1;
    double expiry = 1.0;  // option horizon T_e - t, years
    std::size_t n_paths = 100'000;
    std::uint64_t seed = 42;
    unsigned n_threads = 1;
    std::optional<ModelKind> model_override;
    bool paper_verbatim = false;  // report the verbatim Vasicek formula
    bool paper_average = false;   // average-then-payoff Monte Carlo
    bool strict_recursion = false;

    void validate() const {
        if (strike_count < 1) throw Error("strike grid needs at least one point");
        if (strike_min > strike_max) throw Error("strike grid min exceeds max");
    }

    std::vector<double> strikes() const {
        std::vector<double> ks(strike_count);
        for (std::size_t i = 0; i < strike_count; ++i)
            ks[i] = strike_count == 1
                        ? strike_min
                        : strike_min + (strike_max - strike_min) *
                                           static_cast<double>(i) /
                                           static_cast<double>(strike_count - 1);
        return ks;
    }
};

struct CompareRow {
    double strike;
    std::optional<double> black76;  // empty on domain error (F <= 0 or K <= 0)
    double vasicek;
    double vasicek_paper;
    double bachelier;
    double garch_mc;
    std::optional<double> garch_mc_stderr;
};

struct CompareReport {
    SeriesDiagnosis diagnosis;
    ModelKind recommended;
    RegressionStats stats;
    double a = 0, b = 0, sigma = 0;  // physical parameters
    double lambda = 0;
    RiskNeutralParams rn_vasicek{0, 0, 0, ModelKind::Vasicek};
    RiskNeutralParams rn_garch{0, 0, 0, ModelKind::ContinuousGarch};
    double forward = 0;
    double log_return_vol = 0;  // Black-76 sigma; 0 when undefined
    double diff_vol = 0;        // Bachelier absolute sigma
    std::vector<CompareRow> rows;
    // max relative gap between Black-76 and the Vasicek closed form over
    // strikes where both are defined; quantifies the "very close" claim
    std::optional<double> max_rel_gap_b76_vasicek;
};

namespace detail {

inline std::string fmt10(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

/// Annualized standard deviation of log returns; empty if any price
/// is nonpositive.
inline std::optional<double> log_return_vol(const PriceSeries& series) {
    const auto& f = series.values();
    std::vector<double> lr;
    lr.reserve(f.size() - 1);
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        if (!(f[i] > 0.0) || !(f[i + 1] > 0.0)) return std::nullopt;
        lr.push_back(std::log(f[i + 1] / f[i]));
    }
    double mean = 0.0;
    for (double x : lr) mean += x;
    mean /= static_cast<double>(lr.size());
    double var = 0.0;
    for (double x : lr) var += (x - mean) * (x - mean);
    var /= static_cast<double>(lr.size() - 1);
    return std::sqrt(var / series.step());
}

/// Annualized standard deviation of price differences.
inline double diff_vol(const PriceSeries& series) {
    const auto& f = series.values();
    std::vector<double> d;
    d.reserve(f.size() - 1);
    for (std::size_t i = 0; i + 1 < f.size(); ++i) d.push_back(f[i + 1] - f[i]);
    double mean = 0.0;
    for (double x : d) mean += x;
    mean /= static_cast<double>(d.size());
    double var = 0.0;
    for (double x : d) var += (x - mean) * (x - mean);
    var /= static_cast<double>(d.size() - 1);
    return std::sqrt(var / series.step());
}

}  // namespace detail

/// Calibrate, diagnose, and sweep the strike grid through every model:
/// Black-76 (where its domain allows), both Vasicek pricers, Bachelier,
/// and the GARCH recursion priced by Monte Carlo.
inline CompareReport run_compare(const PriceSeries& series, const RunConfig& config) {
    config.validate();
    CompareReport rep;
    rep.diagnosis = diagnose(series);
    rep.recommended = config.model_override.value_or(recommend(rep.diagnosis));

    rep.stats = ols_ar1(series);
    const OuParams params = params_from_regression(rep.stats, series.step());
    rep.a = params.a;
    rep.b = params.b;
    rep.sigma = params.sigma;

    const double lambda_sigma = config.sigma_override.value_or(params.sigma);
    rep.lambda = config.lambda_override
                     ? *config.lambda_override
                     : market_price_of_risk(series, config.rate, lambda_sigma);

    rep.rn_vasicek = risk_neutralize(params, rep.lambda, ModelKind::Vasicek);
    rep.rn_garch = risk_neutralize(params, rep.lambda, ModelKind::ContinuousGarch);
    rep.forward = series.back();

    const auto lr_vol = detail::log_return_vol(series);
    rep.log_return_vol = lr_vol.value_or(0.0);
    rep.diff_vol = detail::diff_vol(series);

    // GARCH Monte Carlo plan: walk the calibration step size to the
    // option horizon.
    const std::size_t n_steps = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(config.expiry / series.step())));
    SimulationPlan plan(config.n_paths, n_steps, config.expiry / n_steps, config.seed,
                        SimScheme::GarchRecursion);
    plan.strict_recursion = config.strict_recursion;
    const OuParams garch_params(rep.rn_garch.a_star, rep.rn_garch.b_star, params.sigma);
    const McMode mode = config.paper_average ? McMode::PaperAverage : McMode::Standard;

    double max_gap = 0.0;
    bool any_gap = false;
    for (double k : config.strikes()) {
        OptionSpec spec(k, 0.0, config.expiry, config.rate, OptionKind::Call,
                        rep.forward);
        CompareRow row{k, std::nullopt, 0, 0, 0, 0, std::nullopt};
        if (lr_vol && spec.forward > 0.0 && k > 0.0)
            row.black76 = black76_call(spec, *lr_vol).value;
        row.vasicek = vasicek_call(spec, rep.rn_vasicek, params.sigma).value;
        row.vasicek_paper = vasicek_call_paper(spec, rep.rn_vasicek, params.sigma).value;
        row.bachelier = bachelier_call(spec, rep.diff_vol).value;
        const McEstimate mc =
            mc_price_garch(garch_params, spec, plan, mode, config.n_threads);
        row.garch_mc = mc.price;
        row.garch_mc_stderr = mc.std_error;

        // only meaningful prices enter the gap; deep OTM values are
        // noise-over-noise ratios
        if (row.black76 && row.vasicek > 1e-4 * std::fabs(rep.forward)) {
            max_gap = std::max(max_gap,
                               std::fabs(*row.black76 - row.vasicek) / row.vasicek);
            any_gap = true;
        }
        rep.rows.push_back(row);
    }
    if (any_gap) rep.max_rel_gap_b76_vasicek = max_gap;
    return rep;
}

/// report.csv: one row per strike, 10 significant digits, "domain-error"
/// where Black-76 rejects the inputs.
inline void write_report_csv(const CompareReport& rep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "strike,black76,vasicek,vasicek_paper,bachelier,garch_mc,garch_mc_stderr\n";
    for (const auto& r : rep.rows) {
        out << detail::fmt10(r.strike) << ','
            << (r.black76 ? detail::fmt10(*r.black76) : std::string("domain-error"))
            << ',' << detail::fmt10(r.vasicek) << ',' << detail::fmt10(r.vasicek_paper)
            << ',' << detail::fmt10(r.bachelier) << ',' << detail::fmt10(r.garch_mc)
            << ','
            << (r.garch_mc_stderr ? detail::fmt10(*r.garch_mc_stderr) : std::string())
            << '\n';
    }
}

/// Minimal self-contained SVG line plot of price vs strike, one series
/// per model column.
inline void write_report_svg(const CompareReport& rep, const std::string& path) {
    const double w = 720, h = 480, ml = 70, mr = 140, mt = 30, mb = 50;
    double kmin = 1e300, kmax = -1e300, pmin = 0.0, pmax = -1e300;
    for (const auto& r : rep.rows) {
        kmin = std::min(kmin, r.strike);
        kmax = std::max(kmax, r.strike);
        for (double v : {r.vasicek, r.vasicek_paper, r.bachelier, r.garch_mc})
            pmax = std::max(pmax, v);
        if (r.black76) pmax = std::max(pmax, *r.black76);
        pmin = std::min({pmin, r.vasicek_paper});
    }
    if (kmax <= kmin) kmax = kmin + 1.0;
    if (pmax <= pmin) pmax = pmin + 1.0;
    const auto sx = [&](double k) { return ml + (k - kmin) / (kmax - kmin) * (w - ml - mr); };
    const auto sy = [&](double p) { return h - mb - (p - pmin) / (pmax - pmin) * (h - mt - mb); };

    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
        << h << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
        << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">strike</text>\n";
    out << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (mt + h - mb) / 2 << ")\">call price</text>\n";
    for (int i = 0; i <= 4; ++i) {
        const double k = kmin + (kmax - kmin) * i / 4.0;
        const double p = pmin + (pmax - pmin) * i / 4.0;
        out << "<text x=\"" << sx(k) << "\" y=\"" << h - mb + 16
            << "\" font-size=\"11\" text-anchor=\"middle\">" << detail::fmt10(k).substr(0, 8)
            << "</text>\n";
        out << "<text x=\"" << ml - 6 << "\" y=\"" << sy(p) + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << detail::fmt10(p).substr(0, 8)
            << "</text>\n";
    }

    struct SeriesDef {
        const char* name;
        const char* color;
    };
    const SeriesDef defs[] = {{"Black-76", "#1f77b4"},
                              {"Vasicek", "#d62728"},
                              {"Vasicek (verbatim)", "#9467bd"},
                              {"Bachelier", "#2ca02c"},
                              {"GARCH MC", "#ff7f0e"}};
    for (int s = 0; s < 5; ++s) {
        std::string pts;
        for (const auto& r : rep.rows) {
            double v;
            switch (s) {
                case 0:
                    if (!r.black76) continue;
                    v = *r.black76;
                    break;
                case 1: v = r.vasicek; break;
                case 2: v = r.vasicek_paper; break;
                case 3: v = r.bachelier; break;
                default: v = r.garch_mc; break;
            }
            pts += detail::fmt10(sx(r.strike)) + "," + detail::fmt10(sy(v)) + " ";
        }
        if (pts.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << defs[s].color
            << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
        out << "<text x=\"" << w - mr + 10 << "\" y=\"" << mt + 18 * (s + 1)
            << "\" font-size=\"12\" fill=\"" << defs[s].color << "\">" << defs[s].name
            << "</text>\n";
    }
    out << "</svg>\n";
}

/// paths.csv: one row per step, one column per path.
inline void write_paths_csv(const std::vector<std::vector<double>>& paths,
                            const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "step";
    for (std::size_t p = 0; p < paths.size(); ++p) out << ",path" << p;
    out << '\n';
    const std::size_t steps = paths.empty() ? 0 : paths.front().size();
    for (std::size_t i = 0; i < steps; ++i) {
        out << i;
        for (const auto& pth : paths) out << ',' << detail::fmt10(pth[i]);
        out << '\n';
    }
}

}  // namespace futopt
