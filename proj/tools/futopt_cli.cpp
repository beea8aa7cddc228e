// Command-line front end: calibrate, recommend, simulate, price and
// compare European futures options under the Black-76 / Bachelier /
// OU-Vasicek / continuous-time GARCH toolkit.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "futopt/futopt.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

// Round to 10 significant digits so every emitted number honors the
// output contract regardless of serializer.
double r10(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return std::strtod(buf, nullptr);
}

struct StrikeGrid {
    double min = 0, max = 0;
    std::size_t count = 1;
};

StrikeGrid parse_strikes(const std::string& s) {
    StrikeGrid g;
    char rest;
    if (std::sscanf(s.c_str(), "%lf:%lf:%zu%c", &g.min, &g.max, &g.count, &rest) != 3)
        throw futopt::Error("--strikes expects min:max:count, got '" + s + "'");
    return g;
}

struct CommonOpts {
    std::string input;
    double rate = 0.0;
    std::optional<double> step;
    std::optional<double> lambda;
    std::optional<double> sigma;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("input", o.input, "input CSV (header date,settle)")->required();
    cmd->add_option("--rate", o.rate, "risk-free rate, continuously compounded");
    cmd->add_option("--step", o.step, "time step delta in years (overrides inference)");
    cmd->add_option("--lambda", o.lambda, "market price of risk (overrides estimate)");
    cmd->add_option("--sigma", o.sigma, "volatility entering the lambda estimate");
    cmd->add_option("--out", o.out_dir, "output directory");
}

futopt::PriceSeries load(const CommonOpts& o) {
    return futopt::ingest_csv(o.input, {}, o.step);
}

json calibration_doc(const futopt::PriceSeries& series, const CommonOpts& o) {
    const auto stats = futopt::ols_ar1(series);
    const auto params = futopt::params_from_regression(stats, series.step());
    const double lambda =
        o.lambda ? *o.lambda
                 : futopt::market_price_of_risk(series, o.rate,
                                                o.sigma.value_or(params.sigma));
    const auto rn_vas = futopt::risk_neutralize(params, lambda, futopt::ModelKind::Vasicek);
    const auto rn_garch =
        futopt::risk_neutralize(params, lambda, futopt::ModelKind::ContinuousGarch);

    json j;
    j["input"] = o.input;
    j["n_observations"] = series.size();
    j["step"] = r10(series.step());
    j["regression"] = {{"n", stats.n},       {"f_x", r10(stats.f_x)},
                       {"f_y", r10(stats.f_y)}, {"f_xx", r10(stats.f_xx)},
                       {"f_yy", r10(stats.f_yy)}, {"f_xy", r10(stats.f_xy)},
                       {"tau", r10(stats.tau)},   {"mu", r10(stats.mu)},
                       {"sd_e", r10(stats.sd_e)}};
    j["params"] = {{"a", r10(params.a)}, {"b", r10(params.b)}, {"sigma", r10(params.sigma)}};
    j["lambda"] = r10(lambda);
    j["risk_neutral"] = {
        {"vasicek", {{"a_star", r10(rn_vas.a_star)}, {"b_star", r10(rn_vas.b_star)}}},
        {"garch", {{"a_star", r10(rn_garch.a_star)}, {"b_star", r10(rn_garch.b_star)}}}};
    return j;
}

int run(int argc, char** argv) {
    CLI::App app{"Option valuation for futures with negative or mean-reverting prices"};
    app.require_subcommand(1);

    CommonOpts cal_o;
    auto* cal = app.add_subcommand("calibrate",
                                   "least-squares AR(1) calibration and risk adjustment");
    add_common(cal, cal_o);
    bool cal_write = false;
    cal->add_flag("--write", cal_write, "also write params.json to --out");

    CommonOpts rec_o;
    auto* rec = app.add_subcommand("recommend", "classify the series and recommend a model");
    add_common(rec, rec_o);
    double rec_zero_tol = 0.1, rec_crit = -2.86;
    rec->add_option("--zero-tol", rec_zero_tol, "level-zero tolerance in sample stdevs");
    rec->add_option("--critical-value", rec_crit, "unit-root test critical value");

    CommonOpts sim_o;
    auto* sim = app.add_subcommand("simulate", "simulate calibrated paths to paths.csv");
    add_common(sim, sim_o);
    std::size_t sim_paths = 20, sim_steps = 252;
    std::uint64_t sim_seed = 42;
    std::string sim_model = "garch";
    bool sim_strict = false;
    sim->add_option("--paths", sim_paths, "number of paths (paper figure used 20)");
    sim->add_option("--steps", sim_steps, "steps per path");
    sim->add_option("--seed", sim_seed, "random seed");
    sim->add_option("--model", sim_model, "ou | vasicek | garch");
    sim->add_flag("--strict-eq44", sim_strict, "verbatim explosive recursion exponent");

    CommonOpts price_o;
    auto* price = app.add_subcommand("price", "price a single option under one model");
    add_common(price, price_o);
    std::string price_model = "vasicek";
    double price_strike = 0.0, price_expiry = 1.0;
    std::optional<double> price_forward;
    bool price_put = false, price_paper_verbatim = false, price_paper_average = false;
    std::size_t price_paths = 100'000;
    std::uint64_t price_seed = 42;
    price->add_option("--model", price_model, "black76 | bachelier | ou | vasicek | garch");
    price->add_option("--strike", price_strike, "strike K")->required();
    price->add_option("--expiry", price_expiry, "horizon T_e - t in years");
    price->add_option("--forward", price_forward, "current futures price (default: last)");
    price->add_flag("--put", price_put, "price a put instead of a call");
    price->add_flag("--paper-verbatim", price_paper_verbatim,
                    "use the verbatim published Vasicek formula");
    price->add_flag("--paper-average", price_paper_average,
                    "Monte Carlo: average terminals before the payoff");
    price->add_option("--paths", price_paths, "Monte Carlo paths");
    price->add_option("--seed", price_seed, "random seed");

    CommonOpts cmp_o;
    auto* cmp = app.add_subcommand("compare", "full strike sweep across all models");
    add_common(cmp, cmp_o);
    std::string cmp_strikes = "0:0:1";
    double cmp_expiry = 1.0;
    std::size_t cmp_paths = 100'000;
    std::uint64_t cmp_seed = 42;
    unsigned cmp_threads = 1;
    std::string cmp_model;
    bool cmp_pv = false, cmp_pa = false, cmp_strict = false;
    cmp->add_option("--strikes", cmp_strikes, "strike grid min:max:count")->required();
    cmp->add_option("--expiry", cmp_expiry, "option horizon in years");
    cmp->add_option("--paths", cmp_paths, "Monte Carlo paths");
    cmp->add_option("--seed", cmp_seed, "random seed");
    cmp->add_option("--threads", cmp_threads, "Monte Carlo worker threads");
    cmp->add_option("--model", cmp_model, "override the recommended model tag");
    cmp->add_flag("--paper-verbatim", cmp_pv, "(kept in report either way)");
    cmp->add_flag("--paper-average", cmp_pa, "average-then-payoff Monte Carlo");
    cmp->add_flag("--strict-eq44", cmp_strict, "verbatim explosive recursion exponent");

    CLI11_PARSE(app, argc, argv);

    if (cal->parsed()) {
        const auto series = load(cal_o);
        const json j = calibration_doc(series, cal_o);
        std::cout << j.dump(2) << '\n';
        if (cal_write) {
            fs::create_directories(cal_o.out_dir);
            std::ofstream((fs::path(cal_o.out_dir) / "params.json")) << j.dump(2) << '\n';
        }
        return 0;
    }

    if (rec->parsed()) {
        const auto series = load(rec_o);
        futopt::DiagnoseConfig cfg{rec_crit, rec_zero_tol};
        const auto diag = futopt::diagnose(series, cfg);
        const auto model = futopt::recommend(diag);
        json j;
        j["sign"] =
            diag.sign == futopt::PriceSign::AllPositive ? "all-positive" : "mixed-sign";
        j["mean_reversion"] = diag.mean_reverting;
        if (diag.level) j["level"] = r10(*diag.level);
        j["tau"] = r10(diag.tau);
        j["t_statistic"] = r10(diag.t_statistic);
        j["recommended_model"] = std::string(futopt::to_string(model));
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    if (sim->parsed()) {
        const auto series = load(sim_o);
        const auto stats = futopt::ols_ar1(series);
        const auto params = futopt::params_from_regression(stats, series.step());
        const double lambda =
            sim_o.lambda ? *sim_o.lambda
                         : futopt::market_price_of_risk(series, sim_o.rate,
                                                        sim_o.sigma.value_or(params.sigma));
        const bool garch = sim_model == "garch";
        const auto model_kind = garch ? futopt::ModelKind::ContinuousGarch
                                      : futopt::ModelKind::Vasicek;
        const auto rn = futopt::risk_neutralize(params, lambda, model_kind);
        const futopt::OuParams sim_params(rn.a_star, rn.b_star, params.sigma);
        futopt::SimulationPlan plan(sim_paths, sim_steps, series.step(), sim_seed,
                                    garch ? futopt::SimScheme::GarchRecursion
                                          : futopt::SimScheme::OuExact);
        plan.strict_recursion = sim_strict;
        std::vector<std::vector<double>> paths(sim_paths);
        for (std::size_t p = 0; p < sim_paths; ++p)
            paths[p] = garch
                           ? futopt::simulate_garch_path(sim_params, series.back(), plan, p)
                           : futopt::simulate_ou_path(sim_params, series.back(), plan, p);
        fs::create_directories(sim_o.out_dir);
        const auto out = (fs::path(sim_o.out_dir) / "paths.csv").string();
        futopt::write_paths_csv(paths, out);
        std::cout << "wrote " << out << '\n';
        return 0;
    }

    if (price->parsed()) {
        const auto series = load(price_o);
        const auto stats = futopt::ols_ar1(series);
        const double forward = price_forward.value_or(series.back());
        const futopt::OptionSpec spec(
            price_strike, 0.0, price_expiry, price_o.rate,
            price_put ? futopt::OptionKind::Put : futopt::OptionKind::Call, forward);

        std::optional<futopt::PriceQuote> quote;
        if (price_model == "black76") {
            const auto vol = futopt::detail::log_return_vol(series);
            if (!vol) throw futopt::NegativeUnderlying(
                "cannot estimate a lognormal volatility from a nonpositive series");
            quote = futopt::black76_price(spec, price_o.sigma.value_or(*vol));
        } else if (price_model == "bachelier") {
            quote = futopt::bachelier_price(
                spec, price_o.sigma.value_or(futopt::detail::diff_vol(series)));
        } else {
            const auto params = futopt::params_from_regression(stats, series.step());
            const double lambda =
                price_o.lambda
                    ? *price_o.lambda
                    : futopt::market_price_of_risk(series, price_o.rate,
                                                   price_o.sigma.value_or(params.sigma));
            if (price_model == "garch") {
                const auto rn = futopt::risk_neutralize(
                    params, lambda, futopt::ModelKind::ContinuousGarch);
                const futopt::OuParams rn_params(rn.a_star, rn.b_star, params.sigma);
                const std::size_t n_steps = std::max<std::size_t>(
                    1, static_cast<std::size_t>(std::llround(price_expiry / series.step())));
                futopt::SimulationPlan plan(price_paths, n_steps, price_expiry / n_steps,
                                            price_seed, futopt::SimScheme::GarchRecursion);
                const auto est = futopt::mc_price_garch(
                    rn_params, spec, plan,
                    price_paper_average ? futopt::McMode::PaperAverage
                                        : futopt::McMode::Standard);
                quote = futopt::PriceQuote(
                    est.price,
                    price_paper_average ? futopt::QuoteMethod::ClosedForm
                                        : futopt::QuoteMethod::MonteCarlo,
                    est.std_error, futopt::ModelKind::ContinuousGarch);
            } else if (price_model == "ou" || price_model == "vasicek") {
                const auto rn =
                    futopt::risk_neutralize(params, lambda, futopt::ModelKind::Vasicek);
                quote = price_paper_verbatim
                            ? futopt::vasicek_call_paper(spec, rn, params.sigma)
                            : futopt::vasicek_price(spec, rn, params.sigma);
            } else {
                throw futopt::UnsupportedModel("unknown model '" + price_model + "'");
            }
        }

        json j;
        j["model"] = std::string(futopt::to_string(quote->model));
        j["method"] = std::string(futopt::to_string(quote->method));
        j["value"] = r10(quote->value);
        if (quote->std_error) j["std_error"] = r10(*quote->std_error);
        std::cout << j.dump(2) << '\n';
        return 0;
    }

    if (cmp->parsed()) {
        const auto series = load(cmp_o);
        const auto grid = parse_strikes(cmp_strikes);
        futopt::RunConfig cfg;
        cfg.rate = cmp_o.rate;
        cfg.lambda_override = cmp_o.lambda;
        cfg.sigma_override = cmp_o.sigma;
        cfg.strike_min = grid.min;
        cfg.strike_max = grid.max;
        cfg.strike_count = grid.count;
        cfg.expiry = cmp_expiry;
        cfg.n_paths = cmp_paths;
        cfg.seed = cmp_seed;
        cfg.n_threads = cmp_threads;
        cfg.paper_verbatim = cmp_pv;
        cfg.paper_average = cmp_pa;
        cfg.strict_recursion = cmp_strict;
        if (!cmp_model.empty()) {
            cfg.model_override = futopt::model_from_string(cmp_model);
            if (!cfg.model_override)
                throw futopt::UnsupportedModel("unknown model '" + cmp_model + "'");
        }

        const auto rep = futopt::run_compare(series, cfg);
        fs::create_directories(cmp_o.out_dir);
        const fs::path dir(cmp_o.out_dir);
        futopt::write_report_csv(rep, (dir / "report.csv").string());
        futopt::write_report_svg(rep, (dir / "report.svg").string());
        std::ofstream((dir / "params.json")) << calibration_doc(series, cmp_o).dump(2)
                                             << '\n';
        std::cout << "recommended model: " << futopt::to_string(rep.recommended) << '\n';
        if (rep.max_rel_gap_b76_vasicek)
            std::cout << "max relative Black76/Vasicek gap: "
                      << futopt::detail::fmt10(*rep.max_rel_gap_b76_vasicek) << '\n';
        std::cout << "wrote " << (dir / "report.csv").string() << ", report.svg, params.json\n";
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const futopt::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
