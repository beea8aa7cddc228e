#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "futopt/calibration.hpp"
#include "futopt/domain.hpp"

namespace futopt {

enum class PriceSign { AllPositive, MixedSign };

/// Classification of a series by price sign and mean-reversion
/// behaviour; the inputs to the model recommendation table.
struct SeriesDiagnosis {
    PriceSign sign;
    bool mean_reverting;
    std::optional<double> level;  // b, present iff mean_reverting
    double tau;                   // AR(1) slope behind the decision
    double t_statistic;           // (tau - 1) / se(tau)
};

struct DiagnoseConfig {
    // One-sided unit-root test: mean reversion is declared when the
    // regression t-statistic (tau - 1)/se(tau) falls below this. The
    // default is the large-sample 5% Dickey-Fuller-style threshold.
    double critical_value = -2.86;
    // |b| within this many sample standard deviations of zero is
    // reported as level 0 (OU rather than Vasicek).
    double zero_tol = 0.1;
};

/// Classify a price series. Sign is exact (any value <= 0 means mixed);
/// mean reversion comes from a one-sided test of the AR(1) slope
/// against 1, and the level is mu/(1 - tau) snapped to 0 when it is
/// small against the sample scale.
inline SeriesDiagnosis diagnose(const PriceSeries& series,
                                const DiagnoseConfig& config = {}) {
    const auto& f = series.values();
    const PriceSign sign = std::all_of(f.begin(), f.end(), [](double v) { return v > 0.0; })
                               ? PriceSign::AllPositive
                               : PriceSign::MixedSign;

    const RegressionStats stats = ols_ar1(series);
    const double n = static_cast<double>(stats.n);
    // se(tau) = sd(e) / sqrt(sum (x - xbar)^2); sd(e) already carries
    // the n-2 degrees of freedom.
    const double s_xx = stats.f_xx - stats.f_x * stats.f_x / n;
    const double se_tau = stats.sd_e / std::sqrt(s_xx);
    const double t_stat = se_tau > 0.0
                              ? (stats.tau - 1.0) / se_tau
                              : -std::numeric_limits<double>::infinity();

    SeriesDiagnosis diag{sign, false, std::nullopt, stats.tau, t_stat};
    if (t_stat < config.critical_value && stats.tau < 1.0) {
        double level = stats.mu / (1.0 - stats.tau);
        // Sample standard deviation of the prices themselves.
        double mean = 0.0;
        for (double v : f) mean += v;
        mean /= static_cast<double>(f.size());
        double var = 0.0;
        for (double v : f) var += (v - mean) * (v - mean);
        const double sd = std::sqrt(var / static_cast<double>(f.size() - 1));
        if (std::fabs(level) <= config.zero_tol * sd) level = 0.0;
        diag.mean_reverting = true;
        diag.level = level;
    }
    return diag;
}

/// The recommendation table, cell for cell:
///   positive,  no reversion  -> GBM / Black-76
///   positive,  level b       -> continuous-time GARCH
///   mixed,     level 0       -> OU
///   mixed,     level b != 0  -> Vasicek
///   mixed,     no reversion  -> Bachelier
inline ModelKind recommend(const SeriesDiagnosis& diag) {
    if (diag.sign == PriceSign::AllPositive)
        return diag.mean_reverting ? ModelKind::ContinuousGarch : ModelKind::GbmBlack76;
    if (!diag.mean_reverting) return ModelKind::Bachelier;
    return (diag.level && *diag.level == 0.0) ? ModelKind::Ou : ModelKind::Vasicek;
}

}  // namespace futopt
