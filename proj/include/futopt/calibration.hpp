#pragma once

#include <cmath>
#include <cstddef>

#include "futopt/domain.hpp"
#include "futopt/errors.hpp"

namespace futopt {

/// AR(1) least-squares fit F_i = tau * F_{i-1} + mu + e of consecutive
/// prices. Returns the five raw sums alongside (tau, mu, sd(e)):
///
///   tau   = (n F_xy - F_x F_y) / (n F_xx - F_x^2)
///   mu    = (F_y - tau F_x) / n
///   sd(e) = sqrt((n F_yy - F_y^2 - tau (n F_xy - F_x F_y)) / (n (n-2)))
///
/// where n counts transition pairs. Needs n >= 3 so the sd(e)
/// denominator is positive, hence a series of at least 4 prices.
inline RegressionStats ols_ar1(const PriceSeries& series) {
    const auto& f = series.values();
    const std::size_t n = f.size() - 1;
    if (n <= 2)
        throw NeedsAtLeastFourPoints(
            "AR(1) residual estimate needs at least 3 transition pairs (4 prices)");

    RegressionStats s;
    s.n = n;
    for (std::size_t i = 1; i <= n; ++i) {
        const double x = f[i - 1];
        const double y = f[i];
        s.f_x += x;
        s.f_y += y;
        s.f_xx += x * x;
        s.f_yy += y * y;
        s.f_xy += x * y;
    }

    const double nn = static_cast<double>(n);
    const double denom = nn * s.f_xx - s.f_x * s.f_x;
    // Scale-aware zero test: denom is a sum of squared deviations times n.
    if (std::fabs(denom) <= 1e-14 * nn * (s.f_xx + 1.0))
        throw DegenerateSeries("constant regressor: n*F_xx - F_x^2 is zero");

    const double cross = nn * s.f_xy - s.f_x * s.f_y;
    s.tau = cross / denom;
    s.mu = (s.f_y - s.tau * s.f_x) / nn;

    double var_num = nn * s.f_yy - s.f_y * s.f_y - s.tau * cross;
    if (var_num < 0.0) var_num = 0.0;  // roundoff on an exact fit
    s.sd_e = std::sqrt(var_num / (nn * (nn - 2.0)));
    return s;
}

/// Map the AR(1) fit to continuous-time mean-reversion parameters:
///   a = -ln(tau)/delta
///   b = mu/(1 - tau)
///   sigma = sd(e) * sqrt(-2 ln(tau) / (delta (1 - tau^2)))
/// Valid only for 0 < tau < 1.
inline OuParams params_from_regression(const RegressionStats& stats, double step) {
    if (!(step > 0.0)) throw NonPositiveStep("step must be positive");
    if (stats.tau >= 1.0)
        throw NoMeanReversion("AR(1) slope >= 1: no mean reversion");
    if (stats.tau <= 0.0)
        throw OscillatoryOrInvalid("AR(1) slope <= 0: continuous-time rate undefined");

    const double a = -std::log(stats.tau) / step;
    const double b = stats.mu / (1.0 - stats.tau);
    const double sigma =
        stats.sd_e * std::sqrt(-2.0 * std::log(stats.tau) /
                               (step * (1.0 - stats.tau * stats.tau)));
    if (sigma == 0.0) throw DegenerateVolatility("residuals have zero variance");
    return OuParams(a, b, sigma);
}

/// Market price of risk lambda = (Rbar - r)/sigma where Rbar is the
/// annualized mean simple return, mean over i of (F_{i+1}/F_i - 1)/delta.
inline double market_price_of_risk(const PriceSeries& series, double rate,
                                   double sigma) {
    if (!(sigma > 0.0)) throw ZeroVolatility("sigma must be positive");
    const auto& f = series.values();
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        if (f[i] == 0.0) throw ZeroPrice("return undefined at zero price");
        sum += f[i + 1] / f[i] - 1.0;
    }
    const double mean_return = sum / static_cast<double>(f.size() - 1) / series.step();
    return (mean_return - rate) / sigma;
}

/// Switch from physical to risk-neutral parameters.
/// OU/Vasicek: a* = a, b* = b - lambda*sigma/a.
/// GARCH: a* = a + lambda*sigma, b* = a*b/a*; rejected if a* <= 0.
inline RiskNeutralParams risk_neutralize(const OuParams& params, double lambda,
                                         ModelKind model) {
    switch (model) {
        case ModelKind::Ou:
        case ModelKind::Vasicek:
            return {params.a, params.b - lambda * params.sigma / params.a, lambda,
                    model};
        case ModelKind::ContinuousGarch: {
            const double a_star = params.a + lambda * params.sigma;
            if (!(a_star > 0.0))
                throw SignFlip("lambda*sigma flips the sign of the reversion rate");
            return {a_star, params.a * params.b / a_star, lambda, model};
        }
        case ModelKind::GbmBlack76:
        case ModelKind::Bachelier:
            throw UnsupportedModel("no reversion adjustment for this model");
    }
    throw UnsupportedModel("unknown model");
}

}  // namespace futopt
