#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "futopt/calibration.hpp"
#include "futopt/domain.hpp"
#include "futopt/errors.hpp"
#include "futopt/normal.hpp"

namespace futopt {

/// Discounted expectation e^{-rT} E[(X - K)^+] for X ~ N(mean, std^2).
/// This is the common core behind the Bachelier, OU and Vasicek pricers
/// and the reconciliation target for their Monte Carlo counterparts.
/// std = 0 degenerates to discounted intrinsic value.
inline double gaussian_call_value(double mean, double std, double strike, double rate,
                                  double horizon) {
    if (std < 0.0) throw NegativeStd("standard deviation must be nonnegative");
    if (horizon < 0.0) throw Error("horizon must be nonnegative");
    const double df = std::exp(-rate * horizon);
    if (std == 0.0) return df * std::max(mean - strike, 0.0);
    const double d = (mean - strike) / std;
    return df * ((mean - strike) * norm_cdf(d) + std * norm_pdf(d));
}

/// Put counterpart via Gaussian parity: P = C - e^{-rT}(mean - K).
inline double gaussian_put_value(double mean, double std, double strike, double rate,
                                 double horizon) {
    const double c = gaussian_call_value(mean, std, strike, rate, horizon);
    const double p = c - std::exp(-rate * horizon) * (mean - strike);
    return std::max(p, 0.0);
}

inline PriceQuote gaussian_call(double mean, double std, double strike, double rate,
                                double horizon, ModelKind model = ModelKind::Bachelier) {
    return PriceQuote(gaussian_call_value(mean, std, strike, rate, horizon),
                      QuoteMethod::ClosedForm, std::nullopt, model);
}

/// Black-76: C = e^{-rT} [F Phi(d1) - K Phi(d2)],
/// d_{1,2} = (ln(F/K) +- sigma^2 T / 2) / (sigma sqrt(T)).
/// Rejects nonpositive forward or strike; this is the model's known
/// failure mode on negative futures prices.
inline PriceQuote black76_call(const OptionSpec& spec, double sigma) {
    if (!(spec.forward > 0.0))
        throw NegativeUnderlying("Black-76 requires a positive forward price");
    if (!(spec.strike > 0.0))
        throw NegativeStrike("Black-76 requires a positive strike");
    if (!(sigma > 0.0)) throw NonPositiveVol("sigma must be positive");

    const double t = spec.horizon();
    const double df = std::exp(-spec.rate * t);
    const double sig_sqrt_t = sigma * std::sqrt(t);
    const double d1 = (std::log(spec.forward / spec.strike) + 0.5 * sigma * sigma * t) /
                      sig_sqrt_t;
    const double d2 = d1 - sig_sqrt_t;
    const double value = df * (spec.forward * norm_cdf(d1) - spec.strike * norm_cdf(d2));
    return PriceQuote(std::max(value, 0.0), QuoteMethod::ClosedForm, std::nullopt,
                      ModelKind::GbmBlack76);
}

/// Black-76 put from parity: P = C - e^{-rT}(F - K).
inline PriceQuote black76_put(const OptionSpec& spec, double sigma) {
    const PriceQuote call = black76_call(spec, sigma);
    const double df = std::exp(-spec.rate * spec.horizon());
    const double value = call.value - df * (spec.forward - spec.strike);
    return PriceQuote(std::max(value, 0.0), QuoteMethod::ClosedForm, std::nullopt,
                      ModelKind::GbmBlack76);
}

inline PriceQuote black76_price(const OptionSpec& spec, double sigma) {
    return spec.kind == OptionKind::Call ? black76_call(spec, sigma)
                                         : black76_put(spec, sigma);
}

/// Terminal mean and variance of the OU/Vasicek process started at f0:
///   mean = e^{-aT} f0 + b (1 - e^{-aT})
///   var  = sigma^2 (1 - e^{-2aT}) / (2a)
inline std::pair<double, double> ou_terminal_moments(const OuParams& params, double f0,
                                                     double horizon) {
    if (horizon < 0.0) throw Error("horizon must be nonnegative");
    const double decay = std::exp(-params.a * horizon);
    const double mean = decay * f0 + params.b * (1.0 - decay);
    const double variance =
        params.sigma * params.sigma * (1.0 - decay * decay) / (2.0 * params.a);
    return {mean, variance};
}

/// Vasicek/OU call priced from the terminal Gaussian law under the
/// risk-neutral parameters (a*, b*). Accepts any sign of forward and
/// strike; this is the recommended pricer.
inline PriceQuote vasicek_call(const OptionSpec& spec, const RiskNeutralParams& rn,
                               double sigma) {
    const OuParams p(rn.a_star, rn.b_star, sigma);
    const auto [mean, variance] = ou_terminal_moments(p, spec.forward, spec.horizon());
    const ModelKind kind = (rn.b_star == 0.0) ? ModelKind::Ou : ModelKind::Vasicek;
    return gaussian_call(mean, std::sqrt(variance), spec.strike, spec.rate,
                         spec.horizon(), kind);
}

inline PriceQuote vasicek_put(const OptionSpec& spec, const RiskNeutralParams& rn,
                              double sigma) {
    const OuParams p(rn.a_star, rn.b_star, sigma);
    const auto [mean, variance] = ou_terminal_moments(p, spec.forward, spec.horizon());
    const ModelKind kind = (rn.b_star == 0.0) ? ModelKind::Ou : ModelKind::Vasicek;
    return PriceQuote(gaussian_put_value(mean, std::sqrt(variance), spec.strike,
                                         spec.rate, spec.horizon()),
                      QuoteMethod::ClosedForm, std::nullopt, kind);
}

inline PriceQuote vasicek_price(const OptionSpec& spec, const RiskNeutralParams& rn,
                                double sigma) {
    return spec.kind == OptionKind::Call ? vasicek_call(spec, rn, sigma)
                                         : vasicek_put(spec, rn, sigma);
}

/// The Vasicek call formula exactly as published:
///   C = e^{-r(T_e - t)} [ xi+ Phi(xi-/zeta) + zeta phi(xi-/zeta) ]
///   xi+- = e^{+-a T_e} (F - b*) - K,  zeta = sigma sqrt((1 - e^{-2a T_e}) / 2a)
/// Note xi uses the full expiry T_e while discounting uses T_e - t, and
/// the xi+ / xi- asymmetry differs from the terminal-moments route.
/// Kept verbatim for audit; can go negative, hence the method tag.
inline PriceQuote vasicek_call_paper(const OptionSpec& spec,
                                     const RiskNeutralParams& rn, double sigma) {
    if (!(rn.a_star > 0.0)) throw Error("reversion rate must be positive");
    if (!(sigma > 0.0)) throw NonPositiveVol("sigma must be positive");
    if (spec.kind != OptionKind::Call)
        throw UnsupportedModel("the published formula prices calls only");

    const double a = rn.a_star;
    const double te = spec.expiry;
    const double xi_plus = std::exp(a * te) * (spec.forward - rn.b_star) - spec.strike;
    const double xi_minus = std::exp(-a * te) * (spec.forward - rn.b_star) - spec.strike;
    const double zeta = sigma * std::sqrt((1.0 - std::exp(-2.0 * a * te)) / (2.0 * a));
    const double df = std::exp(-spec.rate * spec.horizon());

    double value;
    if (zeta > 0.0) {
        const double d = xi_minus / zeta;
        value = df * (xi_plus * norm_cdf(d) + zeta * norm_pdf(d));
    } else {
        value = xi_minus > 0.0 ? df * xi_plus : 0.0;
    }
    return PriceQuote(value, QuoteMethod::PaperVerbatim, std::nullopt,
                      ModelKind::Vasicek);
}

/// Bachelier: arithmetic Brownian terminal law N(F, sigma_n^2 T).
/// sigma_n is an absolute volatility in price units per sqrt(year).
inline PriceQuote bachelier_call(const OptionSpec& spec, double sigma_n) {
    if (!(sigma_n > 0.0)) throw NonPositiveVol("absolute volatility must be positive");
    const double t = spec.horizon();
    return gaussian_call(spec.forward, sigma_n * std::sqrt(t), spec.strike, spec.rate,
                         t, ModelKind::Bachelier);
}

inline PriceQuote bachelier_put(const OptionSpec& spec, double sigma_n) {
    if (!(sigma_n > 0.0)) throw NonPositiveVol("absolute volatility must be positive");
    const double t = spec.horizon();
    return PriceQuote(gaussian_put_value(spec.forward, sigma_n * std::sqrt(t),
                                         spec.strike, spec.rate, t),
                      QuoteMethod::ClosedForm, std::nullopt, ModelKind::Bachelier);
}

inline PriceQuote bachelier_price(const OptionSpec& spec, double sigma_n) {
    return spec.kind == OptionKind::Call ? bachelier_call(spec, sigma_n)
                                         : bachelier_put(spec, sigma_n);
}

}  // namespace futopt
