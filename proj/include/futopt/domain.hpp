#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "futopt/errors.hpp"

namespace futopt {

/// Which price model a quote or recommendation refers to. Exactly the
/// five models of the recommendation table.
enum class ModelKind { GbmBlack76, ContinuousGarch, Ou, Vasicek, Bachelier };

inline std::string_view to_string(ModelKind m) {
    switch (m) {
        case ModelKind::GbmBlack76: return "GBM-Black76";
        case ModelKind::ContinuousGarch: return "ContinuousGARCH";
        case ModelKind::Ou: return "OU";
        case ModelKind::Vasicek: return "Vasicek";
        case ModelKind::Bachelier: return "Bachelier";
    }
    return "?";
}

inline std::optional<ModelKind> model_from_string(std::string_view s) {
    if (s == "GBM-Black76" || s == "black76" || s == "gbm") return ModelKind::GbmBlack76;
    if (s == "ContinuousGARCH" || s == "garch") return ModelKind::ContinuousGarch;
    if (s == "OU" || s == "ou") return ModelKind::Ou;
    if (s == "Vasicek" || s == "vasicek") return ModelKind::Vasicek;
    if (s == "Bachelier" || s == "bachelier") return ModelKind::Bachelier;
    return std::nullopt;
}

/// Ordered futures settlement prices with a uniform time step (years).
/// Values may be negative; that is the whole point.
class PriceSeries {
  public:
    PriceSeries(std::vector<double> values, double step, std::string label = {})
        : values_(std::move(values)), step_(step), label_(std::move(label)) {
        if (values_.size() < 3)
            throw TooShort("price series needs at least 3 observations, got " +
                           std::to_string(values_.size()));
        if (!(step_ > 0.0) || !std::isfinite(step_))
            throw NonPositiveStep("time step must be positive and finite");
        for (double v : values_)
            if (!std::isfinite(v)) throw NonFiniteValue("non-finite price in series");
    }

    const std::vector<double>& values() const { return values_; }
    double step() const { return step_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return values_.size(); }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

  private:
    std::vector<double> values_;
    double step_;
    std::string label_;
};

inline PriceSeries validate_series(std::vector<double> values, double step,
                                   std::string label = {}) {
    return PriceSeries(std::move(values), step, std::move(label));
}

/// AR(1) least-squares output: the five raw sums plus the fitted slope,
/// intercept and residual standard deviation. Kept together so a
/// calibration can be audited from the sums alone.
struct RegressionStats {
    std::size_t n = 0;  // transition pairs
    double f_x = 0, f_y = 0, f_xx = 0, f_yy = 0, f_xy = 0;
    double tau = 0;   // slope
    double mu = 0;    // intercept
    double sd_e = 0;  // residual standard deviation
};

/// Physical mean-reversion parameters. sigma is absolute for OU/Vasicek
/// and proportional for GARCH.
struct OuParams {
    double a;      // reversion rate, 1/years
    double b;      // reversion level, any sign
    double sigma;  // volatility

    OuParams(double a, double b, double sigma) : a(a), b(b), sigma(sigma) {
        if (!(a > 0.0) || !std::isfinite(a))
            throw Error("reversion rate must be positive and finite");
        if (!std::isfinite(b)) throw NonFiniteValue("reversion level must be finite");
        if (!std::isfinite(sigma)) throw NonFiniteValue("volatility must be finite");
        if (sigma == 0.0) throw DegenerateVolatility("volatility is zero");
        if (!(sigma > 0.0)) throw NonPositiveVol("volatility must be positive");
    }
};

/// Risk-adjusted parameters together with the rule that produced them.
/// Vasicek rule: a* = a, b* = b - lambda*sigma/a.
/// GARCH rule:   a* = a + lambda*sigma, b* = a*b/(a + lambda*sigma).
struct RiskNeutralParams {
    double a_star;
    double b_star;
    double lambda;
    ModelKind model;
};

enum class OptionKind { Call, Put };

/// European option contract terms on a futures price F(t, T_e).
struct OptionSpec {
    double strike;          // K, any sign
    double valuation_time;  // t, years
    double expiry;          // T_e, years
    double rate;            // r, continuously compounded
    OptionKind kind;
    double forward;  // F(t, T_e), any sign

    OptionSpec(double strike, double valuation_time, double expiry, double rate,
               OptionKind kind, double forward)
        : strike(strike), valuation_time(valuation_time), expiry(expiry), rate(rate),
          kind(kind), forward(forward) {
        if (!(expiry > valuation_time))
            throw Error("expiry must be later than valuation time");
        if (!std::isfinite(rate)) throw NonFiniteValue("rate must be finite");
        if (!std::isfinite(strike) || !std::isfinite(forward))
            throw NonFiniteValue("strike and forward must be finite");
    }

    double horizon() const { return expiry - valuation_time; }
};

enum class QuoteMethod { ClosedForm, MonteCarlo, PaperVerbatim };

inline std::string_view to_string(QuoteMethod m) {
    switch (m) {
        case QuoteMethod::ClosedForm: return "closed-form";
        case QuoteMethod::MonteCarlo: return "monte-carlo";
        case QuoteMethod::PaperVerbatim: return "paper-verbatim";
    }
    return "?";
}

/// A priced option. std_error is present iff the method is monte-carlo.
/// Closed-form and standard Monte Carlo values are nonnegative; the
/// paper-verbatim formula may produce anything, which is why the method
/// tag exists.
struct PriceQuote {
    double value;
    QuoteMethod method;
    std::optional<double> std_error;
    ModelKind model;

    PriceQuote(double value, QuoteMethod method, std::optional<double> std_error,
               ModelKind model)
        : value(value), method(method), std_error(std_error), model(model) {
        if (method != QuoteMethod::PaperVerbatim && !(value >= 0.0))
            throw Error("option value must be nonnegative");
        if (std_error && !(*std_error >= 0.0))
            throw Error("standard error must be nonnegative");
        if ((method == QuoteMethod::MonteCarlo) != std_error.has_value())
            throw Error("std_error present iff method is monte-carlo");
    }
};

}  // namespace futopt
