#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "futopt/calibration.hpp"
#include "futopt/domain.hpp"

using namespace futopt;

TEST_CASE("validate_series accepts a minimal valid input") {
    const auto s = validate_series({1.0, 2.0, 3.0}, 1.0 / 252.0);
    CHECK(s.size() == 3);
    CHECK(s.step() == 1.0 / 252.0);
}

TEST_CASE("validate_series rejects bad inputs with typed errors") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate_series({1.0, nan, 2.0}, 1.0 / 252.0), NonFiniteValue);
    CHECK_THROWS_AS(validate_series({1.0, 2.0}, 1.0 / 252.0), TooShort);
    CHECK_THROWS_AS(validate_series({5.0, 5.0, 5.0}, 0.0), NonPositiveStep);
    CHECK_THROWS_AS(validate_series({5.0, 5.0, 5.0}, -1.0), NonPositiveStep);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(validate_series({1.0, inf, 2.0}, 1.0), NonFiniteValue);
    CHECK_THROWS_AS(validate_series({1.0, 2.0, 3.0}, inf), NonPositiveStep);
}

TEST_CASE("OuParams invariants") {
    CHECK_NOTHROW(OuParams(1.0, -3.0, 0.5));
    CHECK_THROWS_AS(OuParams(0.0, 0.0, 0.5), Error);
    CHECK_THROWS_AS(OuParams(-1.0, 0.0, 0.5), Error);
    CHECK_THROWS_AS(OuParams(1.0, 0.0, 0.0), DegenerateVolatility);
    CHECK_THROWS_AS(OuParams(1.0, 0.0, -0.5), NonPositiveVol);
}

TEST_CASE("OptionSpec invariants") {
    CHECK_NOTHROW(OptionSpec(-12.0, 0.0, 1.0, 0.05, OptionKind::Call, -10.0));
    CHECK_THROWS_AS(OptionSpec(1.0, 1.0, 1.0, 0.0, OptionKind::Call, 1.0), Error);
    CHECK_THROWS_AS(OptionSpec(1.0, 2.0, 1.0, 0.0, OptionKind::Call, 1.0), Error);
}

TEST_CASE("PriceQuote invariants") {
    CHECK_THROWS_AS(PriceQuote(-0.5, QuoteMethod::ClosedForm, std::nullopt,
                               ModelKind::Vasicek),
                    Error);
    // the verbatim formula is allowed to go negative
    CHECK_NOTHROW(PriceQuote(-0.5, QuoteMethod::PaperVerbatim, std::nullopt,
                             ModelKind::Vasicek));
    CHECK_THROWS_AS(PriceQuote(1.0, QuoteMethod::MonteCarlo, std::nullopt,
                               ModelKind::ContinuousGarch),
                    Error);
    CHECK_THROWS_AS(PriceQuote(1.0, QuoteMethod::ClosedForm, 0.1, ModelKind::Vasicek),
                    Error);
    CHECK_THROWS_AS(PriceQuote(1.0, QuoteMethod::MonteCarlo, -0.1,
                               ModelKind::ContinuousGarch),
                    Error);
}

TEST_CASE("risk-neutral parameters reproduce their defining rules") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> ua(0.1, 3.0), ub(-5.0, 5.0), us(0.05, 2.0),
        ul(-0.5, 0.5);
    for (int i = 0; i < 200; ++i) {
        const OuParams p(ua(gen), ub(gen), us(gen));
        const double lambda = ul(gen);

        const auto vas = risk_neutralize(p, lambda, ModelKind::Vasicek);
        CHECK(vas.a_star == p.a);
        CHECK_THAT(vas.b_star, Catch::Matchers::WithinRel(
                                   p.b - lambda * p.sigma / p.a, 1e-12));

        if (p.a + lambda * p.sigma > 0.0) {
            const auto g = risk_neutralize(p, lambda, ModelKind::ContinuousGarch);
            CHECK_THAT(g.a_star,
                       Catch::Matchers::WithinRel(p.a + lambda * p.sigma, 1e-12));
            CHECK_THAT(g.b_star,
                       Catch::Matchers::WithinRel(p.a * p.b / g.a_star, 1e-12));
        }
    }
}

TEST_CASE("model names round-trip") {
    for (auto m : {ModelKind::GbmBlack76, ModelKind::ContinuousGarch, ModelKind::Ou,
                   ModelKind::Vasicek, ModelKind::Bachelier})
        CHECK(model_from_string(to_string(m)) == m);
}
