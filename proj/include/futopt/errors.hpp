#pragma once

#include <stdexcept>
#include <string>

namespace futopt {

// Base for every typed error the library raises. Catch this to handle
// any domain failure; catch a subtype to handle one specifically.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- series construction ---
struct TooShort : Error { using Error::Error; };
struct NonFiniteValue : Error { using Error::Error; };
struct NonPositiveStep : Error { using Error::Error; };

// --- calibration ---
struct DegenerateSeries : Error { using Error::Error; };
struct NeedsAtLeastFourPoints : Error { using Error::Error; };
struct NoMeanReversion : Error { using Error::Error; };
struct OscillatoryOrInvalid : Error { using Error::Error; };
struct DegenerateVolatility : Error { using Error::Error; };
struct ZeroPrice : Error { using Error::Error; };
struct ZeroVolatility : Error { using Error::Error; };
struct SignFlip : Error { using Error::Error; };
struct UnsupportedModel : Error { using Error::Error; };

// --- pricing ---
struct NegativeUnderlying : Error { using Error::Error; };
struct NegativeStrike : Error { using Error::Error; };
struct NegativeStd : Error { using Error::Error; };
struct NonPositiveVol : Error { using Error::Error; };

// --- monte carlo ---
struct HorizonMismatch : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };

// --- io ---
struct ParseError : Error {
    ParseError(std::size_t line, const std::string& what)
        : Error("parse error at line " + std::to_string(line) + ": " + what),
          line(line) {}
    std::size_t line;
};
struct EmptyFile : Error { using Error::Error; };
struct NonMonotoneDates : Error { using Error::Error; };

}  // namespace futopt
