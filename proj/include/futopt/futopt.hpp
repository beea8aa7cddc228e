#pragma once

#include "futopt/calibration.hpp"
#include "futopt/csv.hpp"
#include "futopt/domain.hpp"
#include "futopt/errors.hpp"
#include "futopt/model_selector.hpp"
#include "futopt/monte_carlo.hpp"
#include "futopt/normal.hpp"
#include "futopt/pricing.hpp"
#include "futopt/report.hpp"
