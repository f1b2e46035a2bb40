#pragma once

/// Umbrella header: alpha-Baskakov Durrmeyer operators, their moments,
/// error bounds and the error-comparison experiments.

#include "basis.hpp"
#include "bounds.hpp"
#include "errors.hpp"
#include "experiment.hpp"
#include "function_spec.hpp"
#include "moments.hpp"
#include "operator.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "quadrature.hpp"
#include "special.hpp"
