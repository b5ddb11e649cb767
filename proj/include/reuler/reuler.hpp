// Umbrella header.
#pragma once

#include "config.hpp"
#include "csv.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "gas.hpp"
#include "numeric.hpp"
#include "quasi1d.hpp"
#include "reaction.hpp"
#include "riemann.hpp"
#include "scheme.hpp"
#include "waves.hpp"
