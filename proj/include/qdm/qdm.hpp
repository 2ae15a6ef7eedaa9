#pragma once

#include "qdm/analytics.hpp"
#include "qdm/calibration.hpp"
#include "qdm/config.hpp"
#include "qdm/csv.hpp"
#include "qdm/errors.hpp"
#include "qdm/generator.hpp"
#include "qdm/golden_section.hpp"
#include "qdm/model.hpp"
#include "qdm/observables.hpp"
#include "qdm/parallel.hpp"
#include "qdm/steady_state.hpp"
#include "qdm/sweeps.hpp"
