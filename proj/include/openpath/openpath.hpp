#pragma once

#include "openpath/balance.hpp"
#include "openpath/config.hpp"
#include "openpath/core_math.hpp"
#include "openpath/correlation.hpp"
#include "openpath/csv.hpp"
#include "openpath/errors.hpp"
#include "openpath/pipeline.hpp"
#include "openpath/resonance.hpp"
#include "openpath/spectra.hpp"
