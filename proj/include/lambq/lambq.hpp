#pragma once

#include "lambq/bogoliubov.hpp"
#include "lambq/errors.hpp"
#include "lambq/observables.hpp"
#include "lambq/oracle.hpp"
#include "lambq/params.hpp"
#include "lambq/random_params.hpp"
#include "lambq/roots.hpp"
#include "lambq/spectrum.hpp"
#include "lambq/string_modes.hpp"
#include "lambq/types.hpp"
