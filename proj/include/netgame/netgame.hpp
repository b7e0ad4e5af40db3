#pragma once

#include "netgame/numeric.hpp"
#include "netgame/population.hpp"
#include "netgame/estimators.hpp"
#include "netgame/typespace.hpp"
#include "netgame/equilibrium.hpp"
#include "netgame/behavior.hpp"
#include "netgame/netsim.hpp"
#include "netgame/analysis.hpp"
