#pragma once

// Umbrella header.

#include "emg/beliefs.hpp"
#include "emg/core.hpp"
#include "emg/equilibrium.hpp"
#include "emg/montecarlo.hpp"
#include "emg/protocol.hpp"
#include "emg/rational.hpp"
#include "emg/strategies.hpp"
#include "emg/welfare.hpp"
