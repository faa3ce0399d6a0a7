#pragma once

// Umbrella header: boundary-aware group-relative reward shaping, advantage
// preservation, training-dynamics simulation, and the file formats that
// carry them.

#include "drsaf/advantage.hpp"
#include "drsaf/boundary.hpp"
#include "drsaf/io.hpp"
#include "drsaf/metrics.hpp"
#include "drsaf/rewards.hpp"
#include "drsaf/rng.hpp"
#include "drsaf/simulate.hpp"
#include "drsaf/types.hpp"
