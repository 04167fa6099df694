#pragma once

// Umbrella header for the multiplicative matrix channel toolkit.

#include "mmc/capacity.hpp"
#include "mmc/counting.hpp"
#include "mmc/io.hpp"
#include "mmc/matrix.hpp"
#include "mmc/netsim.hpp"
#include "mmc/oracle.hpp"
#include "mmc/prime_field.hpp"
#include "mmc/rank_channel.hpp"
#include "mmc/rank_distribution.hpp"
#include "mmc/rng.hpp"
#include "mmc/sampling.hpp"
#include "mmc/version.hpp"
