#pragma once

#include "nomavlc/allocation.hpp"
#include "nomavlc/allocation_matrix.hpp"
#include "nomavlc/association.hpp"
#include "nomavlc/experiment.hpp"
#include "nomavlc/geometry.hpp"
#include "nomavlc/pairing.hpp"
#include "nomavlc/phy.hpp"
#include "nomavlc/power_split.hpp"
#include "nomavlc/rng.hpp"
#include "nomavlc/search.hpp"
