#pragma once

// Umbrella header for the whole library.

#include "binexp/distribution.hpp"
#include "binexp/dyadic.hpp"
#include "binexp/exact.hpp"
#include "binexp/philox.hpp"
#include "binexp/quadrature.hpp"
#include "binexp/sampler.hpp"
#include "binexp/sweep.hpp"
