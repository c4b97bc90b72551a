#pragma once

#include "dit/aperture.hpp"
#include "dit/config.hpp"
#include "dit/constants.hpp"
#include "dit/erf.hpp"
#include "dit/evolution.hpp"
#include "dit/grid.hpp"
#include "dit/io.hpp"
#include "dit/kernel.hpp"
#include "dit/parallel.hpp"
#include "dit/propagator.hpp"
#include "dit/quadrature.hpp"
#include "dit/runner.hpp"
#include "dit/scenarios.hpp"
#include "dit/verify.hpp"
#include "dit/version.hpp"
