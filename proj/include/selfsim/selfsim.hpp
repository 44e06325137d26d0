#pragma once

// Umbrella header: simulation of self-similar processes, convex-hull and
// winding-number functionals of their paths, and the Monte Carlo harness
// that checks the almost-sure geometry statements behind them.

#include "selfsim/config.hpp"
#include "selfsim/errors.hpp"
#include "selfsim/experiment.hpp"
#include "selfsim/fbm.hpp"
#include "selfsim/generators.hpp"
#include "selfsim/hull.hpp"
#include "selfsim/lamperti.hpp"
#include "selfsim/path.hpp"
#include "selfsim/path_csv.hpp"
#include "selfsim/report.hpp"
#include "selfsim/rng.hpp"
#include "selfsim/simplex.hpp"
#include "selfsim/stable.hpp"
#include "selfsim/stats.hpp"
#include "selfsim/time_grid.hpp"
#include "selfsim/tolerances.hpp"
#include "selfsim/version.hpp"
#include "selfsim/winding.hpp"
