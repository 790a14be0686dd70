#pragma once

// Umbrella header for the GLP graph-based k-sample test library.

#include "glp/comeans.hpp"
#include "glp/dataset.hpp"
#include "glp/errors.hpp"
#include "glp/io.hpp"
#include "glp/kernel.hpp"
#include "glp/lp_basis.hpp"
#include "glp/parallel.hpp"
#include "glp/pipeline.hpp"
#include "glp/rng.hpp"
#include "glp/simulate.hpp"
#include "glp/spectral.hpp"
#include "glp/stats.hpp"
