#pragma once

/// @file arcs.hpp
/// Umbrella header for the whole library.

#include "arcs/certifier.hpp"
#include "arcs/config.hpp"
#include "arcs/convergence.hpp"
#include "arcs/diagnostics.hpp"
#include "arcs/errors.hpp"
#include "arcs/grid.hpp"
#include "arcs/io.hpp"
#include "arcs/linsolve.hpp"
#include "arcs/sensitivity.hpp"
#include "arcs/setup.hpp"
#include "arcs/simulate.hpp"
#include "arcs/solver.hpp"
#include "arcs/stencil.hpp"
#include "arcs/sweep.hpp"
