#pragma once

#include "hompol/biphoton.hpp"
#include "hompol/characterize.hpp"
#include "hompol/config.hpp"
#include "hompol/grid.hpp"
#include "hompol/homtrace.hpp"
#include "hompol/io.hpp"
#include "hompol/lattice.hpp"
#include "hompol/optimize.hpp"
#include "hompol/polarization.hpp"
#include "hompol/scan.hpp"
#include "hompol/workflows.hpp"
