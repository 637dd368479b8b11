#pragma once

// Umbrella header for the whole library.

#include "ismpath/cli.hpp"
#include "ismpath/config.hpp"
#include "ismpath/controller.hpp"
#include "ismpath/core.hpp"
#include "ismpath/frenet.hpp"
#include "ismpath/invariant.hpp"
#include "ismpath/logio.hpp"
#include "ismpath/pathfile.hpp"
#include "ismpath/plant.hpp"
#include "ismpath/refpath.hpp"
#include "ismpath/sim.hpp"
