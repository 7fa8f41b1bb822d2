#pragma once

#include "qgame/equilibrium.hpp"
#include "qgame/errors.hpp"
#include "qgame/lattice.hpp"
#include "qgame/linalg.hpp"
#include "qgame/payoff.hpp"
#include "qgame/rng.hpp"
#include "qgame/simulate.hpp"
#include "qgame/spec_io.hpp"
#include "qgame/strategy.hpp"
#include "qgame/version.hpp"
