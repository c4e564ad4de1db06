#pragma once

#include "nhl/analytic.hpp"
#include "nhl/dynamics.hpp"
#include "nhl/errors.hpp"
#include "nhl/lattice.hpp"
#include "nhl/spectra.hpp"
