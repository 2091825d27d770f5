#pragma once

#include "errors.hpp"
#include "geometry.hpp"
#include "rng.hpp"
#include "quadrature.hpp"
#include "densities.hpp"
#include "propagators.hpp"
#include "states.hpp"
#include "vertex.hpp"
#include "montecarlo.hpp"
#include "smatrix.hpp"
#include "quasiequiv.hpp"
#include "thirring.hpp"
