#pragma once

#include "unoma/config.hpp"
#include "unoma/distributions.hpp"
#include "unoma/experiments.hpp"
#include "unoma/io.hpp"
#include "unoma/montecarlo.hpp"
#include "unoma/outage.hpp"
#include "unoma/quadrature.hpp"
#include "unoma/rng.hpp"
