#pragma once

#include "asymptotic.hpp"
#include "channel.hpp"
#include "errors.hpp"
#include "gen_gamma.hpp"
#include "linalg.hpp"
#include "monte_carlo.hpp"
#include "perf_metrics.hpp"
#include "quadrature.hpp"
#include "rng.hpp"
#include "special.hpp"
#include "version.hpp"
