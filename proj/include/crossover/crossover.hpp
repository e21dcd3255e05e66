#pragma once

#include "crossover/comm.hpp"
#include "crossover/config.hpp"
#include "crossover/engine.hpp"
#include "crossover/equivalence.hpp"
#include "crossover/errors.hpp"
#include "crossover/metrics.hpp"
#include "crossover/scheduler.hpp"
#include "crossover/trace_io.hpp"
#include "crossover/units.hpp"
#include "crossover/workload.hpp"
