#pragma once

#include "spinex/core.hpp"
#include "spinex/similarity.hpp"
#include "spinex/pareto.hpp"
#include "spinex/nelder_mead.hpp"
#include "spinex/explain.hpp"
#include "spinex/engine.hpp"
#include "spinex/benchmarks.hpp"
#include "spinex/baselines.hpp"
#include "spinex/analysis.hpp"
#include "spinex/record_io.hpp"
#include "spinex/export.hpp"
