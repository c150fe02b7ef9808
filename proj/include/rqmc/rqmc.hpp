#pragma once

#include "rqmc/numerics.hpp"
#include "rqmc/random.hpp"
#include "rqmc/sobol_table.hpp"
#include "rqmc/pointsets.hpp"
#include "rqmc/integrands.hpp"
#include "rqmc/estimators.hpp"
#include "rqmc/harness.hpp"
#include "rqmc/svg_plot.hpp"
