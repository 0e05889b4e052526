#pragma once

#include "lrp/binomial.hpp"
#include "lrp/expansion.hpp"
#include "lrp/fit.hpp"
#include "lrp/hierarchy.hpp"
#include "lrp/metrics.hpp"
#include "lrp/model.hpp"
#include "lrp/report.hpp"
#include "lrp/rng.hpp"
#include "lrp/stats.hpp"
#include "lrp/sweep.hpp"
#include "lrp/sweep_row.hpp"
