#pragma once

#include "subharmonic/error.hpp"
#include "subharmonic/parallel.hpp"

#include "subharmonic/core/dataset.hpp"
#include "subharmonic/core/model_id.hpp"
#include "subharmonic/core/regression.hpp"

#include "subharmonic/engine/bayes_factor.hpp"
#include "subharmonic/engine/error_model.hpp"
#include "subharmonic/engine/integral.hpp"
#include "subharmonic/engine/quadrature.hpp"

#include "subharmonic/selection/posterior.hpp"
#include "subharmonic/selection/select.hpp"

#include "subharmonic/simulation/design.hpp"
#include "subharmonic/simulation/rng.hpp"
#include "subharmonic/simulation/study.hpp"

#include "subharmonic/io/csv.hpp"
#include "subharmonic/io/report.hpp"
#include "subharmonic/io/run.hpp"
