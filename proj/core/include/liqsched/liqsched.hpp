#pragma once

#include "liqsched/cli.hpp"
#include "liqsched/cost.hpp"
#include "liqsched/envelope.hpp"
#include "liqsched/errors.hpp"
#include "liqsched/io.hpp"
#include "liqsched/oracle.hpp"
#include "liqsched/pattern.hpp"
#include "liqsched/scheduler.hpp"
#include "liqsched/step_curve.hpp"
