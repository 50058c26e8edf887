#pragma once

// Goal-seeking QUBO toolkit: find sets of distinct binary vectors whose
// objective x'Qx hits an exact target, lands in an interval, or minimizes a
// weighted multi-target achievement function.

#include "qubogoal/bitvector.hpp"
#include "qubogoal/instances.hpp"
#include "qubogoal/landscape.hpp"
#include "qubogoal/metrics.hpp"
#include "qubogoal/oracle.hpp"
#include "qubogoal/quadratize.hpp"
#include "qubogoal/qubo.hpp"
#include "qubogoal/rng.hpp"
#include "qubogoal/solution.hpp"
#include "qubogoal/tabu.hpp"
#include "qubogoal/targets.hpp"
#include "qubogoal/version.hpp"
