#pragma once

// Umbrella header for the corridor motion-primitive planner.

#include "pmp/baseline.hpp"
#include "pmp/bench.hpp"
#include "pmp/corridors.hpp"
#include "pmp/errors.hpp"
#include "pmp/geometry.hpp"
#include "pmp/heuristics.hpp"
#include "pmp/kinematics.hpp"
#include "pmp/nlp.hpp"
#include "pmp/planner.hpp"
#include "pmp/polynomial.hpp"
#include "pmp/solver.hpp"
#include "pmp/validation.hpp"
#include "pmp/world.hpp"
