#pragma once

// Umbrella header.

#include "mtbound/bounds.hpp"
#include "mtbound/common.hpp"
#include "mtbound/feasible.hpp"
#include "mtbound/generator.hpp"
#include "mtbound/geometry.hpp"
#include "mtbound/graph.hpp"
#include "mtbound/gtsp.hpp"
#include "mtbound/kinematics.hpp"
#include "mtbound/model.hpp"
#include "mtbound/parallel.hpp"
#include "mtbound/report.hpp"
#include "mtbound/svg.hpp"
