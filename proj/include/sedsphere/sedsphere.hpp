#pragma once

#include "sedsphere/errors.hpp"
#include "sedsphere/trajectory.hpp"
#include "sedsphere/quadrature.hpp"
#include "sedsphere/special.hpp"
#include "sedsphere/analytic.hpp"
#include "sedsphere/ide.hpp"
#include "sedsphere/ode.hpp"
#include "sedsphere/physical.hpp"
#include "sedsphere/analysis.hpp"
#include "sedsphere/output.hpp"
#include "sedsphere/suite.hpp"
