#pragma once

#include "errors.hpp"
#include "geom_core.hpp"
#include "quadric.hpp"
#include "knot.hpp"
#include "io.hpp"
#include "rng.hpp"
#include "parallel.hpp"
#include "transversal.hpp"
#include "quadrisecant.hpp"
#include "audit.hpp"
#include "secant_structure.hpp"
#include "analysis.hpp"
#include "report.hpp"
