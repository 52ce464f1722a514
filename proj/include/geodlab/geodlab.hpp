#pragma once

#include "cli.hpp"
#include "experiments.hpp"
#include "forms.hpp"
#include "geodesic.hpp"
#include "numerics.hpp"
#include "offset_patch.hpp"
#include "planar_curve.hpp"
#include "projection.hpp"
#include "report.hpp"
#include "richardson.hpp"
#include "scalar_field.hpp"
#include "surface_patch.hpp"
#include "svg.hpp"
#include "types.hpp"
