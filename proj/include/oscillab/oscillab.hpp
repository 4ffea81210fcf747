#pragma once

// Everything in one include.

#include "parallel.hpp"
#include "grid.hpp"
#include "grid_io.hpp"
#include "summed_area_table.hpp"
#include "kernel.hpp"
#include "mollify.hpp"
#include "measure.hpp"
#include "report.hpp"
#include "oscillation.hpp"
#include "smoothness.hpp"
#include "fixtures.hpp"
#include "interpolation.hpp"
#include "jump_detect.hpp"
