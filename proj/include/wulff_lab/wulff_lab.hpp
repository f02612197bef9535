#pragma once

#include "wulff_lab/error.hpp"
#include "wulff_lab/finsler.hpp"
#include "wulff_lab/angle_grid.hpp"
#include "wulff_lab/bodies.hpp"
#include "wulff_lab/quadrature.hpp"
#include "wulff_lab/functionals.hpp"
#include "wulff_lab/variation.hpp"
#include "wulff_lab/iamcf.hpp"
#include "wulff_lab/shapes.hpp"
#include "wulff_lab/parallel.hpp"
#include "wulff_lab/verify.hpp"
