#pragma once

#include "orlicz/numeric.hpp"
#include "orlicz/matrix.hpp"
#include "orlicz/orlicz_function.hpp"
#include "orlicz/spectral.hpp"
#include "orlicz/norms.hpp"
#include "orlicz/report.hpp"
#include "orlicz/random.hpp"
#include "orlicz/tuple_spaces.hpp"
#include "orlicz/interpolation.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/suites.hpp"
