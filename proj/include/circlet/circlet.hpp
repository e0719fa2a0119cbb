#pragma once

#include "circlet/circle_cwt.hpp"
#include "circlet/circle_rep.hpp"
#include "circlet/discrete_series.hpp"
#include "circlet/error.hpp"
#include "circlet/euclid.hpp"
#include "circlet/fft.hpp"
#include "circlet/line_cwt.hpp"
#include "circlet/parallel.hpp"
#include "circlet/quadrature.hpp"
#include "circlet/scales.hpp"
#include "circlet/sl2r.hpp"
