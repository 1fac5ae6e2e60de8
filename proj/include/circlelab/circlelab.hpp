#pragma once

// Umbrella header: the whole laboratory in one include.

#include "circlelab/version.hpp"
#include "circlelab/errors.hpp"
#include "circlelab/numeric.hpp"
#include "circlelab/fft.hpp"
#include "circlelab/quadrature.hpp"
#include "circlelab/divisor_sieve.hpp"
#include "circlelab/expsum.hpp"
#include "circlelab/dissection.hpp"
#include "circlelab/kernel_moments.hpp"
#include "circlelab/major_arc.hpp"
#include "circlelab/moment_engine.hpp"
#include "circlelab/minor_arc.hpp"
#include "circlelab/report_io.hpp"
