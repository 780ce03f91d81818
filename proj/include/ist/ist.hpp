#pragma once

#include "ist/errors.hpp"
#include "ist/grid.hpp"
#include "ist/quadrature.hpp"
#include "ist/fft.hpp"
#include "ist/kernel.hpp"
#include "ist/rank1.hpp"
#include "ist/evolution.hpp"
#include "ist/scattering.hpp"
#include "ist/verify.hpp"
#include "ist/io.hpp"
