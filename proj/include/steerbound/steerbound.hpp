#pragma once

#include "steerbound/common.hpp"
#include "steerbound/crlb.hpp"
#include "steerbound/estimator.hpp"
#include "steerbound/fft.hpp"
#include "steerbound/filterbank.hpp"
#include "steerbound/harness.hpp"
#include "steerbound/noise.hpp"
#include "steerbound/patterns.hpp"
#include "steerbound/quadrature.hpp"
#include "steerbound/radial.hpp"
#include "steerbound/report_io.hpp"
#include "steerbound/rng.hpp"
#include "steerbound/wavelet.hpp"
