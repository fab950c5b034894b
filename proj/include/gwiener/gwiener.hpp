#pragma once

#include "gwiener/bench.hpp"
#include "gwiener/config.hpp"
#include "gwiener/error.hpp"
#include "gwiener/graph.hpp"
#include "gwiener/io.hpp"
#include "gwiener/priors.hpp"
#include "gwiener/random.hpp"
#include "gwiener/sampling.hpp"
#include "gwiener/spectral.hpp"
#include "gwiener/stationarity.hpp"
#include "gwiener/wiener.hpp"
#include "gwiener/selftest.hpp"
