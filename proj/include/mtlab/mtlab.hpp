#pragma once

#include "mtlab/core.hpp"
#include "mtlab/grid.hpp"
#include "mtlab/quadrature.hpp"
#include "mtlab/measures.hpp"
#include "mtlab/fourier.hpp"
#include "mtlab/fft.hpp"
#include "mtlab/weights.hpp"
#include "mtlab/maximal.hpp"
#include "mtlab/experiments.hpp"
#include "mtlab/io.hpp"
#include "mtlab/commands.hpp"
