#pragma once

// Umbrella header.

#include "toruslab/arithmin.hpp"
#include "toruslab/dissipation.hpp"
#include "toruslab/dynamo.hpp"
#include "toruslab/errors.hpp"
#include "toruslab/exact.hpp"
#include "toruslab/factor.hpp"
#include "toruslab/fourier_sim.hpp"
#include "toruslab/lattice.hpp"
#include "toruslab/parallel.hpp"
#include "toruslab/polynomial.hpp"
#include "toruslab/spectral.hpp"
