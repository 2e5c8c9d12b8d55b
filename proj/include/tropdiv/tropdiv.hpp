#pragma once

// Umbrella header for the tropdiv library: max-plus polynomial arithmetic,
// Newton-polytope division, its geometric-programming formulations, and
// two-phase compression of two-layer ReLU binary classifiers.

#include "tropdiv/common.hpp"
#include "tropdiv/compress.hpp"
#include "tropdiv/dataset.hpp"
#include "tropdiv/division.hpp"
#include "tropdiv/ggp.hpp"
#include "tropdiv/lattice.hpp"
#include "tropdiv/network.hpp"
#include "tropdiv/polytope.hpp"
#include "tropdiv/serialize.hpp"
#include "tropdiv/simplex.hpp"
#include "tropdiv/train.hpp"
#include "tropdiv/tropical.hpp"
