#pragma once

// Umbrella header for the network-free part of the library. fetch.hpp is
// separate because it pulls in the HTTP client and OpenSSL.

#include "vafm/dataset.hpp"
#include "vafm/diagnostics.hpp"
#include "vafm/error.hpp"
#include "vafm/geometry.hpp"
#include "vafm/image.hpp"
#include "vafm/mesh.hpp"
#include "vafm/metrics.hpp"
#include "vafm/parallel.hpp"
#include "vafm/render.hpp"
#include "vafm/rng.hpp"
#include "vafm/structure.hpp"
#include "vafm/voxel_grid.hpp"
#include "vafm/voxelize.hpp"
