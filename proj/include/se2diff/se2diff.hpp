#pragma once

// Umbrella header: sub-Riemannian image inpainting and enhancement on the
// rototranslation group.

#include "se2diff/ahe.hpp"
#include "se2diff/diffusion.hpp"
#include "se2diff/errors.hpp"
#include "se2diff/filters.hpp"
#include "se2diff/fixtures.hpp"
#include "se2diff/grid.hpp"
#include "se2diff/image.hpp"
#include "se2diff/image_io.hpp"
#include "se2diff/lift.hpp"
#include "se2diff/metrics.hpp"
#include "se2diff/stencil.hpp"
