#pragma once

#include "torharm/axisym.hpp"
#include "torharm/cohomology.hpp"
#include "torharm/errors.hpp"
#include "torharm/grid.hpp"
#include "torharm/harmonic.hpp"
#include "torharm/io.hpp"
#include "torharm/neumann.hpp"
#include "torharm/ode.hpp"
#include "torharm/poincare.hpp"
#include "torharm/quadrature.hpp"
#include "torharm/rng.hpp"
#include "torharm/shape.hpp"
#include "torharm/spectral.hpp"
#include "torharm/surface.hpp"
#include "torharm/wire.hpp"
