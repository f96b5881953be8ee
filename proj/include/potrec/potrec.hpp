#pragma once
// Umbrella header.

#include "potrec/bases.hpp"
#include "potrec/energy_poly.hpp"
#include "potrec/errors.hpp"
#include "potrec/matrix_elements.hpp"
#include "potrec/potentials.hpp"
#include "potrec/quadrature.hpp"
#include "potrec/rational_fit.hpp"
#include "potrec/reconstruct.hpp"
#include "potrec/specfun.hpp"
#include "potrec/systems.hpp"
#include "potrec/tridiag.hpp"
