#pragma once

#include "yanglee/numerics/bessel.hpp"
#include "yanglee/numerics/eigen.hpp"
#include "yanglee/numerics/newton.hpp"
#include "yanglee/numerics/polynomial.hpp"
#include "yanglee/numerics/quadrature.hpp"
