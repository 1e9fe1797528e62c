#pragma once

#include "nonvanish/approx.hpp"
#include "nonvanish/conformal.hpp"
#include "nonvanish/contour.hpp"
#include "nonvanish/error.hpp"
#include "nonvanish/io.hpp"
#include "nonvanish/plot.hpp"
#include "nonvanish/polynomial.hpp"
#include "nonvanish/region.hpp"
#include "nonvanish/target.hpp"
#include "nonvanish/zeta.hpp"
#include "nonvanish/zeta_lab.hpp"
