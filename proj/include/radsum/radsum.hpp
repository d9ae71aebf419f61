#pragma once

#include "radsum/errors.hpp"
#include "radsum/rational.hpp"
#include "radsum/numeric.hpp"
#include "radsum/quadrature.hpp"
#include "radsum/specfun.hpp"
#include "radsum/group.hpp"
#include "radsum/multiplier.hpp"
#include "radsum/kloosterman.hpp"
#include "radsum/rademacher.hpp"
#include "radsum/oracle.hpp"
#include "radsum/config.hpp"
