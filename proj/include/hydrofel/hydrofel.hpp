#pragma once

#include "hydrofel/constants.hpp"
#include "hydrofel/dynamics.hpp"
#include "hydrofel/errors.hpp"
#include "hydrofel/mixing.hpp"
#include "hydrofel/pairwise_sum.hpp"
#include "hydrofel/physcore.hpp"
#include "hydrofel/scaling.hpp"
#include "hydrofel/scenario.hpp"
#include "hydrofel/spinstates.hpp"
#include "hydrofel/verification.hpp"
