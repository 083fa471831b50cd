#pragma once

#include "drgoal/distortion.hpp"
#include "drgoal/distribution.hpp"
#include "drgoal/errors.hpp"
#include "drgoal/frechet.hpp"
#include "drgoal/numerics.hpp"
#include "drgoal/portfolio.hpp"
#include "drgoal/reinsurance.hpp"
#include "drgoal/robustness.hpp"
