#pragma once

#include "ys/data.hpp"
#include "ys/error.hpp"
#include "ys/experiments.hpp"
#include "ys/inference.hpp"
#include "ys/priors.hpp"
#include "ys/specfun.hpp"
#include "ys/yule_simon.hpp"
