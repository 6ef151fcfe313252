#pragma once

#include "corrfit/bundle_io.hpp"
#include "corrfit/fixtures.hpp"
#include "corrfit/metrics.hpp"
#include "corrfit/objective.hpp"
#include "corrfit/optimizer.hpp"
#include "corrfit/param.hpp"
#include "corrfit/problem.hpp"
#include "corrfit/types.hpp"
