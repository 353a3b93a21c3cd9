#pragma once

#include "basis.hpp"
#include "bivariate.hpp"
#include "bounds.hpp"
#include "core.hpp"
#include "csv.hpp"
#include "exact.hpp"
#include "experiments.hpp"
#include "function.hpp"
#include "smoothness.hpp"
#include "summability.hpp"
#include "univariate.hpp"
