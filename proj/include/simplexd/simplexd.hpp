#pragma once

#include "bounds.hpp"
#include "directions.hpp"
#include "estimators.hpp"
#include "harness.hpp"
#include "linalg.hpp"
#include "polynomial.hpp"
#include "projections.hpp"
#include "sampling.hpp"
#include "tensor.hpp"
