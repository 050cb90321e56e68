#pragma once

#include "edbound/bound_result.hpp"
#include "edbound/errors.hpp"
#include "edbound/lower_bounds.hpp"
#include "edbound/oracle.hpp"
#include "edbound/profile.hpp"
#include "edbound/quadrature.hpp"
#include "edbound/upper_bounds.hpp"
