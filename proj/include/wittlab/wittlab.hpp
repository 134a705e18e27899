#pragma once

// Umbrella header for the wittlab library.

#include "wittlab/brauer.hpp"
#include "wittlab/errors.hpp"
#include "wittlab/expression.hpp"
#include "wittlab/field_tower.hpp"
#include "wittlab/quadform.hpp"
#include "wittlab/verification.hpp"
#include "wittlab/witness_search.hpp"
#include "wittlab/witt_ideal.hpp"
