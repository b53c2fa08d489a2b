#pragma once

#include "cache.hpp"
#include "coproduct.hpp"
#include "expansion.hpp"
#include "families.hpp"
#include "integer.hpp"
#include "operators.hpp"
#include "packed.hpp"
#include "permutation.hpp"
#include "poly.hpp"
#include "positivity.hpp"
#include "series.hpp"
#include "suites.hpp"
