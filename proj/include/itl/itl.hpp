#pragma once

#include "itl/bisimulation.hpp"
#include "itl/conditions.hpp"
#include "itl/document.hpp"
#include "itl/error.hpp"
#include "itl/formula.hpp"
#include "itl/generate.hpp"
#include "itl/morphisms.hpp"
#include "itl/point_set.hpp"
#include "itl/semantics.hpp"
#include "itl/structures.hpp"
