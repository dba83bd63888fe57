#pragma once

#include "prefdyn/aggregation.hpp"
#include "prefdyn/analysis.hpp"
#include "prefdyn/dynamics.hpp"
#include "prefdyn/errors.hpp"
#include "prefdyn/experiment.hpp"
#include "prefdyn/graph.hpp"
#include "prefdyn/preorder.hpp"
#include "prefdyn/relation.hpp"
#include "prefdyn/verification.hpp"
