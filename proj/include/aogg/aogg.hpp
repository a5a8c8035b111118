#pragma once

// Umbrella header.

#include "aogg/graph.hpp"
#include "aogg/search.hpp"
#include "aogg/constructions.hpp"
#include "aogg/rewrite.hpp"
#include "aogg/aspect.hpp"
#include "aogg/encoding.hpp"
#include "aogg/cpa.hpp"
#include "aogg/format.hpp"
#include "aogg/report.hpp"
#include "aogg/dot.hpp"
#include "aogg/cli.hpp"
