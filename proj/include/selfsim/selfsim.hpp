#pragma once

/// Umbrella header.

#include "selfsim/words.hpp"
#include "selfsim/similitude.hpp"
#include "selfsim/attractor.hpp"
#include "selfsim/verdict.hpp"
#include "selfsim/oracle.hpp"
#include "selfsim/set_cover.hpp"
#include "selfsim/irreducibility.hpp"
#include "selfsim/dimensions.hpp"
#include "selfsim/polytope.hpp"
#include "selfsim/separation.hpp"
#include "selfsim/corpus.hpp"
#include "selfsim/ifs_io.hpp"
#include "selfsim/report.hpp"
#include "selfsim/render.hpp"
#include "selfsim/analysis.hpp"
