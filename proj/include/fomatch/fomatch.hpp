#pragma once

// Umbrella header: the whole library in one include.

#include "fomatch/version.hpp"
#include "fomatch/errors.hpp"
#include "fomatch/numeric.hpp"
#include "fomatch/rng.hpp"
#include "fomatch/constants.hpp"
#include "fomatch/gain.hpp"
#include "fomatch/instance.hpp"
#include "fomatch/io.hpp"
#include "fomatch/opt.hpp"
#include "fomatch/waterfill.hpp"
#include "fomatch/special_functions.hpp"
#include "fomatch/wf_hardness.hpp"
#include "fomatch/ranking.hpp"
#include "fomatch/ranking_hardness.hpp"
#include "fomatch/random_instances.hpp"
#include "fomatch/report.hpp"
