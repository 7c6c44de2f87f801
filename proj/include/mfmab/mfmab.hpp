#pragma once
// Umbrella header.

#include "mfmab/bai.hpp"
#include "mfmab/bounds.hpp"
#include "mfmab/csv.hpp"
#include "mfmab/env.hpp"
#include "mfmab/gaps.hpp"
#include "mfmab/harness.hpp"
#include "mfmab/instance.hpp"
#include "mfmab/instance_io.hpp"
#include "mfmab/regret.hpp"
#include "mfmab/rng.hpp"
