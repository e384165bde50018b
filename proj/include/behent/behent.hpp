#pragma once

#include "behent/coverage.hpp"
#include "behent/dataset.hpp"
#include "behent/density.hpp"
#include "behent/entropy.hpp"
#include "behent/error.hpp"
#include "behent/io.hpp"
#include "behent/neighbors.hpp"
#include "behent/rewards.hpp"
#include "behent/rng.hpp"
#include "behent/study.hpp"
#include "behent/synth.hpp"
#include "behent/util.hpp"
#include "behent/weighting.hpp"
