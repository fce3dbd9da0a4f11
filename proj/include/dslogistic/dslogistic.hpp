// Umbrella header.
#pragma once

#include "dslogistic/params.hpp"
#include "dslogistic/core.hpp"
#include "dslogistic/sample.hpp"
#include "dslogistic/sampling.hpp"
#include "dslogistic/optimize.hpp"
#include "dslogistic/estimation.hpp"
#include "dslogistic/competitors.hpp"
#include "dslogistic/datasets.hpp"
#include "dslogistic/simulation.hpp"
#include "dslogistic/io.hpp"
#include "dslogistic/comparison.hpp"
