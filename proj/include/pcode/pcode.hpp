#pragma once

// Umbrella header.

#include "pcode/boxcomplex.hpp"
#include "pcode/capture.hpp"
#include "pcode/code.hpp"
#include "pcode/hull.hpp"
#include "pcode/io.hpp"
#include "pcode/measure.hpp"
#include "pcode/oddmap.hpp"
#include "pcode/partition.hpp"
#include "pcode/rng.hpp"
#include "pcode/search.hpp"
#include "pcode/sphere.hpp"
#include "pcode/version.hpp"
