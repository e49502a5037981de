// qeraser.hpp
// Umbrella header for the whole library.

#pragma once

#include "qeraser/catalog.hpp"
#include "qeraser/common.hpp"
#include "qeraser/experiments.hpp"
#include "qeraser/hilbert.hpp"
#include "qeraser/histories.hpp"
#include "qeraser/linalg.hpp"
#include "qeraser/nocomm.hpp"
#include "qeraser/optics.hpp"
#include "qeraser/random.hpp"
#include "qeraser/scenario.hpp"
#include "qeraser/temporal.hpp"
