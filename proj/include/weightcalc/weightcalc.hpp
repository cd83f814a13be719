// weightcalc: umbrella header.

#pragma once

#include "weightcalc/numerics.hpp"
#include "weightcalc/verdict.hpp"
#include "weightcalc/sequences.hpp"
#include "weightcalc/weights.hpp"
#include "weightcalc/conjugate.hpp"
#include "weightcalc/bridge.hpp"
#include "weightcalc/koethe.hpp"
#include "weightcalc/io.hpp"
