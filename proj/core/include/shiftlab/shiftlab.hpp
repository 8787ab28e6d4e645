#pragma once

#include "shiftlab/common.hpp"
#include "shiftlab/funcspace/function.hpp"
#include "shiftlab/dynamics/homeo.hpp"
#include "shiftlab/dynamics/orbit.hpp"
#include "shiftlab/blockmethod/blockmethod.hpp"
#include "shiftlab/shiftop/functional.hpp"
#include "shiftlab/shiftop/shift.hpp"
#include "shiftlab/shiftop/variants.hpp"
#include "shiftlab/verify/kernel.hpp"
#include "shiftlab/verify/certify.hpp"
#include "shiftlab/verify/counterexamples.hpp"
