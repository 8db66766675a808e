#pragma once

// Umbrella header for the controlled K-operator frame toolbox.

#include "algebra.hpp"
#include "douglas.hpp"
#include "errors.hpp"
#include "frames.hpp"
#include "lab.hpp"
#include "matrix.hpp"
#include "module_space.hpp"
#include "operators.hpp"
#include "rng.hpp"
#include "serialization.hpp"
#include "theorems.hpp"
