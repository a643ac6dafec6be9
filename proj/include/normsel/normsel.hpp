// Umbrella header.
#pragma once

#include "normsel/bitstring.hpp"
#include "normsel/coder.hpp"
#include "normsel/complexity.hpp"
#include "normsel/errors.hpp"
#include "normsel/experiment.hpp"
#include "normsel/generators.hpp"
#include "normsel/measure.hpp"
#include "normsel/normality.hpp"
#include "normsel/quadratic.hpp"
#include "normsel/report.hpp"
#include "normsel/selection.hpp"
