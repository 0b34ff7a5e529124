#pragma once

#include "gasket/affine_map.hpp"
#include "gasket/errors.hpp"
#include "gasket/expr.hpp"
#include "gasket/gasket_core.hpp"
#include "gasket/geometry.hpp"
#include "gasket/harmonic.hpp"
#include "gasket/measure.hpp"
#include "gasket/metric.hpp"
#include "gasket/model_io.hpp"
#include "gasket/polynomial.hpp"
#include "gasket/spectrum.hpp"
#include "gasket/svg.hpp"
#include "gasket/word.hpp"
