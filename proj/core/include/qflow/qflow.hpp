#pragma once

// Convenience include of the whole library.

#include "qflow/analysis.hpp"
#include "qflow/bulk.hpp"
#include "qflow/config.hpp"
#include "qflow/driver.hpp"
#include "qflow/errors.hpp"
#include "qflow/grid.hpp"
#include "qflow/init.hpp"
#include "qflow/io.hpp"
#include "qflow/params.hpp"
#include "qflow/radial.hpp"
#include "qflow/reduce.hpp"
#include "qflow/tensor.hpp"
