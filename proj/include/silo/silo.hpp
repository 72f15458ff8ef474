#pragma once

#include "silo/core/courant_mesh.hpp"
#include "silo/core/error.hpp"
#include "silo/core/fields.hpp"
#include "silo/core/grid.hpp"
#include "silo/core/parameters.hpp"
#include "silo/core/source.hpp"
#include "silo/discrete/similarity_discrete.hpp"
#include "silo/discrete/sparse.hpp"
#include "silo/evolution/scheme.hpp"
#include "silo/exact/similarity_exact.hpp"
#include "silo/harness/builtin.hpp"
#include "silo/harness/config.hpp"
#include "silo/harness/csv.hpp"
#include "silo/harness/error_table.hpp"
#include "silo/harness/experiment.hpp"
