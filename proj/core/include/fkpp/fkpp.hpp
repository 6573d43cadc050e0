#pragma once

#include "fkpp/continuation.hpp"
#include "fkpp/convolution.hpp"
#include "fkpp/errors.hpp"
#include "fkpp/evolve.hpp"
#include "fkpp/grid.hpp"
#include "fkpp/io.hpp"
#include "fkpp/linalg.hpp"
#include "fkpp/operators.hpp"
#include "fkpp/oracles.hpp"
#include "fkpp/stability.hpp"
#include "fkpp/steady.hpp"
