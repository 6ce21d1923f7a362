#pragma once

#include "mdinv/errors.hpp"
#include "mdinv/numbers.hpp"
#include "mdinv/int_matrix.hpp"
#include "mdinv/smith.hpp"
#include "mdinv/chain_complex.hpp"
#include "mdinv/word.hpp"
#include "mdinv/presentation.hpp"
#include "mdinv/rate.hpp"
#include "mdinv/rated_graph.hpp"
#include "mdinv/bmodel.hpp"
#include "mdinv/thickening.hpp"
#include "mdinv/io.hpp"
