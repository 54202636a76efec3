#pragma once

// Umbrella header.

#include "mmatch/cuckoo.hpp"
#include "mmatch/degree_distribution.hpp"
#include "mmatch/edge_list.hpp"
#include "mmatch/errors.hpp"
#include "mmatch/exact.hpp"
#include "mmatch/generators.hpp"
#include "mmatch/graph.hpp"
#include "mmatch/karp_sipser.hpp"
#include "mmatch/limit_formulas.hpp"
#include "mmatch/matching_polynomial.hpp"
#include "mmatch/max_matching.hpp"
#include "mmatch/path_tree.hpp"
#include "mmatch/population.hpp"
#include "mmatch/random.hpp"
#include "mmatch/sandwich.hpp"
