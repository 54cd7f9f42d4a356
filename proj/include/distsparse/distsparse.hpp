#pragma once

#include "distsparse/clustering.hpp"
#include "distsparse/error.hpp"
#include "distsparse/graph.hpp"
#include "distsparse/nof.hpp"
#include "distsparse/overlap.hpp"
#include "distsparse/sparsifier.hpp"
