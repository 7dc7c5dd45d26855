#pragma once

#include "obm/advice_tape.hpp"
#include "obm/bits.hpp"
#include "obm/category.hpp"
#include "obm/derandomize.hpp"
#include "obm/eps_advice.hpp"
#include "obm/generators.hpp"
#include "obm/graph.hpp"
#include "obm/graph_io.hpp"
#include "obm/harness.hpp"
#include "obm/invariants.hpp"
#include "obm/lower_bounds.hpp"
#include "obm/online.hpp"
#include "obm/sgkh.hpp"
