#pragma once

#include "ccbell/asymptotics.hpp"
#include "ccbell/bell.hpp"
#include "ccbell/classical_cc.hpp"
#include "ccbell/correlations.hpp"
#include "ccbell/errors.hpp"
#include "ccbell/format.hpp"
#include "ccbell/local_polytope.hpp"
#include "ccbell/problems.hpp"
#include "ccbell/protocol_sim.hpp"
#include "ccbell/quantum.hpp"
