#pragma once

#include "qenergy/control.hpp"
#include "qenergy/gf2.hpp"
#include "qenergy/landauer.hpp"
#include "qenergy/ledger.hpp"
#include "qenergy/parallel.hpp"
#include "qenergy/quantum.hpp"
#include "qenergy/random.hpp"
#include "qenergy/simon.hpp"
#include "qenergy/stats.hpp"

namespace qenergy {
inline constexpr const char* version = "0.1.0";
}
