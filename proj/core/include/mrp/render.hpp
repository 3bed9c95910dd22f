#pragma once

#include <string>

#include "mrp/scenario.hpp"

namespace mrp {

// SVG of the workspace with loops, potential starts and, when a bundle is
// given, recharger paths and recharge events.
std::string render_svg(const Scenario& s, const PlanBundle* b = nullptr, int cell_px = 24);

}  // namespace mrp
