#pragma once

#include "semiteam/kteam.hpp"

namespace semiteam {

/// The worked-example teams bundled with the CLI suite: a boolean team, a
/// natural-weighted multiteam and a rational probability team over
/// D = {x, y}, A = {a, b}, plus the 8-row Z_4 team over {x, y, z} whose
/// mixing-rule failure the axiom probe reproduces.
KTeam bundled_boolean_team();   // aa -> 1, ab -> 1
KTeam bundled_natural_team();   // aa -> 2, bb -> 5
KTeam bundled_rational_team();  // aa -> 1/4, ab -> 3/4
KTeam bundled_mixing_team();    // Z_4 team over x, y, z

} // namespace semiteam
