#pragma once

#include "tvdd/grid.hpp"

namespace tvdd {

/// Color-codes a 2-D displacement field: the angle selects the hue and the
/// magnitude the saturation, normalized by the 99th-percentile magnitude
/// so outliers do not wash out the picture. Zero displacement maps to
/// white. Returns a 3-channel RGB field with values in [0,1].
GridFunction flow_to_color(const GridFunction& flow);

}  // namespace tvdd
