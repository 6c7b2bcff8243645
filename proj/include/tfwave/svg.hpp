#ifndef TFWAVE_SVG_HPP
#define TFWAVE_SVG_HPP

/*
    Deterministic SVG phase-space heatmap of log10|c| over a coefficient
    grid: fixed color ramp, fixed number formatting, byte-identical output
    for identical input.
*/

#include "tfwave/gabor.hpp"

#include <string>

namespace tfwave {

std::string render_heatmap(const CoefficientGrid& coeffs, const std::string& title = "");

} // namespace tfwave

#endif
