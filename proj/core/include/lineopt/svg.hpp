#ifndef LINEOPT_SVG_HPP
#define LINEOPT_SVG_HPP

#include <string>

#include "lineopt/instance.hpp"
#include "lineopt/solution.hpp"

namespace lineopt {

// Static rendering of a design over its network: the chosen rapid line as one
// solid polyline, the chosen slow line as one dashed polyline, rapid-capable
// nodes filled and slow-only nodes hollow, stations emphasized. Byte output
// is deterministic for a fixed input.
std::string render_design(const TransitInstance& inst, const DesignSolution& sol);

}  // namespace lineopt

#endif  // LINEOPT_SVG_HPP
