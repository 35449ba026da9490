#ifndef LINEOPT_MPS_HPP
#define LINEOPT_MPS_HPP

#include <string>

#include "lineopt/milp.hpp"

namespace lineopt {

// Free-format MPS with OBJSENSE and INTORG/INTEND markers. Row tags are
// written as leading comment lines (`* ROWTAG <row> <tag>`); readers that do
// not know them skip comments. Column and row names are C<index> / R<index>.
std::string write_mps(const MilpModel& model);
void write_mps_file(const MilpModel& model, const std::string& path);

// Parses the same dialect. Integrality markers are honored; callers that want
// a pure LP can ignore the is_integer flags.
MilpModel read_mps(const std::string& text);
MilpModel read_mps_file(const std::string& path);

}  // namespace lineopt

#endif  // LINEOPT_MPS_HPP
