#ifndef LINEOPT_SYNTHETIC_HPP
#define LINEOPT_SYNTHETIC_HPP

#include "lineopt/instance.hpp"

namespace lineopt {

enum class SizeClass { tiny, small, seville_like };

SizeClass size_class_from(const std::string& name);

// Deterministic corridor-shaped instances.
//
// tiny        exhaustively solvable: a forked rapid corridor, a slow access
//             tree, at most a dozen demand pairs. Candidate networks are
//             acyclic per mode and coverage margins are kept away from
//             knife-edge ties, so path enumeration and the integer model
//             agree exactly.
// small       a denser corridor for benchmarking; not oracle-sized.
// seville_like node/edge/centroid counts near 97 / 247 / 73 with a full
//             ordered demand matrix.
TransitInstance generate_synthetic(unsigned int seed, SizeClass size);

}  // namespace lineopt

#endif  // LINEOPT_SYNTHETIC_HPP
