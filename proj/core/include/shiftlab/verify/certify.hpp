#pragma once

#include <cstdint>
#include <vector>

#include "shiftlab/dynamics/orbit.hpp"
#include "shiftlab/shiftop/shift.hpp"

namespace shiftlab::verify {

struct GeneratorEstimate {
  int lower = 0;  // components of the map: an orbit never leaves its own
  int upper = 0;  // size of the greedy cover
  std::vector<int> seeds;  // block ids of the chosen seeds, in pick order
  double eps = 0;
  std::int64_t budget = 0;
  std::size_t probes = 0;
  double coverage = 0;  // covered fraction of the probe grid
  bool complete = false;
};

// Candidate seeds, one per block, walk their component's map forwards and
// backwards for `budget` steps; a greedy set cover of the probe grid bounds
// the number of generating orbits from above.
GeneratorEstimate estimate_generators(const shiftop::ShiftOperator& T, double eps, std::int64_t budget);

// seed point used for block b
funcspace::BlockPoint generator_candidate(const shiftop::ShiftOperator& T, int block);

// independent rotations of the circle, base point 0
std::vector<dynamics::TransitiveSeed> rotation_family(const std::vector<double>& turns);
// Z/2 x circle with (a, x) -> (a + 1, x + turn), base point (0, 0)
std::vector<dynamics::TransitiveSeed> parity_family(double turn);

}  // namespace shiftlab::verify
