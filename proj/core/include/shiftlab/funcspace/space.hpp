#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "shiftlab/common.hpp"
#include "shiftlab/funcspace/point.hpp"

namespace shiftlab::funcspace {

struct SymbolFactor {
  int alphabet = 2;
  int depth = 10;  // default cylinder window, centered
};

struct BlockDescriptor {
  int id = 1;
  int circles = 0;
  int degree = 16;  // Fourier truncation per circle factor
  std::optional<SymbolFactor> symbol;
  std::string label;
};

// A limit point of the adjoined sequence. Free (a separate point, the usual
// one-point compactification) or glued to a block point.
struct LimitPoint {
  std::optional<BlockPoint> address;
  bool free() const { return !address.has_value(); }
};

// Blocks + the sequence 1, 2, 3, ... + its limit points. With N limit points
// the class n = k mod N accumulates at limit k.
struct BlockSpace {
  std::vector<BlockDescriptor> blocks;
  int sequence_len = 256;
  std::vector<LimitPoint> limits{LimitPoint{}};
  ScalarField field = ScalarField::Real;

  void validate() const;
  const BlockDescriptor& block(int id) const;
  int block_count() const { return static_cast<int>(blocks.size()); }
  int limit_count() const { return static_cast<int>(limits.size()); }
  void check_point(const PointRef& x) const;
};

using SpacePtr = std::shared_ptr<const BlockSpace>;

SpacePtr make_space(BlockSpace space);

bool same_shape(const BlockSpace& a, const BlockSpace& b);

}  // namespace shiftlab::funcspace
