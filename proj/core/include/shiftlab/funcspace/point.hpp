#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "shiftlab/funcspace/symbol.hpp"

namespace shiftlab::funcspace {

// (k, z): block id k (1-based) and fiber coordinates z.
struct BlockPoint {
  int block = 1;
  std::vector<double> angles;
  std::optional<SymbolPoint> symbol;
};

// the n-th point of the adjoined sequence; n = 1 is the isolated point
struct SeqPoint {
  std::int64_t n = 1;
};

struct LimitRef {
  int index = 0;
};

using PointRef = std::variant<BlockPoint, SeqPoint, LimitRef>;

inline PointRef circle_point(int block, std::vector<double> angles) {
  return BlockPoint{block, std::move(angles), std::nullopt};
}

inline PointRef symbol_point(int block, SymbolPoint s) {
  return BlockPoint{block, {}, std::move(s)};
}

// Same point: exact on blocks, indices and symbols, angles to `tol`.
bool same_point(const PointRef& a, const PointRef& b, double tol = 1e-12);

std::string describe(const PointRef& x);

}  // namespace shiftlab::funcspace
