#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "shiftlab/funcspace/function.hpp"
#include "shiftlab/funcspace/point.hpp"

namespace shiftlab::dynamics {

using funcspace::BlockPart;
using funcspace::BlockPoint;
using funcspace::PointRef;
using funcspace::SymbolPoint;

// A map of one block's fiber (circle angles and/or symbol coordinate).
struct FiberMap {
  enum class Kind { Identity, Rotation, Shift, Translate, Chain };
  Kind kind = Kind::Identity;
  std::vector<double> turns;  // Rotation: theta_j += 2 pi turns_j
  std::int64_t power = 0;     // Shift: Sigma^power
  int base = 0;               // Translate: t -> t + add - sub in Z_base
  std::vector<int> add, sub;
  std::vector<FiberMap> steps;  // Chain: steps[0] applied first

  static FiberMap identity() { return {}; }
  static FiberMap rotation(std::vector<double> turns);
  static FiberMap shift(std::int64_t power);
  static FiberMap translate(int p, std::vector<int> add, std::vector<int> sub);
  // b after a
  static FiberMap then(const FiberMap& a, const FiberMap& b);

  void forward(BlockPoint& x) const;
  void backward(BlockPoint& x) const;
  FiberMap inverse() const;
  // coefficients of f o map
  BlockPart pullback(const BlockPart& f) const;
  bool is_identity() const;
  // rotations and translations only: isometric for the fiber metric
  bool isometric() const;
};

struct BlockShape {
  int circles = 0;
  int alphabet = 0;  // 0: no symbol factor
  friend bool operator==(const BlockShape&, const BlockShape&) = default;
};

enum class HomeoKind {
  Identity,
  Rotation,
  SymbolShift,
  DigitTranslation,
  CyclicBlock,
  Conjugated,
  Assembled,
  Composite
};

std::string to_string(HomeoKind k);

struct Homeo;
using HomeoPtr = std::shared_ptr<const Homeo>;

// Invertible self-map of a finite topological sum of blocks; block b goes
// to target[b-1] through fiber[b-1]. Assembled maps also act on the
// sequence (n+1 -> n) and permute the limit points.
struct Homeo {
  HomeoKind kind = HomeoKind::Identity;
  std::string label;
  std::vector<BlockShape> domain;
  std::vector<int> target;
  std::vector<FiberMap> fiber;
  int sequence_step = 0;       // -1: n+1 -> n, +1: n -> n+1
  std::vector<int> limit_map;  // limit k -> limit_map[k]

  // structure, for reports and for fast orbit walking
  std::vector<double> phases;
  std::int64_t shift_power = 0;
  std::vector<int> cycle;  // CyclicBlock: index table s (1-based)
  HomeoPtr outer, inner;   // Conjugated: outer^-1 o inner o outer
  struct Component {
    HomeoPtr map;
    int offset = 0;  // block ids offset + 1 .. offset + map->block_count()
  };
  std::vector<Component> components;

  int block_count() const { return static_cast<int>(domain.size()); }
  BlockPoint forward(BlockPoint x) const;
  BlockPoint backward(BlockPoint x) const;
  PointRef forward(const PointRef& x) const;
  PointRef backward(const PointRef& x) const;
  Homeo inverse() const;
  // block targets fixed and every fiber isometric
  bool uniform_isometry() const;
  int preimage_block(int b) const;
};

HomeoPtr make_identity(std::vector<BlockShape> domain);
HomeoPtr make_rotation_flow(const std::vector<double>& phases);
HomeoPtr make_symbol_shift(int alphabet, std::int64_t power = 1);
HomeoPtr make_digit_translation(int p, std::vector<int> add, std::vector<int> sub);
// blocks (j, sub), id = (j-1) * inner.block_count() + sub, mapped to
// (s[j-1], inner.target(sub)) through inner's fiber map
HomeoPtr make_cyclic_block(std::vector<int> s, HomeoPtr inner);
// topological sum of components plus the sequence and its limit points
HomeoPtr make_assembled(std::vector<HomeoPtr> components, std::vector<int> limit_map,
                        bool with_sequence = true);
HomeoPtr inverse(const HomeoPtr& h);
// a o b
HomeoPtr compose(const HomeoPtr& a, const HomeoPtr& b);
HomeoPtr power(const HomeoPtr& h, int k);
// psi^-1 o phi o psi
HomeoPtr conjugate_flow(const HomeoPtr& psi, const HomeoPtr& phi);

// A flow with a point whose forward orbit is dense.
struct TransitiveSeed {
  HomeoPtr flow;
  BlockPoint base;
  double eps = 0;
  std::int64_t budget = 0;
  int depth = 0;  // symbol flows: every cylinder of this depth is visited
};

struct BilateralShift {
  HomeoPtr flow;
  TransitiveSeed seed;
  std::int64_t placements = 0;  // tuples written into the seed
  std::int64_t span = 0;        // last scheduled position
};

// Sigma on alphabet^Z together with a point w whose orbit under every power
// Sigma^k, k <= max_power, visits every word of length <= depth.
BilateralShift make_bilateral_shift(int alphabet, std::int64_t schedule_budget, int depth = 6,
                                    int max_power = 4);

struct CantorFlow {
  HomeoPtr flow;
  TransitiveSeed seed;
  SymbolPoint fixed;  // the point L0
  HomeoPtr translation;  // t -> t - L0 + M0
};

// Conjugate of a totally transitive shift on Z_p (interleaved digits) that
// fixes L0. Digit strings are least significant first.
CantorFlow make_cantor_flow(int p, int depth, const std::vector<int>& L0, const std::vector<int>& M0,
                            int seed_depth = 6, std::int64_t schedule_budget = 2'000'000);

bool is_prime(int p);

}  // namespace shiftlab::dynamics
