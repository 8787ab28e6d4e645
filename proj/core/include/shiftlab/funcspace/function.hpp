#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "shiftlab/common.hpp"
#include "shiftlab/funcspace/point.hpp"
#include "shiftlab/funcspace/space.hpp"

namespace shiftlab::funcspace {

// Coefficients of one block: for every cylinder word of the symbol window a
// trigonometric polynomial in the circle factors.
//   coef[word * modes() + mode], mode = sum_j (k_j + degree) (2 degree + 1)^j
// Words list the letters at lo, lo+1, ... with the first one least significant.
struct BlockPart {
  int circles = 0;
  int degree = 0;
  int alphabet = 0;  // 0 when the block has no symbol factor
  std::int64_t lo = 0;
  int depth = 0;
  std::vector<Scalar> coef;

  std::size_t modes() const;
  std::size_t words() const;
  Scalar value(const std::vector<double>& angles, const SymbolPoint* symbol) const;
  Scalar& at(std::size_t word, std::size_t mode) { return coef[word * modes() + mode]; }
  Scalar at(std::size_t word, std::size_t mode) const { return coef[word * modes() + mode]; }
};

// zero part with the block's default truncation
BlockPart zero_part(const BlockDescriptor& b);
// same function on the larger window [lo, lo + depth)
BlockPart embed_window(const BlockPart& part, std::int64_t lo, int depth);
// multi-degree of a flat mode index
std::vector<int> mode_degrees(std::size_t mode, int circles, int degree);
std::size_t mode_index(const std::vector<int>& k, int degree);

struct BlockFunction {
  SpacePtr space;
  std::vector<BlockPart> parts;  // parts[id - 1]
  std::vector<Scalar> head;      // f(1), f(2), ... written out
  std::vector<Scalar> limits;    // f(limit k); past the head f(n) = limits[n mod N]

  Scalar seq_value(std::int64_t n) const;
};

Scalar eval_function(const BlockFunction& f, const PointRef& x);

struct SupNorm {
  double value = 0;
  bool sampled = false;  // true when some block has circle factors
};

// max |f| over the sequence, the limit values and every block: exact on
// cylinder-only blocks, grid plus local refinement on circle factors.
SupNorm sup_norm_detail(const BlockFunction& f, int resolution = 4096);
double sup_norm(const BlockFunction& f, int resolution = 4096);
double sup_norm_part(const BlockPart& part, int resolution = 4096);

// sup over the circle of a one-variable trigonometric polynomial,
// c[k + degree] for k = -degree..degree
double trig_sup(const Scalar* c, int degree, int resolution);

BlockFunction zero_function(const SpacePtr& space);
BlockFunction constant_function(const SpacePtr& space, Scalar c);
// characteristic function of one block (limit values follow the glue)
BlockFunction block_indicator(const SpacePtr& space, int block);
// characteristic function of the sequence and its free limit points
BlockFunction sequence_indicator(const SpacePtr& space);
// 1 at the isolated point, 0 elsewhere
BlockFunction point_one_indicator(const SpacePtr& space);

BlockFunction assemble_block_function(const SpacePtr& space, std::vector<BlockPart> parts,
                                      std::vector<Scalar> seq, std::vector<Scalar> limits);

// recompute glued limit values from the blocks
void refresh_glue(BlockFunction& f);
double glue_defect(const BlockFunction& f);

BlockFunction scale(const BlockFunction& f, Scalar s);
// alpha f + beta g, windows aligned to their union
BlockFunction combine(Scalar alpha, const BlockFunction& f, Scalar beta, const BlockFunction& g);
BlockFunction subtract(const BlockFunction& f, const BlockFunction& g);

struct RandomOptions {
  int head_len = -1;  // -1: the space's sequence_len
  double fourier_scale = -1;  // -1: 1 / sqrt(modes)
};
BlockFunction random_function(const SpacePtr& space, std::mt19937_64& rng,
                              const RandomOptions& opt = {});

// Fixed coordinates for linear systems: one slot per coefficient of the
// default truncation of every block.
struct CoefficientLayout {
  SpacePtr space;
  std::vector<std::size_t> offset;  // per block
  std::vector<BlockPart> shape;     // zero parts fixing windows
  std::size_t dim = 0;
};

using SparseRow = std::vector<std::pair<std::size_t, Scalar>>;

CoefficientLayout default_layout(const SpacePtr& space);
SparseRow evaluation_row(const CoefficientLayout& layout, const BlockPoint& x);
std::vector<Scalar> layout_coefficients(const CoefficientLayout& layout, const BlockFunction& f);

}  // namespace shiftlab::funcspace
