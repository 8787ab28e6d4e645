#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shiftlab/common.hpp"
#include "shiftlab/funcspace/point.hpp"
#include "shiftlab/shiftop/functional.hpp"

namespace shiftlab::blockmethod {

// p_1, p_2, ... over the initial segment {1, ..., |p|}. With `all` set the
// list is the truncation of an infinite sequence.
struct CompatibleSequence {
  std::vector<int> p;
  bool all = false;
  bool integer_multiple = false;  // built with the relaxed ratio rule

  int families() const { return static_cast<int>(p.size()); }
  int total() const;
  int max_p() const;
};

// Throws ValidationError naming the first bad pair. The relaxed rule only
// asks p_{n+1} to be a larger integer multiple of p_n.
CompatibleSequence validate_compatible_sequence(std::vector<int> p, bool all = false,
                                                bool allow_integer_multiple = false);

// A_n = consecutive runs of 1..total, s_n the cyclic predecessor on A_n.
struct BlockIndex {
  std::vector<int> p;
  std::vector<int> start;  // first element of A_n

  int families() const { return static_cast<int>(p.size()); }
  int total() const;
  int a(int n, int j) const;
  int pi(int k) const;
  int position(int k) const;  // j with k = a_j^n
  int s(int k) const;
  // s_n inside the family, 1-based: s_table(n)[j-1] = position of s_n(a_j)
  std::vector<int> s_table(int n) const;
};

BlockIndex build_block_index(const CompatibleSequence& seq);

// Row i is row i-1 rotated right by one with the wrapped entry negated.
struct SkewCirculant {
  int order = 0;
  std::vector<Scalar> entries;  // row-major
  Scalar det = 0;

  Scalar at(int i, int j) const { return entries[static_cast<std::size_t>(i * order + j)]; }
  std::vector<Scalar> row(int i) const;
};

SkewCirculant build_skew_circulant(const std::vector<Scalar>& gamma_block);
bool check_skew_structure(const SkewCirculant& m);

struct GammaOptions {
  double det_rel_tol = 1e-10;  // |det| > tol * |gamma_n|_2^{p_n}
  bool allow_singular = false;  // fixtures with det M = 0
};

struct GammaConfig {
  std::vector<Scalar> gamma;  // gamma[m - 1]
  ScalarField field = ScalarField::Real;
  std::vector<Scalar> dets;   // per family
  double tail_mass = 0;       // sum of |gamma_m| past the truncation
  double mass = 0;            // sum of |gamma_m| kept
  bool singular = false;

  Scalar at(int m) const { return gamma[static_cast<std::size_t>(m - 1)]; }
};

GammaConfig make_gamma_config(std::vector<Scalar> gamma, const BlockIndex& index, ScalarField field,
                              const GammaOptions& opt = {}, double tail_mass = 0);

// gamma restricted to A_n
std::vector<Scalar> gamma_block(const GammaConfig& g, const BlockIndex& index, int n);
SkewCirculant family_matrix(const GammaConfig& g, const BlockIndex& index, int n);

// v_i^n, 0 <= i < 2 p_n
std::vector<Scalar> v_vector(const GammaConfig& g, const BlockIndex& index, int n, int i);
// sum_{k=1}^{count} v^n_{[k mod 2 p_n]}
std::vector<Scalar> telescoping_sum(const GammaConfig& g, const BlockIndex& index, int n, int count);

// gamma_m = 2^-m, then seeded perturbations until every det M_n is clear of
// zero.
GammaConfig default_gamma_search(const CompatibleSequence& seq, ScalarField field, std::uint64_t seed = 0,
                                 int max_tries = 256);

// Delta(f) = sum_n sum_{m in A_n} gamma_m f(m, 1_n). `base` holds 1_n as a
// point of Z_n (block = sub-block of Z_n); nsub is the block count of Z_n.
shiftop::Functional block_delta(const GammaConfig& g, const BlockIndex& index,
                                const std::vector<funcspace::BlockPoint>& base, int nsub = 1);

// point (m, z) of the sum, z a point of Z_{pi(m)}
funcspace::BlockPoint lift_point(int m, const funcspace::BlockPoint& z, int nsub = 1);

}  // namespace shiftlab::blockmethod
