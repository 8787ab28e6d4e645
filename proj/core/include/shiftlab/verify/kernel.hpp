#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "shiftlab/funcspace/function.hpp"
#include "shiftlab/shiftop/shift.hpp"

namespace shiftlab::verify {

using funcspace::BlockFunction;
using funcspace::PointRef;

enum class Verdict { TrivialKernel, Nontrivial, Inconclusive };

std::string to_string(Verdict v);

// sum_i terms[i].second * f(terms[i].first) = 0
struct ConstraintRow {
  std::string tag;
  // smallest n such that the row holds for every T^n g; -1: only for
  // functions in every range T^n(C(X))
  int valid_from = -1;
  std::vector<std::pair<PointRef, Scalar>> terms;
};

// Unknowns: the default-window coefficients of every block, f(1..K) and the
// limit values.
struct ConstraintSystem {
  funcspace::SpacePtr space;
  funcspace::CoefficientLayout layout;
  int seq_vars = 0;
  std::vector<ConstraintRow> rows;

  std::size_t dim() const;
  funcspace::SparseRow row_vector(const ConstraintRow& r) const;
  Scalar residual(const ConstraintRow& r, const BlockFunction& f) const;
  std::map<std::string, int> tag_counts() const;
};

ConstraintSystem make_system(const funcspace::SpacePtr& space, int seq_vars);

struct RankOptions {
  double gap = 1e-6;       // TRIVIAL_KERNEL needs sigma_min / sigma_max >= gap
  double null_tol = 1e-10;  // singular values below null_tol * sigma_max count as zero
  int max_kernel_vectors = 4;
};

struct DecayReport {
  Verdict verdict = Verdict::Inconclusive;
  std::size_t rows = 0, dim = 0;
  std::size_t kernel_dim = 0;  // numerically zero singular values (incl. missing rank)
  double sigma_max = 0, sigma_min = 0, ratio = 0;
  double gap = 0;
  std::vector<double> spectrum;  // nonincreasing
  std::vector<std::vector<Scalar>> kernel;
  std::map<std::string, double> metrics;
  std::map<std::string, int> row_tags;
  std::vector<std::string> notes;
};

DecayReport certify_kernel(const ConstraintSystem& sys, const RankOptions& opt = {});
// dense row-major matrix
DecayReport certify_dense(std::size_t rows, std::size_t cols, const std::vector<Scalar>& a,
                          const RankOptions& opt = {});

// ---- block method -------------------------------------------------------

struct SusoOptions {
  int window = -1;        // k and n range; -1: 4 * max 2 p_n
  int orbit_samples = -1;  // N = 1..W; -1: 2 (2M + 1)^c + 8
  bool include_derived = true;
  RankOptions rank;
};

ConstraintSystem suso_constraint_system(const shiftop::ShiftOperator& T, const SusoOptions& opt = {});
DecayReport suso_constraint_kernel(const shiftop::ShiftOperator& T, const SusoOptions& opt = {});

struct BlockRecursionReport {
  double max_residual = 0;
  int k_max = 0;
  int trials = 0;
  std::vector<int> N_values;
};

// sum_m gamma_m (T^-k f)(m, h^{N-k}(1_n)) against v^n_[k mod 2p_n] . f_N^n
BlockRecursionReport block_recursion_check(const shiftop::ShiftOperator& T, int trials, std::uint64_t seed = 7,
                                   int k_max = -1, std::vector<int> N_values = {1, 2, 3});

// ---- composition ---------------------------------------------------------

struct CompositionKernelOptions {
  int window = 16;       // finite sequence rows f(1..window)
  int view_depth = -1;   // representative points carry this many letters; -1: depth + 24
  std::int64_t orbit_budget = -1;  // -1: the seed's schedule span
  int periodic_words = 4;  // periods q N with q <= this, plain shifts only
  RankOptions rank;
};

ConstraintSystem composition_constraint_system(const shiftop::ShiftOperator& T,
                                               const CompositionKernelOptions& opt = {});
DecayReport composition_kernel_check(const shiftop::ShiftOperator& T, const CompositionKernelOptions& opt = {});

// ---- golden arc ----------------------------------------------------------

DecayReport golden_arc_kernel(int degree, double phi = kPhi, const RankOptions& opt = {});

struct FibonacciReport {
  double phi_identity = 0;       // |Phi + Phi^2 - 1|
  double additivity_residual = 0;  // max over k, alpha, trials
  double base_case_residual = 0;   // per-mode n = 2 identity
  double hypothesis_residual = 0;  // sup_alpha |arc(alpha, 2 pi Phi)|
  double claim_residual = 0;       // max_n sup_alpha |arc(alpha, 2 pi Phi^n) - (-1)^n F(n-1) int f|
  bool hypothesis_holds = false;
  bool implication_holds = false;  // hypothesis => claim
  std::vector<std::int64_t> fibonacci;  // F(0..n_max)
  int n_max = 0;
  int trials = 0;
};

std::int64_t fibonacci(int n);  // F(0) = 0, F(1) = F(2) = 1

// arc identities on one circle part (degree taken from the part)
FibonacciReport fibonacci_recursion_check(const std::vector<funcspace::BlockPart>& polys, int n_max,
                                          std::uint64_t seed = 11, int alphas = 16, double tol = 1e-9);
// random real trig polynomials of the given degree
std::vector<funcspace::BlockPart> random_trig_polys(int count, int degree, std::uint64_t seed);

}  // namespace shiftlab::verify
