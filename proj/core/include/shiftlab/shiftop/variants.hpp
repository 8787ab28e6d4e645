#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shiftlab/shiftop/shift.hpp"

namespace shiftlab::shiftop {

// frac(sqrt(prime_k)), k = 0, 1, ...: sqrt 2 - 1, sqrt 3 - 1, sqrt 5 - 2, ...
std::vector<double> default_phases(int count, int first = 0);

// e^{i pi / 2^{n-1}}
Scalar zeta(int n);
// (k (k - 1) mod 4) / 2
int tau(int k);

struct BlockMethodOptions {
  std::vector<int> p{2, 4};
  bool all = false;  // p is the start of an infinite sequence
  bool allow_integer_multiple = false;
  std::optional<std::vector<Scalar>> gamma;
  bool allow_singular = false;
  std::uint64_t gamma_seed = 0;
  ScalarField field = ScalarField::Real;
  int degree = 8;
  int torus_dim = 1;
  // Z_n = Z/2 x circle with h(a, x) = (a + 1, r x)
  bool parity = false;
  std::vector<std::vector<double>> phases;  // per family; empty: defaults
  int sequence_len = 256;
};

ShiftOperator build_block_method(const BlockMethodOptions& opt = {});

enum class CompositionFlow { Shift, Cantor };

struct CompositionOptions {
  Scalar d1 = 0.25, d2 = 0.25;
  int period = 2;
  int depth = 10;     // cylinder window of Y
  int alphabet = 2;
  CompositionFlow flow = CompositionFlow::Shift;
  // bilateral shift seed; -1: the cylinder depth
  int seed_depth = -1;
  int max_power = 4;
  std::int64_t schedule_budget = 2'000'000;
  // cantor flow
  std::vector<int> L0, M0;
  ScalarField field = ScalarField::Real;
  int sequence_len = 256;
};

// throws ValidationError on a guard breach
void check_composition_guards(Scalar d1, Scalar d2, int period);

ShiftOperator build_composition(const CompositionOptions& opt = {});

struct CantorOptions {
  int p = 2;
  int depth = 8;
  std::vector<int> L0{1, 1};  // 3
  std::vector<int> M0{1, 0, 1};  // 5
  Scalar d1 = 0.25, d2 = 0.25;
  int seed_depth = -1;
  std::int64_t schedule_budget = 2'000'000;
  ScalarField field = ScalarField::Real;
  int sequence_len = 256;
};

ShiftOperator build_cantor_toallas(const CantorOptions& opt = {});

struct GoldenOptions {
  std::string variant = "PLAIN";  // PLAIN, PRODUCT, TWO_COPIES
  int degree = 16;                // arc circle
  int torus_degree = 4;           // extra torus factors
  int kappa = 1;
  std::vector<double> rho;        // turns; empty: defaults
  std::vector<double> v;          // evaluation point; empty: zeros
  double step = 1.0;              // rotation of the arc circle in radians
  double arc_ratio = kPhi;
  ScalarField field = ScalarField::Real;
  int sequence_len = 256;
};

ShiftOperator build_golden_arc(const GoldenOptions& opt = {});

struct ComplexOptions {
  int n = 2;
  std::vector<int> kappa;                  // torus dimension per block; default 1
  std::vector<Scalar> z;                   // default 2^-i
  std::vector<std::vector<double>> v;      // evaluation points; default 0
  std::vector<std::vector<double>> phases; // default sqrt primes
  int degree = 8;
  ScalarField field = ScalarField::Complex;
  int sequence_len = 256;
};

ShiftOperator build_complex_family(const ComplexOptions& opt = {});

}  // namespace shiftlab::shiftop
