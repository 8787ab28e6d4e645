#pragma once

#include <map>
#include <string>
#include <vector>

#include "shiftlab/shiftop/shift.hpp"

namespace shiftlab::verify {

// Operators of the T[a, phi, Delta] form that fail to be shifts, each with a
// nonzero f0 in every range T^n(C(X)).
enum class Fixture { Nde, Torero, Notransi, OddMultiple };

std::string to_string(Fixture f);
Fixture fixture_from_string(const std::string& name);
std::vector<Fixture> all_fixtures();

struct CounterexampleOptions {
  // NDE: Delta = f(2) / 2 instead of f(x1) / 2 + f(3) / 4
  bool nde_sequence_only = false;
  // TORERO: one weight per block, at least three blocks
  std::vector<double> torero_a{1.0, -1.0, 1.0};
  double tolerance = 1e-12;
};

struct CounterexampleReport {
  Fixture which = Fixture::Nde;
  std::string verdict;
  double residual = 0;   // |T^q f0 - lambda f0| for the fixture's law
  double tolerance = 0;
  double witness_norm = 0;
  bool verified = false;
  int pair_i = 0, pair_j = 0;  // TORERO pigeonhole pair
  std::map<std::string, double> metrics;
  std::vector<std::string> notes;
};

shiftop::ShiftOperator build_fixture(Fixture which, const CounterexampleOptions& opt = {});
CounterexampleReport run_counterexample(Fixture which, const CounterexampleOptions& opt = {});

inline constexpr const char* kWitnessVerified = "NOT_A_SHIFT witness verified";

}  // namespace shiftlab::verify
