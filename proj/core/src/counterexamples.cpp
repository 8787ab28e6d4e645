#include "shiftlab/verify/counterexamples.hpp"

#include <cmath>

#include "shiftlab/shiftop/variants.hpp"

namespace shiftlab::verify {

using dynamics::make_assembled;
using dynamics::make_rotation_flow;
using funcspace::BlockDescriptor;
using funcspace::BlockFunction;
using funcspace::BlockSpace;
using funcspace::SeqPoint;
using shiftop::ShiftOperator;

std::string to_string(Fixture f) {
  switch (f) {
    case Fixture::Nde: return "NDE";
    case Fixture::Torero: return "TORERO";
    case Fixture::Notransi: return "NOTRANSI";
    case Fixture::OddMultiple: return "ODD_MULTIPLE";
  }
  return "?";
}

std::vector<Fixture> all_fixtures() { return {Fixture::Nde, Fixture::Torero, Fixture::Notransi, Fixture::OddMultiple}; }

Fixture fixture_from_string(const std::string& name) {
  for (auto f : all_fixtures())
    if (to_string(f) == name) return f;
  throw ValidationError("unknown counterexample '" + name + "'");
}

namespace {

ShiftOperator build_nde(const CounterexampleOptions& opt) {
  BlockSpace space;
  space.blocks.push_back(BlockDescriptor{1, 1, 4, std::nullopt, "X1"});
  ShiftOperator T;
  T.construction = shiftop::Construction::Counterexample;
  T.recipe = "nde";
  T.space = funcspace::make_space(std::move(space));
  T.phi = make_assembled({make_rotation_flow({std::sqrt(2.0) - 1.0})}, {0});
  T.a.block = {1.0};
  T.a.limits = {1.0};
  if (opt.nde_sequence_only)
    T.delta = shiftop::point_combo({SeqPoint{2}}, {0.5}, "nde");
  else
    T.delta = shiftop::point_combo({funcspace::circle_point(1, {0.0}), SeqPoint{3}}, {0.5, 0.25}, "nde");
  T.validate();
  return T;
}

ShiftOperator build_torero(const CounterexampleOptions& opt) {
  const int n = static_cast<int>(opt.torero_a.size());
  if (n < 3) throw ValidationError("the pigeonhole needs at least three blocks");
  BlockSpace space;
  std::vector<dynamics::HomeoPtr> comps;
  std::vector<funcspace::PointRef> pts;
  std::vector<Scalar> w;
  for (int i = 1; i <= n; ++i) {
    const double a = opt.torero_a[static_cast<std::size_t>(i - 1)];
    if (a != 1.0 && a != -1.0) throw ValidationError("real unimodular weights are +1 or -1");
    space.blocks.push_back(BlockDescriptor{i, i, 2, std::nullopt, "X" + std::to_string(i)});
    comps.push_back(make_rotation_flow(shiftop::default_phases(i, i)));
    pts.push_back(funcspace::circle_point(i, std::vector<double>(static_cast<std::size_t>(i), 0.0)));
    w.push_back(std::ldexp(1.0, -2) * 3.0 / n);
  }
  pts.push_back(SeqPoint{2});
  w.push_back(0.125);
  ShiftOperator T;
  T.construction = shiftop::Construction::Counterexample;
  T.recipe = "torero";
  T.space = funcspace::make_space(std::move(space));
  T.phi = make_assembled(comps, {0});
  T.a.block.assign(opt.torero_a.begin(), opt.torero_a.end());
  T.a.limits = {1.0};
  T.delta = shiftop::point_combo(pts, w, "torero");
  T.validate();
  return T;
}

ShiftOperator build_notransi() {
  shiftop::BlockMethodOptions o;
  o.p = {2};
  o.parity = true;
  auto T = shiftop::build_block_method(o);
  T.construction = shiftop::Construction::Counterexample;
  T.recipe = "notransi";
  return T;
}

ShiftOperator build_odd_multiple() {
  shiftop::BlockMethodOptions o;
  o.p = {3, 9};
  o.allow_integer_multiple = true;
  std::vector<Scalar> g(12, 0.0);
  g[0] = 0.5;
  g[3] = 0.5;
  o.gamma = g;
  auto T = shiftop::build_block_method(o);
  T.construction = shiftop::Construction::Counterexample;
  T.recipe = "odd_multiple";
  return T;
}

double sup(const BlockFunction& f) { return shiftop::distance(f, funcspace::zero_function(f.space)); }

}  // namespace

ShiftOperator build_fixture(Fixture which, const CounterexampleOptions& opt) {
  switch (which) {
    case Fixture::Nde: return build_nde(opt);
    case Fixture::Torero: return build_torero(opt);
    case Fixture::Notransi: return build_notransi();
    case Fixture::OddMultiple: return build_odd_multiple();
  }
  throw ValidationError("unknown fixture");
}

CounterexampleReport run_counterexample(Fixture which, const CounterexampleOptions& opt) {
  const auto T = build_fixture(which, opt);
  CounterexampleReport rep;
  rep.which = which;
  rep.tolerance = opt.tolerance;
  BlockFunction f0;
  BlockFunction target;  // what T^q f0 should be
  int q = 1;
  switch (which) {
    case Fixture::Nde: {
      if (opt.nde_sequence_only) {
        f0 = funcspace::block_indicator(T.space, 1);
        rep.notes.push_back("Delta = f(2) / 2, f0 = indicator of X1");
      } else {
        // Delta(g xi_1 + sequence) = g / 2 + 1 / 4 must equal 1
        const double g = 1.5;
        f0 = funcspace::combine(g, funcspace::block_indicator(T.space, 1), 1.0,
                                funcspace::sequence_indicator(T.space));
        rep.metrics["gamma"] = g;
      }
      target = f0;
      break;
    }
    case Fixture::Torero: {
      const int n = T.space->block_count();
      // two of the first three weights agree
      for (int i = 1; i <= 3 && !rep.pair_i; ++i)
        for (int j = i + 1; j <= 3; ++j)
          if (T.a.block[static_cast<std::size_t>(i - 1)] == T.a.block[static_cast<std::size_t>(j - 1)]) {
            rep.pair_i = i;
            rep.pair_j = j;
            break;
          }
      if (!rep.pair_i) throw ValidationError("no two weights agree");
      const auto xi = funcspace::block_indicator(T.space, rep.pair_i);
      const auto xj = funcspace::block_indicator(T.space, rep.pair_j);
      const Scalar di = T.delta.evaluate(xi), dj = T.delta.evaluate(xj);
      f0 = funcspace::combine(dj, xi, -di, xj);
      target = funcspace::scale(f0, T.a.block[static_cast<std::size_t>(rep.pair_i - 1)]);
      rep.metrics["d_i"] = std::abs(di);
      rep.metrics["d_j"] = std::abs(dj);
      rep.metrics["blocks"] = n;
      rep.metrics["lambda"] = T.a.block[static_cast<std::size_t>(rep.pair_i - 1)].real();
      break;
    }
    case Fixture::Notransi: {
      const auto& d = *T.block;
      const Scalar g1 = d.gamma.at(1), g2 = d.gamma.at(2);
      // m = 2 and m = 1 on the even sheet
      f0 = funcspace::combine(g1, funcspace::block_indicator(T.space, 3), -g2, funcspace::block_indicator(T.space, 1));
      target = funcspace::scale(f0, -1.0);
      q = 2;
      break;
    }
    case Fixture::OddMultiple: {
      const auto& d = *T.block;
      f0 = funcspace::zero_function(T.space);
      for (int n = 1; n <= d.index.families(); ++n)
        for (int j = 1; j <= d.index.p[static_cast<std::size_t>(n - 1)]; ++j) {
          const double s = ((j % 2) ? 1.0 : -1.0) * (n % 2 ? 1.0 : -1.0);
          f0 = funcspace::combine(1.0, f0, s, funcspace::block_indicator(T.space, d.index.a(n, j)));
        }
      target = funcspace::scale(f0, -1.0);
      break;
    }
  }
  const auto img = shiftop::apply_T_power(T, f0, q);
  rep.residual = shiftop::distance(img, target);
  rep.witness_norm = sup(f0);
  rep.metrics["power"] = q;
  rep.verified = rep.residual <= opt.tolerance && rep.witness_norm > 0.5 * opt.tolerance + 1e-6;
  rep.verdict = rep.verified ? kWitnessVerified : "witness FAILED";
  return rep;
}

}  // namespace shiftlab::verify
