#include "shiftlab/shiftop/variants.hpp"

#include <numeric>

#include "shiftlab/dynamics/homeo.hpp"

namespace shiftlab::shiftop {

using dynamics::BlockShape;
using dynamics::make_assembled;
using dynamics::make_cyclic_block;
using dynamics::make_rotation_flow;
using funcspace::BlockDescriptor;
using funcspace::BlockSpace;
using funcspace::LimitPoint;
using funcspace::SymbolFactor;
using funcspace::SymbolPoint;

std::vector<double> default_phases(int count, int first) {
  std::vector<double> out;
  int seen = 0;
  for (int q = 2; static_cast<int>(out.size()) < count; ++q) {
    if (!dynamics::is_prime(q)) continue;
    if (seen++ < first) continue;
    const double r = std::sqrt(static_cast<double>(q));
    out.push_back(r - std::floor(r));
  }
  return out;
}

Scalar zeta(int n) {
  if (n < 1) throw ValidationError("zeta_n needs n >= 1");
  return std::polar(1.0, std::numbers::pi / std::ldexp(1.0, n - 1));
}

int tau(int k) { return static_cast<int>(floor_mod(static_cast<std::int64_t>(k) * (k - 1), 4)) / 2; }

namespace {

ShiftOperator finish(ShiftOperator T) {
  T.validate();
  return T;
}

WeightFunction unit_weights(int blocks, int limits) {
  WeightFunction a;
  a.block.assign(static_cast<std::size_t>(blocks), 1.0);
  a.limits.assign(static_cast<std::size_t>(limits), 1.0);
  return a;
}

}  // namespace

ShiftOperator build_block_method(const BlockMethodOptions& opt) {
  auto seq = blockmethod::validate_compatible_sequence(opt.p, opt.all, opt.allow_integer_multiple);
  auto index = blockmethod::build_block_index(seq);
  if (opt.torus_dim < 1) throw ValidationError("torus_dim must be >= 1");
  if (opt.degree < 0) throw ValidationError("degree must be >= 0");
  const int F = index.families();
  const int c = opt.torus_dim;

  blockmethod::GammaConfig gamma;
  if (opt.gamma) {
    const double tail = 0;
    blockmethod::GammaOptions go;
    go.allow_singular = opt.allow_singular;
    gamma = blockmethod::make_gamma_config(*opt.gamma, index, opt.field, go, tail);
  } else {
    gamma = blockmethod::default_gamma_search(seq, opt.field, opt.gamma_seed);
  }

  BlockMethodData data;
  data.nsub = opt.parity ? 2 : 1;
  std::vector<HomeoPtr> comps;
  for (int n = 1; n <= F; ++n) {
    std::vector<double> ph;
    if (static_cast<int>(opt.phases.size()) >= n) {
      ph = opt.phases[n - 1];
      if (static_cast<int>(ph.size()) != c)
        throw ValidationError("family " + std::to_string(n) + " needs " + std::to_string(c) + " phases");
    } else {
      ph = default_phases(c, (n - 1) * c);
    }
    HomeoPtr h = make_rotation_flow(ph);
    if (opt.parity) h = make_cyclic_block({2, 1}, h);
    data.h.push_back(h);
    data.base.push_back(funcspace::BlockPoint{1, std::vector<double>(static_cast<std::size_t>(c), 0.0), std::nullopt});
    comps.push_back(make_cyclic_block(index.s_table(n), dynamics::inverse(h)));
  }

  BlockSpace space;
  space.field = opt.field;
  space.sequence_len = opt.sequence_len;
  const int nblocks = index.total() * data.nsub;
  for (int b = 1; b <= nblocks; ++b) {
    BlockDescriptor d;
    d.id = b;
    d.circles = c;
    d.degree = opt.degree;
    const int m = (b - 1) / data.nsub + 1;
    d.label = "A" + std::to_string(index.pi(m)) + "[" + std::to_string(index.position(m)) + "]" +
              (opt.parity ? "/" + std::to_string((b - 1) % 2) : "");
    space.blocks.push_back(d);
  }

  ShiftOperator T;
  T.construction = Construction::BlockMethod;
  T.recipe = "block_method";
  T.field = opt.field;
  T.space = funcspace::make_space(std::move(space));
  T.phi = make_assembled(comps, {0});
  T.a = unit_weights(nblocks, 1);
  for (int n = 1; n <= F; ++n)
    for (int sub = 1; sub <= data.nsub; ++sub) T.a.block[(index.a(n, 1) - 1) * data.nsub + sub - 1] = -1.0;
  T.delta = blockmethod::block_delta(gamma, index, data.base, data.nsub);
  data.seq = std::move(seq);
  data.index = std::move(index);
  data.gamma = std::move(gamma);
  T.block = std::move(data);
  return finish(std::move(T));
}

void check_composition_guards(Scalar d1, Scalar d2, int period) {
  if (period < 1) throw ValidationError("period N must be >= 1");
  if (d1 == Scalar{0} || d2 == Scalar{0}) throw ValidationError("delta_1 and delta_2 must both be nonzero");
  if (std::abs(d1) + std::abs(d2) > 1.0 + 1e-12) throw ValidationError("|delta_1| + |delta_2| exceeds 1");
  if (std::abs(std::pow(d1 + d2, period) - 1.0) <= 1e-12)
    throw ValidationError("(delta_1 + delta_2)^N = 1");
}

namespace {

ShiftOperator assemble_composition(const HomeoPtr& chi, const funcspace::BlockPoint& one,
                                   const funcspace::BlockPoint& zero, int period, int alphabet, int depth,
                                   Scalar d1, Scalar d2, ScalarField field, int sequence_len, bool plain_shift,
                                   std::int64_t span, int seed_depth, Construction construction,
                                   const std::string& recipe) {
  check_composition_guards(d1, d2, period);
  if (field == ScalarField::Real && (d1.imag() != 0 || d2.imag() != 0))
    throw ValidationError("complex delta over the real field");
  BlockSpace space;
  space.field = field;
  space.sequence_len = sequence_len;
  BlockDescriptor y;
  y.id = 1;
  y.symbol = SymbolFactor{alphabet, depth};
  y.label = "Y";
  space.blocks.push_back(y);
  space.limits.clear();
  std::vector<int> limit_map;
  funcspace::BlockPoint z = zero;
  for (int k = 0; k < period; ++k) {
    space.limits.push_back(LimitPoint{z});
    z = chi->forward(z);
    limit_map.push_back(static_cast<int>(floor_mod(k - 1, period)));
  }
  if (!funcspace::same_point(z, zero)) throw ValidationError("0_Y does not have period N under the flow");

  ShiftOperator T;
  T.construction = construction;
  T.recipe = recipe;
  T.field = field;
  T.space = funcspace::make_space(std::move(space));
  T.phi = make_assembled({dynamics::inverse(chi)}, limit_map);
  T.a = unit_weights(1, period);
  funcspace::BlockPoint far = one;
  for (int i = 0; i < period; ++i) far = chi->forward(far);
  T.delta = composition_pair(one, far, d1, d2, period);
  CompositionData data;
  data.chi = chi;
  data.one = one;
  data.zero = zero;
  data.d1 = d1;
  data.d2 = d2;
  data.period = period;
  data.plain_shift = plain_shift;
  data.span = span;
  data.seed_depth = seed_depth;
  T.composition = std::move(data);
  return finish(std::move(T));
}

std::vector<int> pad_digits(std::vector<int> d, int depth) {
  if (static_cast<int>(d.size()) > depth) throw ValidationError("digit string longer than the depth");
  d.resize(static_cast<std::size_t>(depth), 0);
  return d;
}

}  // namespace

ShiftOperator build_composition(const CompositionOptions& opt) {
  check_composition_guards(opt.d1, opt.d2, opt.period);
  if (opt.alphabet < 2) throw ValidationError("Y needs an alphabet of at least 2 letters");
  if (opt.flow == CompositionFlow::Cantor) {
    CantorOptions c;
    c.p = opt.alphabet;
    c.depth = opt.depth;
    if (!opt.L0.empty()) c.L0 = opt.L0;
    if (!opt.M0.empty()) c.M0 = opt.M0;
    c.d1 = opt.d1;
    c.d2 = opt.d2;
    c.seed_depth = opt.seed_depth;
    c.schedule_budget = opt.schedule_budget;
    c.field = opt.field;
    c.sequence_len = opt.sequence_len;
    if (opt.period != 1) throw ValidationError("the cantor flow variant glues one limit point (N = 1)");
    return build_cantor_toallas(c);
  }
  const int sd = opt.seed_depth > 0 ? opt.seed_depth : opt.depth;
  auto bs = dynamics::make_bilateral_shift(opt.alphabet, opt.schedule_budget, sd, opt.max_power);
  // a point of exact period N: N = 1 the constant word, else 0..01 repeated
  SymbolPoint zero = SymbolPoint::constant(0);
  if (opt.period > 1) {
    std::vector<int> pat(static_cast<std::size_t>(opt.period), 0);
    pat.back() = 1;
    zero = SymbolPoint::periodic(pat);
  }
  return assemble_composition(bs.flow, bs.seed.base, funcspace::BlockPoint{1, {}, zero}, opt.period, opt.alphabet,
                              opt.depth, opt.d1, opt.d2, opt.field, opt.sequence_len, true, bs.span + sd + 1,
                              sd, Construction::Composition, "composition_shift");
}

ShiftOperator build_cantor_toallas(const CantorOptions& opt) {
  auto L0 = pad_digits(opt.L0, opt.depth);
  auto M0 = pad_digits(opt.M0, opt.depth);
  const int sd = opt.seed_depth > 0 ? opt.seed_depth : opt.depth;
  auto cf = dynamics::make_cantor_flow(opt.p, opt.depth, L0, M0, sd, opt.schedule_budget);
  return assemble_composition(cf.flow, cf.seed.base, funcspace::BlockPoint{1, {}, cf.fixed}, 1, opt.p, opt.depth,
                              opt.d1, opt.d2, opt.field, opt.sequence_len, false, cf.seed.budget, sd,
                              Construction::CantorToallas,
                              "cantor_composition");
}

ShiftOperator build_golden_arc(const GoldenOptions& opt) {
  if (opt.degree < 1) throw ValidationError("arc circle degree must be >= 1");
  if (!(opt.arc_ratio > 0) || opt.arc_ratio > 1) throw ValidationError("arc ratio must lie in (0, 1]");
  const double turn = opt.step / kTwoPi;
  const double len = kTwoPi * opt.arc_ratio;
  GoldenData gd;
  gd.variant = opt.variant;
  gd.step = opt.step;
  gd.arc_ratio = opt.arc_ratio;

  BlockSpace space;
  space.field = opt.field;
  space.sequence_len = opt.sequence_len;
  ShiftOperator T;
  T.construction = Construction::GoldenArcModel;
  T.field = opt.field;

  auto torus = [&](int first) {
    if (opt.kappa < 1) throw ValidationError("kappa must be >= 1");
    gd.kappa = opt.kappa;
    gd.rho = opt.rho.empty() ? default_phases(opt.kappa, first) : opt.rho;
    gd.v = opt.v.empty() ? std::vector<double>(static_cast<std::size_t>(opt.kappa), 0.0) : opt.v;
    if (static_cast<int>(gd.rho.size()) != opt.kappa || static_cast<int>(gd.v.size()) != opt.kappa)
      throw ValidationError("rho and v need kappa entries");
  };

  if (opt.variant == "PLAIN") {
    space.blocks.push_back(BlockDescriptor{1, 1, opt.degree, std::nullopt, "M"});
    T.recipe = "golden_arc";
    T.phi = make_assembled({make_rotation_flow({turn})}, {0});
    T.a = unit_weights(1, 1);
    T.a.block[0] = -1.0;
    T.delta = golden_arc(1, 0.0, len);
  } else if (opt.variant == "PRODUCT") {
    torus(0);
    space.blocks.push_back(BlockDescriptor{1, 1 + opt.kappa, opt.torus_degree, std::nullopt, "M x T^k"});
    std::vector<double> turns{turn};
    turns.insert(turns.end(), gd.rho.begin(), gd.rho.end());
    T.recipe = "golden_arc_product";
    T.phi = make_assembled({make_rotation_flow(turns)}, {0});
    T.a = unit_weights(1, 1);
    T.a.block[0] = -1.0;
    std::vector<double> ev{0.0};
    ev.insert(ev.end(), gd.v.begin(), gd.v.end());
    T.delta = product_with_evaluation(golden_arc(1, 0.0, len), ev);
  } else if (opt.variant == "TWO_COPIES") {
    torus(0);
    space.blocks.push_back(BlockDescriptor{1, 1, opt.degree, std::nullopt, "M x {0}"});
    space.blocks.push_back(BlockDescriptor{2, 1, opt.degree, std::nullopt, "M x {1}"});
    space.blocks.push_back(BlockDescriptor{3, opt.kappa, opt.torus_degree, std::nullopt, "T^k"});
    T.recipe = "golden_arc_two_copies";
    auto swap = make_cyclic_block({2, 1}, make_rotation_flow({turn}));
    T.phi = make_assembled({swap, make_rotation_flow(gd.rho)}, {0});
    T.a = unit_weights(3, 1);
    T.a.block[0] = -1.0;
    T.a.block[2] = -1.0;
    auto ev = point_combo({funcspace::circle_point(3, gd.v)}, {1.0}, "evaluation");
    T.delta = composite({golden_arc(1, 0.0, len), golden_arc(2, 0.0, len), ev}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  } else {
    throw ValidationError("unknown golden arc variant '" + opt.variant + "'");
  }
  T.space = funcspace::make_space(std::move(space));
  T.golden = std::move(gd);
  return finish(std::move(T));
}

ShiftOperator build_complex_family(const ComplexOptions& opt) {
  if (opt.field != ScalarField::Complex) throw ValidationError("the complex family needs the complex field");
  if (opt.n < 1) throw ValidationError("n must be >= 1");
  ComplexData cd;
  cd.n = opt.n;
  cd.kappa = opt.kappa.empty() ? std::vector<int>(static_cast<std::size_t>(opt.n), 1) : opt.kappa;
  if (static_cast<int>(cd.kappa.size()) != opt.n) throw ValidationError("kappa needs n entries");
  cd.z = opt.z;
  if (cd.z.empty())
    for (int i = 1; i <= opt.n; ++i) cd.z.push_back(std::ldexp(1.0, -i));
  if (static_cast<int>(cd.z.size()) != opt.n) throw ValidationError("z needs n entries");
  for (int i = 1; i <= opt.n; ++i) {
    const auto zi = cd.z[i - 1];
    if (zi == Scalar{0}) throw ValidationError("z_" + std::to_string(i) + " must be nonzero");
    if (std::abs(zi) > std::ldexp(1.0, -i) + 1e-15)
      throw ValidationError("|z_" + std::to_string(i) + "| exceeds 2^-" + std::to_string(i));
    cd.zeta.push_back(zeta(i));
  }

  BlockSpace space;
  space.field = opt.field;
  space.sequence_len = opt.sequence_len;
  std::vector<HomeoPtr> comps;
  std::vector<funcspace::PointRef> pts;
  int first_phase = 0;
  for (int i = 1; i <= opt.n; ++i) {
    const int k = cd.kappa[i - 1];
    if (k < 0) throw ValidationError("kappa must be >= 0");
    space.blocks.push_back(BlockDescriptor{i, k, opt.degree, std::nullopt, "T^" + std::to_string(k)});
    if (k == 0) {
      comps.push_back(dynamics::make_identity({BlockShape{0, 0}}));
    } else {
      std::vector<double> ph;
      if (static_cast<int>(opt.phases.size()) >= i) {
        ph = opt.phases[i - 1];
      } else {
        ph = default_phases(k, first_phase);
      }
      if (static_cast<int>(ph.size()) != k) throw ValidationError("phases for block " + std::to_string(i));
      first_phase += k;
      comps.push_back(make_rotation_flow(ph));
    }
    std::vector<double> vi = static_cast<int>(opt.v.size()) >= i ? opt.v[i - 1]
                                                                 : std::vector<double>(static_cast<std::size_t>(k), 0.0);
    if (static_cast<int>(vi.size()) != k) throw ValidationError("v_" + std::to_string(i) + " needs kappa_i angles");
    cd.v.push_back(funcspace::BlockPoint{i, vi, std::nullopt});
    pts.emplace_back(cd.v.back());
  }

  ShiftOperator T;
  T.construction = Construction::ComplexFamily;
  T.recipe = "complex_family";
  T.field = opt.field;
  T.space = funcspace::make_space(std::move(space));
  T.phi = make_assembled(comps, {0});
  T.a = unit_weights(opt.n, 1);
  for (int i = 0; i < opt.n; ++i) T.a.block[i] = cd.zeta[i];
  T.delta = point_combo(std::move(pts), cd.z, "complex_points");
  T.complex = std::move(cd);
  return finish(std::move(T));
}

}  // namespace shiftlab::shiftop
