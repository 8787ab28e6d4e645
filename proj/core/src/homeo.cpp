#include "shiftlab/dynamics/homeo.hpp"

#include <numeric>

namespace shiftlab::dynamics {

using funcspace::centered_depth_covering;
using funcspace::centered_lo;
using funcspace::embed_window;
using funcspace::ipow;
using funcspace::position_digit;

namespace {

bool all_zero(const std::vector<int>& v) {
  return std::all_of(v.begin(), v.end(), [](int x) { return x == 0; });
}

void push_step(std::vector<FiberMap>& out, const FiberMap& s) {
  if (s.kind == FiberMap::Kind::Chain) {
    for (const auto& t : s.steps) push_step(out, t);
    return;
  }
  if (s.is_identity()) return;
  if (!out.empty()) {
    auto& last = out.back();
    if (last.kind == FiberMap::Kind::Rotation && s.kind == FiberMap::Kind::Rotation &&
        last.turns.size() == s.turns.size()) {
      for (std::size_t j = 0; j < s.turns.size(); ++j) last.turns[j] += s.turns[j];
      if (last.is_identity()) out.pop_back();
      return;
    }
    if (last.kind == FiberMap::Kind::Shift && s.kind == FiberMap::Kind::Shift) {
      last.power += s.power;
      if (last.power == 0) out.pop_back();
      return;
    }
    if (last.kind == FiberMap::Kind::Translate && s.kind == FiberMap::Kind::Translate &&
        last.base == s.base && last.add == s.sub && last.sub == s.add) {
      out.pop_back();
      return;
    }
  }
  out.push_back(s);
}

std::vector<int> invert_permutation(const std::vector<int>& t) {
  std::vector<int> inv(t.size(), 0);
  for (std::size_t b = 0; b < t.size(); ++b) {
    const int y = t[b];
    if (y < 1 || y > static_cast<int>(t.size()) || inv[y - 1] != 0)
      throw StructuralError("block table is not a permutation");
    inv[y - 1] = static_cast<int>(b) + 1;
  }
  return inv;
}

std::vector<int> invert_limits(const std::vector<int>& m) {
  std::vector<int> inv(m.size(), -1);
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (m[k] < 0 || m[k] >= static_cast<int>(m.size()) || inv[m[k]] != -1)
      throw StructuralError("limit map is not a permutation");
    inv[m[k]] = static_cast<int>(k);
  }
  return inv;
}

}  // namespace

FiberMap FiberMap::rotation(std::vector<double> turns) {
  FiberMap f;
  f.kind = Kind::Rotation;
  f.turns = std::move(turns);
  return f;
}

FiberMap FiberMap::shift(std::int64_t power) {
  FiberMap f;
  f.kind = Kind::Shift;
  f.power = power;
  return f;
}

FiberMap FiberMap::translate(int p, std::vector<int> add, std::vector<int> sub) {
  FiberMap f;
  f.kind = Kind::Translate;
  f.base = p;
  f.add = std::move(add);
  f.sub = std::move(sub);
  return f;
}

FiberMap FiberMap::then(const FiberMap& a, const FiberMap& b) {
  std::vector<FiberMap> steps;
  push_step(steps, a);
  push_step(steps, b);
  if (steps.empty()) return identity();
  if (steps.size() == 1) return steps.front();
  FiberMap f;
  f.kind = Kind::Chain;
  f.steps = std::move(steps);
  return f;
}

bool FiberMap::is_identity() const {
  switch (kind) {
    case Kind::Identity: return true;
    case Kind::Rotation:
      return std::all_of(turns.begin(), turns.end(), [](double t) { return t == 0.0; });
    case Kind::Shift: return power == 0;
    case Kind::Translate: return add == sub || (all_zero(add) && all_zero(sub));
    case Kind::Chain:
      return std::all_of(steps.begin(), steps.end(), [](const FiberMap& s) { return s.is_identity(); });
  }
  return false;
}

bool FiberMap::isometric() const {
  switch (kind) {
    case Kind::Identity:
    case Kind::Rotation:
    case Kind::Translate: return true;
    case Kind::Shift: return power == 0;
    case Kind::Chain:
      return std::all_of(steps.begin(), steps.end(), [](const FiberMap& s) { return s.isometric(); });
  }
  return false;
}

void FiberMap::forward(BlockPoint& x) const {
  switch (kind) {
    case Kind::Identity: return;
    case Kind::Rotation:
      if (x.angles.size() != turns.size()) throw StructuralError("rotation arity does not match the point");
      for (std::size_t j = 0; j < turns.size(); ++j) x.angles[j] = wrap_angle(x.angles[j] + kTwoPi * turns[j]);
      return;
    case Kind::Shift:
      if (!x.symbol) throw StructuralError("symbol shift applied to a point without symbol coordinate");
      x.symbol = x.symbol->shifted(power);
      return;
    case Kind::Translate:
      if (!x.symbol) throw StructuralError("digit translation applied to a point without symbol coordinate");
      x.symbol = funcspace::translate_point(*x.symbol, base, add, sub);
      return;
    case Kind::Chain:
      for (const auto& s : steps) s.forward(x);
      return;
  }
}

void FiberMap::backward(BlockPoint& x) const { inverse().forward(x); }

FiberMap FiberMap::inverse() const {
  switch (kind) {
    case Kind::Identity: return *this;
    case Kind::Rotation: {
      auto t = turns;
      for (auto& v : t) v = -v;
      return rotation(std::move(t));
    }
    case Kind::Shift: return shift(-power);
    case Kind::Translate: return translate(base, sub, add);
    case Kind::Chain: {
      FiberMap f;
      f.kind = Kind::Chain;
      for (auto it = steps.rbegin(); it != steps.rend(); ++it) f.steps.push_back(it->inverse());
      return f;
    }
  }
  return *this;
}

BlockPart FiberMap::pullback(const BlockPart& f) const {
  switch (kind) {
    case Kind::Identity: return f;
    case Kind::Rotation: {
      if (static_cast<int>(turns.size()) != f.circles)
        throw StructuralError("rotation arity does not match the block part");
      BlockPart g = f;
      const std::size_t modes = f.modes();
      std::vector<Scalar> phase(modes);
      for (std::size_t m = 0; m < modes; ++m) {
        auto k = funcspace::mode_degrees(m, f.circles, f.degree);
        double a = 0;
        for (int j = 0; j < f.circles; ++j) a += k[j] * turns[j];
        // reduce before the multiply keeps the phase accurate for large k
        a -= std::round(a);
        phase[m] = std::polar(1.0, kTwoPi * a);
      }
      for (std::size_t w = 0; w < f.words(); ++w)
        for (std::size_t m = 0; m < modes; ++m) g.coef[w * modes + m] *= phase[m];
      return g;
    }
    case Kind::Shift: {
      if (f.alphabet == 0) throw StructuralError("symbol shift on a block part without symbol factor");
      BlockPart g = f;
      g.lo += power;
      return g;
    }
    case Kind::Translate: {
      if (f.alphabet == 0) throw StructuralError("digit translation on a block part without symbol factor");
      if (f.alphabet != base) throw StructuralError("digit translation base differs from the alphabet");
      if (f.depth == 0) return f;
      const int D = centered_depth_covering(f.lo, f.depth);
      const std::int64_t lo = centered_lo(D);
      BlockPart e = embed_window(f, lo, D);
      BlockPart g = e;
      const std::size_t modes = e.modes();
      const std::size_t words = e.words();
      std::vector<int> digits(static_cast<std::size_t>(D));
      std::vector<std::size_t> weight(static_cast<std::size_t>(D));  // word weight of digit k
      for (int t = 0; t < D; ++t)
        weight[position_digit(lo + t)] = static_cast<std::size_t>(ipow(static_cast<std::uint64_t>(base), t));
      for (std::size_t u = 0; u < words; ++u) {
        std::size_t rest = u;
        for (int t = 0; t < D; ++t) {
          digits[position_digit(lo + t)] = static_cast<int>(rest % base);
          rest /= base;
        }
        auto moved = funcspace::translate_digits(digits, base, add, sub);
        std::size_t v = 0;
        for (int k = 0; k < D; ++k) v += weight[k] * static_cast<std::size_t>(moved[k]);
        std::copy_n(e.coef.begin() + v * modes, modes, g.coef.begin() + u * modes);
      }
      return g;
    }
    case Kind::Chain: {
      BlockPart g = f;
      for (auto it = steps.rbegin(); it != steps.rend(); ++it) g = it->pullback(g);
      return g;
    }
  }
  return f;
}

std::string to_string(HomeoKind k) {
  switch (k) {
    case HomeoKind::Identity: return "identity";
    case HomeoKind::Rotation: return "rotation";
    case HomeoKind::SymbolShift: return "symbol_shift";
    case HomeoKind::DigitTranslation: return "digit_translation";
    case HomeoKind::CyclicBlock: return "cyclic_block";
    case HomeoKind::Conjugated: return "conjugated";
    case HomeoKind::Assembled: return "assembled";
    case HomeoKind::Composite: return "composite";
  }
  return "?";
}

int Homeo::preimage_block(int b) const {
  for (std::size_t i = 0; i < target.size(); ++i)
    if (target[i] == b) return static_cast<int>(i) + 1;
  throw StructuralError("block " + std::to_string(b) + " is not in the image");
}

BlockPoint Homeo::forward(BlockPoint x) const {
  if (x.block < 1 || x.block > block_count())
    throw StructuralError("block " + std::to_string(x.block) + " outside the map's domain");
  fiber[x.block - 1].forward(x);
  x.block = target[x.block - 1];
  return x;
}

BlockPoint Homeo::backward(BlockPoint x) const {
  if (x.block < 1 || x.block > block_count())
    throw StructuralError("block " + std::to_string(x.block) + " outside the map's domain");
  const int src = preimage_block(x.block);
  fiber[src - 1].backward(x);
  x.block = src;
  return x;
}

PointRef Homeo::forward(const PointRef& x) const {
  if (auto* p = std::get_if<BlockPoint>(&x)) return forward(*p);
  if (auto* s = std::get_if<funcspace::SeqPoint>(&x)) {
    if (sequence_step == 0) throw StructuralError("map does not act on the sequence");
    const std::int64_t m = s->n + sequence_step;
    if (m < 1) throw StructuralError("sequence point " + std::to_string(s->n) + " is outside the domain");
    return funcspace::SeqPoint{m};
  }
  const int k = std::get<funcspace::LimitRef>(x).index;
  if (k < 0 || k >= static_cast<int>(limit_map.size())) throw StructuralError("limit point outside the domain");
  return funcspace::LimitRef{limit_map[k]};
}

PointRef Homeo::backward(const PointRef& x) const {
  if (auto* p = std::get_if<BlockPoint>(&x)) return backward(*p);
  if (auto* s = std::get_if<funcspace::SeqPoint>(&x)) {
    if (sequence_step == 0) throw StructuralError("map does not act on the sequence");
    const std::int64_t m = s->n - sequence_step;
    if (m < 1) throw StructuralError("sequence point " + std::to_string(s->n) + " is outside the image");
    return funcspace::SeqPoint{m};
  }
  const int k = std::get<funcspace::LimitRef>(x).index;
  auto inv = invert_limits(limit_map);
  if (k < 0 || k >= static_cast<int>(inv.size())) throw StructuralError("limit point outside the domain");
  return funcspace::LimitRef{inv[k]};
}

Homeo Homeo::inverse() const {
  Homeo h = *this;
  h.label = label.empty() ? "" : label + "^-1";
  auto src = invert_permutation(target);
  h.target = src;
  for (std::size_t b = 0; b < target.size(); ++b) h.fiber[target[b] - 1] = fiber[b].inverse();
  h.sequence_step = -sequence_step;
  h.limit_map = invert_limits(limit_map);
  for (auto& v : h.phases) v = -v;
  h.shift_power = -shift_power;
  if (!cycle.empty()) h.cycle = invert_permutation(cycle);
  if (kind == HomeoKind::Conjugated || kind == HomeoKind::CyclicBlock) {
    if (inner) h.inner = dynamics::inverse(inner);
  }
  for (auto& c : h.components) c.map = dynamics::inverse(c.map);
  return h;
}

bool Homeo::uniform_isometry() const {
  for (std::size_t b = 0; b < target.size(); ++b)
    if (target[b] != static_cast<int>(b) + 1 || !fiber[b].isometric()) return false;
  return sequence_step == 0;
}

HomeoPtr make_identity(std::vector<BlockShape> domain) {
  Homeo h;
  h.kind = HomeoKind::Identity;
  h.label = "identity";
  h.target.resize(domain.size());
  std::iota(h.target.begin(), h.target.end(), 1);
  h.fiber.assign(domain.size(), FiberMap::identity());
  h.domain = std::move(domain);
  return std::make_shared<const Homeo>(std::move(h));
}

HomeoPtr make_rotation_flow(const std::vector<double>& phases) {
  if (phases.empty()) throw ValidationError("rotation flow needs at least one phase");
  Homeo h;
  h.kind = HomeoKind::Rotation;
  h.label = "rotation";
  h.domain = {BlockShape{static_cast<int>(phases.size()), 0}};
  h.target = {1};
  h.fiber = {FiberMap::rotation(phases)};
  h.phases = phases;
  return std::make_shared<const Homeo>(std::move(h));
}

HomeoPtr make_symbol_shift(int alphabet, std::int64_t power) {
  if (alphabet < 1) throw ValidationError("alphabet must be nonempty");
  Homeo h;
  h.kind = HomeoKind::SymbolShift;
  h.label = "shift";
  h.domain = {BlockShape{0, alphabet}};
  h.target = {1};
  h.fiber = {FiberMap::shift(power)};
  h.shift_power = power;
  return std::make_shared<const Homeo>(std::move(h));
}

HomeoPtr make_digit_translation(int p, std::vector<int> add, std::vector<int> sub) {
  if (p < 2) throw ValidationError("digit base must be >= 2");
  for (int d : add)
    if (d < 0 || d >= p) throw ValidationError("digit outside 0..p-1");
  for (int d : sub)
    if (d < 0 || d >= p) throw ValidationError("digit outside 0..p-1");
  Homeo h;
  h.kind = HomeoKind::DigitTranslation;
  h.label = "translation";
  h.domain = {BlockShape{0, p}};
  h.target = {1};
  h.fiber = {FiberMap::translate(p, std::move(add), std::move(sub))};
  return std::make_shared<const Homeo>(std::move(h));
}

HomeoPtr make_cyclic_block(std::vector<int> s, HomeoPtr inner) {
  if (s.empty()) throw StructuralError("cyclic block map needs a nonempty index table");
  invert_permutation(s);  // validates
  const int nsub = inner->block_count();
  Homeo h;
  h.kind = HomeoKind::CyclicBlock;
  h.label = "cyclic_block";
  for (std::size_t j = 0; j < s.size(); ++j) {
    for (int sub = 1; sub <= nsub; ++sub) {
      h.domain.push_back(inner->domain[sub - 1]);
      h.target.push_back((s[j] - 1) * nsub + inner->target[sub - 1]);
      h.fiber.push_back(inner->fiber[sub - 1]);
    }
  }
  h.cycle = std::move(s);
  h.phases = inner->phases;
  h.inner = std::move(inner);
  return std::make_shared<const Homeo>(std::move(h));
}

HomeoPtr make_assembled(std::vector<HomeoPtr> components, std::vector<int> limit_map, bool with_sequence) {
  if (components.empty()) throw StructuralError("assembled map needs at least one component");
  invert_limits(limit_map);
  Homeo h;
  h.kind = HomeoKind::Assembled;
  h.label = "assembled";
  int offset = 0;
  for (auto& c : components) {
    for (int b = 0; b < c->block_count(); ++b) {
      h.domain.push_back(c->domain[b]);
      h.target.push_back(offset + c->target[b]);
      h.fiber.push_back(c->fiber[b]);
    }
    h.components.push_back({c, offset});
    offset += c->block_count();
  }
  h.sequence_step = with_sequence ? -1 : 0;
  h.limit_map = std::move(limit_map);
  return std::make_shared<const Homeo>(std::move(h));
}

HomeoPtr inverse(const HomeoPtr& h) { return std::make_shared<const Homeo>(h->inverse()); }

HomeoPtr compose(const HomeoPtr& a, const HomeoPtr& b) {
  if (a->domain != b->domain) throw StructuralError("domain mismatch: maps act on different block sums");
  if (a->kind == HomeoKind::Identity) return b;
  if (b->kind == HomeoKind::Identity) return a;
  Homeo h;
  h.kind = HomeoKind::Composite;
  h.label = a->label + " o " + b->label;
  h.domain = a->domain;
  for (int x = 0; x < b->block_count(); ++x) {
    const int mid = b->target[x];
    h.target.push_back(a->target[mid - 1]);
    h.fiber.push_back(FiberMap::then(b->fiber[x], a->fiber[mid - 1]));
  }
  h.sequence_step = a->sequence_step + b->sequence_step;
  if (a->limit_map.size() != b->limit_map.size()) throw StructuralError("domain mismatch: limit points differ");
  for (int k : b->limit_map) h.limit_map.push_back(a->limit_map[k]);
  if (a->kind == HomeoKind::Rotation && b->kind == HomeoKind::Rotation) {
    h.kind = HomeoKind::Rotation;
    h.phases = h.fiber[0].kind == FiberMap::Kind::Rotation ? h.fiber[0].turns
                                                            : std::vector<double>(a->phases.size(), 0.0);
  }
  if (a->kind == HomeoKind::SymbolShift && b->kind == HomeoKind::SymbolShift) {
    h.kind = HomeoKind::SymbolShift;
    h.shift_power = a->shift_power + b->shift_power;
  }
  return std::make_shared<const Homeo>(std::move(h));
}

HomeoPtr power(const HomeoPtr& h, int k) {
  if (k == 0) return make_identity(h->domain);
  HomeoPtr base = k < 0 ? inverse(h) : h;
  HomeoPtr out = base;
  for (int i = 1; i < std::abs(k); ++i) out = compose(base, out);
  return out;
}

HomeoPtr conjugate_flow(const HomeoPtr& psi, const HomeoPtr& phi) {
  if (psi->domain != phi->domain)
    throw StructuralError("domain mismatch: conjugating map does not act on the flow's space");
  for (int b = 0; b < psi->block_count(); ++b)
    if (psi->domain[psi->target[b] - 1] != psi->domain[b])
      throw StructuralError("domain mismatch: conjugating map changes block shapes");
  auto c = compose(inverse(psi), compose(phi, psi));
  Homeo h = *c;
  h.kind = HomeoKind::Conjugated;
  h.label = "conj(" + psi->label + ", " + phi->label + ")";
  h.outer = psi;
  h.inner = phi;
  h.phases = phi->phases;
  h.shift_power = phi->shift_power;
  return std::make_shared<const Homeo>(std::move(h));
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

BilateralShift make_bilateral_shift(int alphabet, std::int64_t schedule_budget, int depth, int max_power) {
  if (alphabet < 1) throw ValidationError("alphabet must be nonempty");
  if (schedule_budget < 1) throw ValidationError("schedule budget must be >= 1");
  if (depth < 1 || max_power < 1) throw ValidationError("depth and max_power must be >= 1");
  const int S = std::max(depth, max_power);
  const int fill = 0;
  std::vector<int> core;  // positions 1, 2, ...
  std::int64_t pos = 0, placed = 0;
  for (int s = 1; s <= S; ++s) {
    // shell s: triples (r, m, j) with max(|r|, m, j) = s
    for (int m = 1; m <= s; ++m) {
      for (int r = -s; r <= s; ++r) {
        for (int j = 1; j <= s; ++j) {
          if (std::max({std::abs(r), m, j}) != s) continue;
          const int D = std::min(j, alphabet);
          const std::uint64_t count = ipow(static_cast<std::uint64_t>(D), j);
          for (std::uint64_t i = 0; i < count; ++i) {
            if (placed >= schedule_budget)
              throw CapacityError("schedule budget exhausted at shell " + std::to_string(s) +
                                      " (complete up to depth " + std::to_string(s - 1) + ")",
                                  s - 1);
            std::int64_t n = pos + floor_mod(r - pos, m);  // smallest n >= pos, n = r mod m
            core.resize(static_cast<std::size_t>(n + j), fill);
            std::uint64_t rest = i;
            for (int t = j - 1; t >= 0; --t) {
              core[static_cast<std::size_t>(n + t)] = static_cast<int>(rest % D);
              rest /= D;
            }
            pos = n + j;
            ++placed;
          }
        }
      }
    }
  }
  BilateralShift out;
  out.flow = make_symbol_shift(alphabet);
  out.placements = placed;
  out.span = pos;
  out.seed.flow = out.flow;
  out.seed.base = BlockPoint{1, {}, SymbolPoint::with_tails(1, std::move(core), {fill}, {fill})};
  out.seed.eps = std::ldexp(1.0, -depth);
  out.seed.budget = pos + S + 1;
  out.seed.depth = depth;
  return out;
}

CantorFlow make_cantor_flow(int p, int depth, const std::vector<int>& L0, const std::vector<int>& M0,
                            int seed_depth, std::int64_t schedule_budget) {
  if (!is_prime(p)) throw ValidationError("p = " + std::to_string(p) + " is not a prime");
  if (depth < 1) throw ValidationError("depth must be >= 1");
  auto check = [&](const std::vector<int>& d, const char* name) {
    if (static_cast<int>(d.size()) != depth)
      throw ValidationError(std::string(name) + " must have exactly " + std::to_string(depth) + " digits");
    for (int v : d)
      if (v < 0 || v >= p) throw ValidationError(std::string(name) + " has a digit outside 0..p-1");
  };
  check(L0, "L0");
  check(M0, "M0");

  auto shift = make_bilateral_shift(p, schedule_budget, seed_depth, 4);
  // phi fixes M0: conjugate of the shift (which fixes the zero point) by t -> t - M0
  auto to_zero = make_digit_translation(p, {}, M0);
  auto phi = conjugate_flow(to_zero, shift.flow);
  auto s = make_digit_translation(p, M0, L0);
  CantorFlow out;
  out.flow = conjugate_flow(s, phi);
  out.translation = s;
  out.fixed = funcspace::padic_to_symbol(L0, 0);
  // transitive point of phi is to_zero^-1(w), of the result s^-1 of that
  const auto& w = *shift.seed.base.symbol;
  auto w_phi = funcspace::translate_point(w, p, M0, {});
  auto w_out = funcspace::translate_point(w_phi, p, L0, M0);
  out.seed = shift.seed;
  out.seed.flow = out.flow;
  out.seed.base = BlockPoint{1, {}, std::move(w_out)};
  return out;
}

}  // namespace shiftlab::dynamics
