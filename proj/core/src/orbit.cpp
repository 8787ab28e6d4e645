#include "shiftlab/dynamics/orbit.hpp"

#include <cmath>

namespace shiftlab::dynamics {

using funcspace::centered_lo;
using funcspace::ipow;
using funcspace::position_digit;

namespace {

// push a view through an isometric fiber map
void transport(const FiberMap& f, OrbitView& v) {
  switch (f.kind) {
    case FiberMap::Kind::Identity: return;
    case FiberMap::Kind::Rotation:
      for (std::size_t j = 0; j < f.turns.size(); ++j) v.angles[j] = wrap_angle(v.angles[j] + kTwoPi * f.turns[j]);
      return;
    case FiberMap::Kind::Translate: {
      const int r = static_cast<int>(v.word.size());
      const std::int64_t lo = centered_lo(r);
      std::vector<int> digits(static_cast<std::size_t>(r));
      for (int t = 0; t < r; ++t) digits[position_digit(lo + t)] = v.word[t];
      digits = funcspace::translate_digits(std::move(digits), f.base, f.add, f.sub);
      for (int t = 0; t < r; ++t) v.word[t] = digits[position_digit(lo + t)];
      return;
    }
    case FiberMap::Kind::Chain:
      for (const auto& s : f.steps) transport(s, v);
      return;
    case FiberMap::Kind::Shift:
      throw StructuralError("a shift cannot be applied to a window view");
  }
}

}  // namespace

OrbitView view_of(const BlockPoint& x, int depth) {
  OrbitView v;
  v.block = x.block;
  v.angles = x.angles;
  if (x.symbol) v.word = x.symbol->read(centered_lo(depth), depth);
  return v;
}

int symbol_depth(double eps) {
  if (eps >= 1.0) return 0;
  return static_cast<int>(std::ceil(std::log2(1.0 / eps) - 1e-12));
}

bool within(const OrbitView& a, const OrbitView& b, double eps) {
  if (a.block != b.block || a.word != b.word || a.angles.size() != b.angles.size()) return false;
  for (std::size_t j = 0; j < a.angles.size(); ++j)
    if (angle_distance(a.angles[j], b.angles[j]) > eps) return false;
  return true;
}

OrbitWalker::OrbitWalker(HomeoPtr h, const BlockPoint& start, int power, int depth)
    : h_(std::move(h)), power_(power), depth_(depth), point_(start) {
  if (power_ < 1) throw ValidationError("orbit power must be >= 1");
  if (h_->kind == HomeoKind::Conjugated && h_->outer && h_->outer->uniform_isometry()) {
    inner_ = std::make_unique<OrbitWalker>(h_->inner, h_->outer->forward(start), power, depth);
  }
  refresh();
}

OrbitWalker::~OrbitWalker() = default;
OrbitWalker::OrbitWalker(OrbitWalker&&) noexcept = default;
OrbitWalker& OrbitWalker::operator=(OrbitWalker&&) noexcept = default;

void OrbitWalker::refresh() {
  if (inner_) {
    view_ = inner_->view();
    const auto& f = h_->outer->fiber[view_.block - 1];
    transport(f.inverse(), view_);
  } else {
    view_ = view_of(point_, depth_);
  }
}

void OrbitWalker::step() {
  if (inner_) {
    inner_->step();
  } else {
    for (int i = 0; i < power_; ++i) point_ = h_->forward(point_);
  }
  ++steps_;
  refresh();
}

ProbeGrid::ProbeGrid(const std::vector<BlockShape>& domain, double eps) : eps_(eps) {
  if (!(eps > 0)) throw ValidationError("eps must be positive");
  depth_ = symbol_depth(eps);
  const double spacing_target = eps / 2;
  bool any_circle = false, any_symbol = false;
  for (const auto& shape : domain) {
    Block b;
    b.offset = total_;
    b.circles = shape.circles;
    b.alphabet = shape.alphabet;
    if (shape.circles > 0) {
      b.grid = static_cast<int>(std::ceil(kTwoPi / spacing_target));
      b.spacing = kTwoPi / b.grid;
      any_circle = true;
    }
    double words = 1;
    if (shape.alphabet > 0) {
      words = std::pow(static_cast<double>(shape.alphabet), depth_);
      any_symbol = true;
    }
    const double count = std::pow(static_cast<double>(b.grid), shape.circles) * words;
    if (count > 5e7) throw CapacityError("probe grid too large for this eps", 0);
    b.count = static_cast<std::size_t>(count);
    total_ += b.count;
    blocks_.push_back(b);
  }
  metric_ = any_circle && any_symbol ? "max(angle distance, 2^-window)"
            : any_symbol             ? "2^-window (centered)"
                                     : "max angle distance";
}

void ProbeGrid::hits(const OrbitView& v, std::vector<std::size_t>& out, int offset) const {
  out.clear();
  const int id = v.block + offset;
  if (id < 1 || id > static_cast<int>(blocks_.size())) throw StructuralError("view outside the probe grid");
  const auto& b = blocks_[static_cast<std::size_t>(id - 1)];
  std::size_t word = 0;
  for (std::size_t u = 0, mult = 1; u < v.word.size(); ++u) {
    word += static_cast<std::size_t>(v.word[u]) * mult;
    mult *= static_cast<std::size_t>(b.alphabet);
  }
  // candidate grid indices per factor
  std::vector<std::vector<int>> ranges(static_cast<std::size_t>(b.circles));
  for (int j = 0; j < b.circles; ++j) {
    const double th = v.angles[j];
    const int lo = static_cast<int>(std::ceil((th - eps_) / b.spacing));
    const int hi = static_cast<int>(std::floor((th + eps_) / b.spacing));
    for (int i = lo; i <= hi; ++i) {
      const int g = static_cast<int>(floor_mod(i, b.grid));
      if (angle_distance(g * b.spacing, th) <= eps_) ranges[j].push_back(g);
    }
    if (ranges[j].empty()) return;
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(b.circles), 0);
  while (true) {
    std::size_t flat = 0, mult = 1;
    for (int j = 0; j < b.circles; ++j) {
      flat += static_cast<std::size_t>(ranges[j][idx[j]]) * mult;
      mult *= static_cast<std::size_t>(b.grid);
    }
    out.push_back(b.offset + word * mult + flat);
    int j = 0;
    for (; j < b.circles; ++j) {
      if (++idx[j] < ranges[j].size()) break;
      idx[j] = 0;
    }
    if (j == b.circles) break;
  }
}

OrbitReport orbit_density(const HomeoPtr& flow, const BlockPoint& start, double eps, std::int64_t budget,
                          int power) {
  if (!(eps > 0)) throw ValidationError("eps must be positive");
  if (budget < 1) throw ValidationError("budget must be >= 1");
  if (power < 1) throw ValidationError("power must be >= 1");
  const ProbeGrid grid(flow->domain, eps);
  const std::size_t total = grid.size();

  OrbitReport rep;
  rep.eps = eps;
  rep.power = power;
  rep.budget = budget;
  rep.probes = total;
  rep.first_hit.assign(total, -1);
  rep.metric = grid.metric();
  std::size_t covered = 0;

  OrbitWalker walker(flow, start, power, grid.depth());
  std::vector<std::size_t> hit;
  std::int64_t next_mark = 1;
  for (std::int64_t t = 1; t <= budget && covered < total; ++t) {
    walker.step();
    grid.hits(walker.view(), hit);
    for (auto probe : hit)
      if (rep.first_hit[probe] < 0) {
        rep.first_hit[probe] = t;
        ++covered;
      }
    rep.iterations = t;
    if (t >= next_mark || covered == total) {
      rep.curve.emplace_back(static_cast<double>(t), static_cast<double>(covered) / static_cast<double>(total));
      next_mark = std::max(next_mark + 1, static_cast<std::int64_t>(std::ceil(next_mark * 1.2)));
    }
  }
  rep.coverage = total ? static_cast<double>(covered) / static_cast<double>(total) : 1.0;
  rep.certified = covered == total;
  if (rep.certified) rep.eps_achieved = eps;
  return rep;
}

LTransitivityReport certify_L_transitivity(const std::vector<TransitiveSeed>& family, const std::vector<int>& L,
                                           double eps, std::int64_t budget, int horizon) {
  if (family.empty()) throw ValidationError("family must be nonempty");
  if (L.empty()) throw ValidationError("L must be nonempty");
  if (!(eps > 0) || budget < 1 || horizon < 0) throw ValidationError("bad eps, budget or horizon");
  const int r = symbol_depth(eps);
  LTransitivityReport rep;
  rep.eps = eps;
  rep.budget = budget;
  rep.horizon = horizon;
  rep.certified = true;
  for (int k : L) {
    if (k < 1) throw ValidationError("entries of L must be >= 1");
    for (int i = 0; i <= horizon; ++i) {
      std::vector<OrbitView> targets;
      std::vector<OrbitWalker> walkers;
      for (const auto& s : family) {
        BlockPoint x = s.base;
        for (int u = 0; u < i; ++u) x = s.flow->forward(x);
        targets.push_back(view_of(x, r));
        walkers.emplace_back(s.flow, s.base, k, r);
      }
      LTransitivityCase c{k, i, false, -1};
      for (std::int64_t t = 1; t <= budget; ++t) {
        bool all = true;
        for (std::size_t n = 0; n < walkers.size(); ++n) {
          walkers[n].step();
          all = all && within(walkers[n].view(), targets[n], eps);
        }
        if (all) {
          c.success = true;
          c.first_hit = t;
          break;
        }
      }
      rep.certified = rep.certified && c.success;
      rep.cases.push_back(c);
    }
  }
  return rep;
}

}  // namespace shiftlab::dynamics
