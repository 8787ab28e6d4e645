#include "shiftlab/verify/certify.hpp"

#include <algorithm>

#include "shiftlab/blockmethod/blockmethod.hpp"

namespace shiftlab::verify {

using funcspace::BlockPoint;

BlockPoint generator_candidate(const shiftop::ShiftOperator& T, int block) {
  const auto& desc = T.space->block(block);
  if (T.block) {
    const auto& d = *T.block;
    const int m = (block - 1) / d.nsub + 1;
    const int sub = (block - 1) % d.nsub + 1;
    BlockPoint z = d.base[static_cast<std::size_t>(d.index.pi(m) - 1)];
    z.block = sub;
    return blockmethod::lift_point(m, z, d.nsub);
  }
  if (T.composition && block == T.composition->y_block) return T.composition->one;
  if (T.complex) return T.complex->v[static_cast<std::size_t>(block - 1)];
  BlockPoint x{block, std::vector<double>(static_cast<std::size_t>(desc.circles), 0.0), std::nullopt};
  if (desc.symbol) x.symbol = funcspace::SymbolPoint::constant(0);
  return x;
}

GeneratorEstimate estimate_generators(const shiftop::ShiftOperator& T, double eps, std::int64_t budget) {
  if (budget < 1) throw ValidationError("budget must be >= 1");
  const auto& phi = *T.phi;
  dynamics::ProbeGrid grid(phi.domain, eps);
  GeneratorEstimate rep;
  rep.eps = eps;
  rep.budget = budget;
  rep.probes = grid.size();
  rep.lower = static_cast<int>(phi.components.size());

  const int nb = phi.block_count();
  std::vector<std::vector<char>> cover(static_cast<std::size_t>(nb), std::vector<char>(grid.size(), 0));
  std::vector<std::size_t> hits;
  for (int b = 1; b <= nb; ++b) {
    const auto comp = std::find_if(phi.components.begin(), phi.components.end(), [&](const auto& c) {
      return b > c.offset && b <= c.offset + c.map->block_count();
    });
    if (comp == phi.components.end()) throw StructuralError("block " + std::to_string(b) + " has no component");
    BlockPoint seed = generator_candidate(T, b);
    seed.block -= comp->offset;
    auto& mark = cover[static_cast<std::size_t>(b - 1)];
    for (const auto& map : {comp->map, dynamics::inverse(comp->map)}) {
      dynamics::OrbitWalker walk(map, seed, 1, grid.depth());
      for (std::int64_t t = 0; t <= budget; ++t) {
        if (t > 0) walk.step();
        hits.clear();
        grid.hits(walk.view(), hits, comp->offset);
        for (auto h : hits) mark[h] = 1;
      }
    }
  }

  std::vector<char> covered(grid.size(), 0);
  std::size_t total = 0;
  while (true) {
    int best = -1;
    std::size_t gain = 0;
    for (int b = 0; b < nb; ++b) {
      std::size_t g = 0;
      for (std::size_t i = 0; i < grid.size(); ++i) g += cover[static_cast<std::size_t>(b)][i] && !covered[i];
      if (g > gain) {
        gain = g;
        best = b;
      }
    }
    if (best < 0) break;
    for (std::size_t i = 0; i < grid.size(); ++i) covered[i] = covered[i] || cover[static_cast<std::size_t>(best)][i];
    total += gain;
    rep.seeds.push_back(best + 1);
  }
  if (total == 0) throw CapacityError("budget exhausted before any probe was covered", 0);
  rep.upper = static_cast<int>(rep.seeds.size());
  rep.coverage = grid.size() ? static_cast<double>(total) / static_cast<double>(grid.size()) : 1.0;
  rep.complete = total == grid.size();
  return rep;
}

std::vector<dynamics::TransitiveSeed> rotation_family(const std::vector<double>& turns) {
  std::vector<dynamics::TransitiveSeed> out;
  for (double t : turns) {
    dynamics::TransitiveSeed s;
    s.flow = dynamics::make_rotation_flow({t});
    s.base = BlockPoint{1, {0.0}, std::nullopt};
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<dynamics::TransitiveSeed> parity_family(double turn) {
  dynamics::TransitiveSeed s;
  s.flow = dynamics::make_cyclic_block({2, 1}, dynamics::make_rotation_flow({turn}));
  s.base = BlockPoint{1, {0.0}, std::nullopt};
  return {s};
}

}  // namespace shiftlab::verify
