#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shiftlab/dynamics/homeo.hpp"

namespace shiftlab::dynamics {

// What the metric sees of a point: block, angles and the centered symbol
// window of a fixed depth.
struct OrbitView {
  int block = 1;
  std::vector<double> angles;
  std::vector<int> word;
};

// Iterates h^power from a start point. Conjugations by isometric maps walk
// the inner orbit and transport only the view, so long symbol cores are
// never rewritten.
class OrbitWalker {
 public:
  OrbitWalker(HomeoPtr h, const BlockPoint& start, int power, int depth);
  ~OrbitWalker();
  OrbitWalker(OrbitWalker&&) noexcept;
  OrbitWalker& operator=(OrbitWalker&&) noexcept;

  void step();
  const OrbitView& view() const { return view_; }
  std::int64_t steps() const { return steps_; }

 private:
  void refresh();

  HomeoPtr h_;
  int power_;
  int depth_;
  std::int64_t steps_ = 0;
  BlockPoint point_;
  // conjugated walking
  std::unique_ptr<OrbitWalker> inner_;
  const FiberMap* outer_ = nullptr;
  OrbitView view_;
};

OrbitView view_of(const BlockPoint& x, int depth);
// symbol depth for an epsilon: agreement on the centered window of depth r
// means distance <= 2^-r
int symbol_depth(double eps);
bool within(const OrbitView& a, const OrbitView& b, double eps);

// Probe points of a block sum: circle factors on a uniform grid of spacing
// eps/2, symbol factors every word of the eps depth. Deterministic order.
class ProbeGrid {
 public:
  ProbeGrid(const std::vector<BlockShape>& domain, double eps);

  std::size_t size() const { return total_; }
  int depth() const { return depth_; }
  double eps() const { return eps_; }
  const std::string& metric() const { return metric_; }
  // probes within eps of the view; block ids of the view are shifted by offset
  void hits(const OrbitView& v, std::vector<std::size_t>& out, int offset = 0) const;

 private:
  struct Block {
    std::size_t offset = 0;
    int grid = 1;
    double spacing = 0;
    int circles = 0;
    int alphabet = 0;
    std::size_t count = 0;
  };
  std::vector<Block> blocks_;
  std::size_t total_ = 0;
  int depth_ = 0;
  double eps_ = 0;
  std::string metric_;
};

struct OrbitReport {
  bool certified = false;
  double eps = 0;
  std::optional<double> eps_achieved;
  int power = 1;
  std::int64_t budget = 0;
  std::int64_t iterations = 0;
  std::size_t probes = 0;
  double coverage = 0;
  std::vector<std::int64_t> first_hit;  // -1: never
  std::vector<std::pair<double, double>> curve;  // (iteration, coverage)
  std::string metric;
};

// Probe grid: circle factors at spacing eps/2 (max-angle metric), symbol
// factors all words of the eps depth, on every block of the flow.
OrbitReport orbit_density(const HomeoPtr& flow, const BlockPoint& start, double eps, std::int64_t budget,
                          int power = 1);

struct LTransitivityCase {
  int k = 1;
  int i = 0;
  bool success = false;
  std::int64_t first_hit = -1;
};

struct LTransitivityReport {
  bool certified = false;
  double eps = 0;
  std::int64_t budget = 0;
  int horizon = 0;
  std::vector<LTransitivityCase> cases;
};

// For every k in L and i <= horizon, looks for t >= 1 with
// (h_n^{kt}(1_n))_n within eps of (h_n^i(1_n))_n.
LTransitivityReport certify_L_transitivity(const std::vector<TransitiveSeed>& family,
                                           const std::vector<int>& L, double eps, std::int64_t budget,
                                           int horizon = 3);

}  // namespace shiftlab::dynamics
