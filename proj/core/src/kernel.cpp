#include "shiftlab/verify/kernel.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "shiftlab/blockmethod/blockmethod.hpp"
#include "shiftlab/dynamics/orbit.hpp"

namespace shiftlab::verify {

using funcspace::BlockPart;
using funcspace::BlockPoint;
using funcspace::LimitRef;
using funcspace::SeqPoint;
using funcspace::SymbolPoint;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::TrivialKernel: return "TRIVIAL_KERNEL";
    case Verdict::Nontrivial: return "NONTRIVIAL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

std::size_t ConstraintSystem::dim() const {
  return layout.dim + static_cast<std::size_t>(seq_vars) + static_cast<std::size_t>(space->limit_count());
}

funcspace::SparseRow ConstraintSystem::row_vector(const ConstraintRow& r) const {
  std::map<std::size_t, Scalar> acc;
  for (const auto& [pt, w] : r.terms) {
    if (const auto* b = std::get_if<BlockPoint>(&pt)) {
      for (const auto& [c, v] : funcspace::evaluation_row(layout, *b)) acc[c] += w * v;
    } else if (const auto* s = std::get_if<SeqPoint>(&pt)) {
      if (s->n < 1 || s->n > seq_vars)
        throw StructuralError("sequence point " + std::to_string(s->n) + " is outside the system's window");
      acc[layout.dim + static_cast<std::size_t>(s->n - 1)] += w;
    } else {
      const int k = std::get<LimitRef>(pt).index;
      if (k < 0 || k >= space->limit_count()) throw StructuralError("no limit point " + std::to_string(k));
      acc[layout.dim + static_cast<std::size_t>(seq_vars) + static_cast<std::size_t>(k)] += w;
    }
  }
  funcspace::SparseRow out;
  for (const auto& [c, v] : acc)
    if (v != Scalar{0}) out.emplace_back(c, v);
  return out;
}

Scalar ConstraintSystem::residual(const ConstraintRow& r, const BlockFunction& f) const {
  Scalar s = 0;
  for (const auto& [pt, w] : r.terms) s += w * funcspace::eval_function(f, pt);
  return s;
}

std::map<std::string, int> ConstraintSystem::tag_counts() const {
  std::map<std::string, int> out;
  for (const auto& r : rows) ++out[r.tag];
  return out;
}

ConstraintSystem make_system(const funcspace::SpacePtr& space, int seq_vars) {
  if (seq_vars < 0) throw ValidationError("seq_vars must be >= 0");
  ConstraintSystem s;
  s.space = space;
  s.layout = funcspace::default_layout(space);
  s.seq_vars = seq_vars;
  return s;
}

DecayReport certify_dense(std::size_t rows, std::size_t cols, const std::vector<Scalar>& a, const RankOptions& opt) {
  if (a.size() != rows * cols) throw StructuralError("matrix data does not match its shape");
  DecayReport rep;
  rep.rows = rows;
  rep.dim = cols;
  rep.gap = opt.gap;
  if (cols == 0) {
    rep.verdict = Verdict::TrivialKernel;
    rep.notes.push_back("no unknowns");
    return rep;
  }
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i * cols + j];

  Eigen::VectorXd sv;
  Eigen::MatrixXcd V;
  if (rows > 0) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    sv = svd.singularValues();
    V = svd.matrixV();
  } else {
    V = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(cols), static_cast<Eigen::Index>(cols));
  }
  rep.spectrum.assign(cols, 0.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) rep.spectrum[static_cast<std::size_t>(i)] = sv(i);
  rep.sigma_max = rep.spectrum.front();
  rep.sigma_min = rep.spectrum.back();
  rep.ratio = rep.sigma_max > 0 ? rep.sigma_min / rep.sigma_max : 0.0;

  std::size_t zero = 0;
  for (double s : rep.spectrum)
    if (s <= opt.null_tol * rep.sigma_max) ++zero;
  rep.kernel_dim = zero;
  if (rep.sigma_max > 0 && rep.ratio >= opt.gap) {
    rep.verdict = Verdict::TrivialKernel;
    rep.kernel_dim = 0;
  } else if (zero > 0) {
    rep.verdict = Verdict::Nontrivial;
    const std::size_t take = std::min<std::size_t>(zero, static_cast<std::size_t>(std::max(0, opt.max_kernel_vectors)));
    for (std::size_t i = 0; i < take; ++i) {
      const auto col = V.col(static_cast<Eigen::Index>(cols - 1 - i));
      rep.kernel.emplace_back(col.data(), col.data() + col.size());
    }
    if (rows < cols) rep.notes.push_back("fewer rows than unknowns");
  } else {
    rep.verdict = Verdict::Inconclusive;
    rep.notes.push_back("smallest singular value sits between the null tolerance and the gap");
  }
  return rep;
}

DecayReport certify_kernel(const ConstraintSystem& sys, const RankOptions& opt) {
  const std::size_t cols = sys.dim();
  std::vector<Scalar> a(sys.rows.size() * cols, Scalar{0});
  for (std::size_t i = 0; i < sys.rows.size(); ++i)
    for (const auto& [c, v] : sys.row_vector(sys.rows[i])) a[i * cols + c] += v;
  auto rep = certify_dense(sys.rows.size(), cols, a, opt);
  rep.row_tags = sys.tag_counts();
  return rep;
}

// ---- block method -------------------------------------------------------

namespace {

const shiftop::BlockMethodData& block_data(const shiftop::ShiftOperator& T) {
  if (!T.block) throw ValidationError("operator was not built with the block method");
  return *T.block;
}

BlockPoint iterate(const dynamics::HomeoPtr& h, BlockPoint x, std::int64_t m) {
  for (std::int64_t i = 0; i < m; ++i) x = h->forward(std::move(x));
  for (std::int64_t i = 0; i > m; --i) x = h->backward(std::move(x));
  return x;
}

int default_window(const shiftop::BlockMethodData& d) { return 8 * d.seq.max_p(); }

int default_samples(const shiftop::ShiftOperator& T) {
  const auto& b = T.space->blocks.front();
  double m = 1;
  for (int j = 0; j < b.circles; ++j) m *= 2.0 * b.degree + 1.0;
  return static_cast<int>(2 * m) + 8;
}

// f_N^n as points: (a_j^n, h_n^N(1_n)), j = 1..p_n
std::vector<BlockPoint> orbit_slice(const shiftop::BlockMethodData& d, int n, std::int64_t N) {
  const BlockPoint z = iterate(d.h[static_cast<std::size_t>(n - 1)], d.base[static_cast<std::size_t>(n - 1)], N);
  std::vector<BlockPoint> out;
  for (int j = 1; j <= d.index.p[static_cast<std::size_t>(n - 1)]; ++j)
    out.push_back(blockmethod::lift_point(d.index.a(n, j), z, d.nsub));
  return out;
}

}  // namespace

ConstraintSystem suso_constraint_system(const shiftop::ShiftOperator& T, const SusoOptions& opt) {
  const auto& d = block_data(T);
  const int K = opt.window > 0 ? opt.window : default_window(d);
  const int W = opt.orbit_samples > 0 ? opt.orbit_samples : default_samples(T);
  if (T.space->limit_count() != 1) throw StructuralError("block method spaces carry one free limit point");
  auto sys = make_system(T.space, K);
  const int F = d.index.families();

  // cache the orbit slices
  std::map<std::pair<int, std::int64_t>, std::vector<BlockPoint>> slices;
  auto slice = [&](int n, std::int64_t N) -> const std::vector<BlockPoint>& {
    auto key = std::make_pair(n, N);
    auto it = slices.find(key);
    if (it == slices.end()) it = slices.emplace(key, orbit_slice(d, n, N)).first;
    return it->second;
  };
  auto add_v_terms = [&](ConstraintRow& r, int n, std::int64_t N, int k, Scalar sign) {
    const int p = d.index.p[static_cast<std::size_t>(n - 1)];
    const auto v = blockmethod::v_vector(d.gamma, d.index, n, static_cast<int>(floor_mod(k, 2 * p)));
    const auto& pts = slice(n, N);
    for (int j = 0; j < p; ++j)
      if (v[static_cast<std::size_t>(j)] != Scalar{0}) r.terms.emplace_back(pts[static_cast<std::size_t>(j)], sign * v[static_cast<std::size_t>(j)]);
  };

  for (int n = 1; n <= K; ++n) {
    ConstraintRow r{"constancy", -1, {}};
    r.terms.emplace_back(SeqPoint{n}, 1.0);
    r.terms.emplace_back(LimitRef{0}, -1.0);
    sys.rows.push_back(std::move(r));
  }
  for (int n = 1; n <= K; ++n) {
    ConstraintRow r{"recursion_finite", n, {}};
    r.terms.emplace_back(SeqPoint{n}, 1.0);
    for (int fam = 1; fam <= F; ++fam) add_v_terms(r, fam, n, n, -1.0);
    sys.rows.push_back(std::move(r));
  }
  for (int k = 0; k <= K; ++k)
    for (int N = 1; N <= W; ++N) {
      ConstraintRow r{"limit_equality", -1, {}};
      r.terms.emplace_back(LimitRef{0}, 1.0);
      for (int fam = 1; fam <= F; ++fam) add_v_terms(r, fam, N, k, -1.0);
      sys.rows.push_back(std::move(r));
    }
  if (opt.include_derived) {
    for (int fam = 1; fam <= F; ++fam) {
      const auto M = blockmethod::family_matrix(d.gamma, d.index, fam);
      for (int N = 1; N <= W; ++N) {
        const auto& pts = slice(fam, N);
        for (int i = 0; i < M.order; ++i) {
          ConstraintRow r{"derived_matrix", -1, {}};
          for (int j = 0; j < M.order; ++j)
            if (M.at(i, j) != Scalar{0}) r.terms.emplace_back(pts[static_cast<std::size_t>(j)], M.at(i, j));
          if (!r.terms.empty()) sys.rows.push_back(std::move(r));
        }
      }
    }
  }
  return sys;
}

DecayReport suso_constraint_kernel(const shiftop::ShiftOperator& T, const SusoOptions& opt) {
  const auto sys = suso_constraint_system(T, opt);
  auto rep = certify_kernel(sys, opt.rank);
  rep.metrics["window"] = sys.seq_vars;
  rep.metrics["families"] = block_data(T).index.families();
  return rep;
}

BlockRecursionReport block_recursion_check(const shiftop::ShiftOperator& T, int trials, std::uint64_t seed, int k_max,
                                   std::vector<int> N_values) {
  const auto& d = block_data(T);
  if (trials < 1) throw ValidationError("trials must be >= 1");
  BlockRecursionReport rep;
  rep.trials = trials;
  rep.k_max = k_max >= 0 ? k_max : default_window(d);
  rep.N_values = N_values;
  const int F = d.index.families();
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const auto f = shiftop::random_input(T, rng);
    // right-hand sides only need f
    std::map<std::pair<int, int>, std::vector<Scalar>> fN;
    for (int n = 1; n <= F; ++n)
      for (int N : N_values) {
        std::vector<Scalar> vals;
        for (const auto& x : orbit_slice(d, n, N)) vals.push_back(funcspace::eval_function(f, x));
        fN[{n, N}] = std::move(vals);
      }
    BlockFunction g = f;
    for (int k = 0; k <= rep.k_max; ++k) {
      if (k > 0) g = shiftop::apply_T_inverse(T, g);
      for (int n = 1; n <= F; ++n) {
        const int p = d.index.p[static_cast<std::size_t>(n - 1)];
        const auto v = blockmethod::v_vector(d.gamma, d.index, n, k % (2 * p));
        for (int N : N_values) {
          const auto pts = orbit_slice(d, n, static_cast<std::int64_t>(N) - k);
          Scalar lhs = 0, rhs = 0;
          for (int j = 1; j <= p; ++j) {
            lhs += d.gamma.at(d.index.a(n, j)) * funcspace::eval_function(g, pts[static_cast<std::size_t>(j - 1)]);
            rhs += v[static_cast<std::size_t>(j - 1)] * fN[{n, N}][static_cast<std::size_t>(j - 1)];
          }
          rep.max_residual = std::max(rep.max_residual, std::abs(lhs - rhs));
        }
      }
    }
  }
  return rep;
}

// ---- composition ---------------------------------------------------------

namespace {

const shiftop::CompositionData& composition_data(const shiftop::ShiftOperator& T) {
  if (!T.composition) throw ValidationError("operator was not built by composition");
  return *T.composition;
}

BlockPoint representative(int block, const dynamics::OrbitView& v, int depth) {
  return BlockPoint{block, {}, SymbolPoint::from_word(funcspace::centered_lo(depth), v.word, 0)};
}

}  // namespace

ConstraintSystem composition_constraint_system(const shiftop::ShiftOperator& T, const CompositionKernelOptions& opt) {
  const auto& d = composition_data(T);
  const auto& yb = T.space->block(d.y_block);
  if (!yb.symbol) throw StructuralError("Y has no symbol factor");
  const auto& shape = funcspace::default_layout(T.space).shape[static_cast<std::size_t>(d.y_block - 1)];
  const int depth = yb.symbol->depth;
  const int q = yb.symbol->alphabet;
  const int r = opt.view_depth > 0 ? opt.view_depth : depth + 24;
  const std::int64_t budget = opt.orbit_budget > 0 ? opt.orbit_budget : d.span + 2 * r;
  const int N = d.period;
  const int W = std::max(0, opt.window);
  if (d.seed_depth < depth)
    throw CapacityError("the seed only visits words of length " + std::to_string(d.seed_depth) +
                            ", the window needs " + std::to_string(depth),
                        d.seed_depth);

  auto sys = make_system(T.space, W);
  const bool vanish = std::abs(std::abs(d.d1) - std::abs(d.d2)) <= 1e-12;
  auto key = [&](const BlockPoint& x) { return x.symbol->word_index(shape.lo, shape.depth, q); };

  std::set<std::pair<std::uint64_t, std::uint64_t>> pairs;
  std::set<std::uint64_t> words;
  std::deque<BlockPoint> ring;  // chi^{n-N} 1 .. chi^n 1
  dynamics::OrbitWalker walk(d.chi, d.one, 1, r);
  for (std::int64_t n = 0; n <= budget + N; ++n) {
    if (n > 0) walk.step();
    ring.push_back(representative(d.y_block, walk.view(), r));
    if (static_cast<int>(ring.size()) > N + 1) ring.pop_front();
    const BlockPoint& cur = ring.back();
    if (vanish && words.insert(key(cur)).second) {
      ConstraintRow row{"orbit_vanishing", -1, {}};
      row.terms.emplace_back(cur, 1.0);
      sys.rows.push_back(std::move(row));
    }
    if (static_cast<int>(ring.size()) == N + 1) {
      const BlockPoint& x = ring.front();
      const std::int64_t m = n - N;  // x = chi^m 1
      if (pairs.insert({key(x), key(cur)}).second) {
        ConstraintRow row{"two_point", -1, {}};
        row.terms.emplace_back(x, d.d1);
        row.terms.emplace_back(cur, d.d2);
        sys.rows.push_back(std::move(row));
      }
      if (m >= 1 && m <= W) {
        ConstraintRow row{"finite", static_cast<int>(m), {}};
        row.terms.emplace_back(SeqPoint{m}, 1.0);
        row.terms.emplace_back(x, -d.d1);
        row.terms.emplace_back(cur, -d.d2);
        sys.rows.push_back(std::move(row));
      }
    }
  }

  const Scalar scale = 1.0 - std::pow(d.d1 + d.d2, N);
  for (int k = 0; k < T.space->limit_count(); ++k) {
    ConstraintRow row{"scaling", -1, {}};
    row.terms.emplace_back(LimitRef{k}, scale);
    sys.rows.push_back(std::move(row));
    const auto& adr = T.space->limits[static_cast<std::size_t>(k)].address;
    if (adr) {
      ConstraintRow glue{"glue", 0, {}};
      glue.terms.emplace_back(LimitRef{k}, 1.0);
      glue.terms.emplace_back(*adr, -1.0);
      sys.rows.push_back(std::move(glue));
    }
  }

  if (d.plain_shift) {
    // chi^{qN} fixes a point of period qN, so f(x) = c^q f(x)
    const Scalar c = -d.d2 / d.d1;
    std::set<std::uint64_t> seen;
    for (int qq = 1; qq <= opt.periodic_words; ++qq) {
      const int L = qq * N;
      const Scalar s = 1.0 - std::pow(c, qq);
      if (std::abs(s) <= 1e-12 || L > 16) continue;
      const std::uint64_t count = funcspace::ipow(static_cast<std::uint64_t>(q), L);
      for (std::uint64_t w = 0; w < count; ++w) {
        std::vector<int> pat;
        std::uint64_t x = w;
        for (int i = 0; i < L; ++i) {
          pat.push_back(static_cast<int>(x % static_cast<std::uint64_t>(q)));
          x /= static_cast<std::uint64_t>(q);
        }
        BlockPoint pt{d.y_block, {}, SymbolPoint::periodic(pat)};
        if (!seen.insert(key(pt)).second) continue;
        ConstraintRow row{"periodic", -1, {}};
        row.terms.emplace_back(pt, s);
        sys.rows.push_back(std::move(row));
      }
    }
  }
  return sys;
}

DecayReport composition_kernel_check(const shiftop::ShiftOperator& T, const CompositionKernelOptions& opt) {
  const auto& d = composition_data(T);
  const auto sys = composition_constraint_system(T, opt);
  auto rep = certify_kernel(sys, opt.rank);
  const double s = std::abs(1.0 - std::pow(d.d1 + d.d2, d.period));
  rep.metrics["scaling_factor"] = s;
  rep.metrics["scaling_alone_trivial"] = s > 1e-12 ? 1.0 : 0.0;
  rep.metrics["words_total"] = static_cast<double>(
      funcspace::ipow(static_cast<std::uint64_t>(T.space->block(d.y_block).symbol->alphabet),
                      T.space->block(d.y_block).symbol->depth));
  return rep;
}

// ---- golden arc ----------------------------------------------------------

DecayReport golden_arc_kernel(int degree, double phi, const RankOptions& opt) {
  if (degree < 0) throw ValidationError("degree must be >= 0");
  const std::size_t n = static_cast<std::size_t>(2 * degree + 1);
  std::vector<Scalar> a(n * n, Scalar{0});
  double min_gap = std::numeric_limits<double>::infinity();
  int arg = 0;
  for (int k = -degree; k <= degree; ++k) {
    const std::size_t i = static_cast<std::size_t>(k + degree);
    Scalar dk = k == 0 ? Scalar{phi} : std::polar(1.0, k * kTwoPi * phi) - 1.0;
    a[i * n + i] = dk;
    if (k != 0 && std::abs(dk) < min_gap) {
      min_gap = std::abs(dk);
      arg = k;
    }
  }
  auto rep = certify_dense(n, n, a, opt);
  rep.metrics["min_phase_gap"] = degree > 0 ? min_gap : 1.0;
  rep.metrics["argmin_mode"] = arg;
  rep.metrics["phi"] = phi;
  return rep;
}

std::int64_t fibonacci(int n) {
  if (n < 0) throw ValidationError("fibonacci index must be >= 0");
  std::int64_t a = 0, b = 1;
  for (int i = 0; i < n; ++i) {
    const std::int64_t c = a + b;
    a = b;
    b = c;
  }
  return a;
}

std::vector<BlockPart> random_trig_polys(int count, int degree, std::uint64_t seed) {
  if (count < 0 || degree < 0) throw ValidationError("count and degree must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<BlockPart> out;
  const double sc = 1.0 / std::sqrt(2.0 * degree + 1.0);
  for (int i = 0; i < count; ++i) {
    BlockPart p;
    p.circles = 1;
    p.degree = degree;
    p.coef.assign(static_cast<std::size_t>(2 * degree + 1), Scalar{0});
    p.coef[static_cast<std::size_t>(degree)] = sc * u(rng);
    for (int k = 1; k <= degree; ++k) {
      const Scalar c{sc * u(rng), sc * u(rng)};
      p.coef[static_cast<std::size_t>(degree + k)] = c;
      p.coef[static_cast<std::size_t>(degree - k)] = std::conj(c);
    }
    out.push_back(std::move(p));
  }
  return out;
}

FibonacciReport fibonacci_recursion_check(const std::vector<BlockPart>& polys, int n_max, std::uint64_t seed,
                                          int alphas, double tol) {
  if (n_max < 2) throw ValidationError("n_max must be >= 2");
  if (alphas < 1) throw ValidationError("alphas must be >= 1");
  FibonacciReport rep;
  rep.n_max = n_max;
  rep.trials = static_cast<int>(polys.size());
  rep.phi_identity = std::abs(kPhi + kPhi * kPhi - 1.0);
  for (int n = 0; n <= n_max; ++n) rep.fibonacci.push_back(fibonacci(n));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(0.0, kTwoPi);
  auto arc = [](const BlockPart& p, double s, double len) {
    return shiftop::arc_integral(p, 0, s, len, 1.0, {});
  };
  auto L = [](int k) { return kTwoPi * std::pow(kPhi, k); };

  bool implication = true;
  for (const auto& p : polys) {
    if (p.circles != 1 || p.alphabet != 0) throw ValidationError("arc identities need one-circle parts");
    // per mode, n = 2: the two arcs tile the circle
    for (int k = -p.degree; k <= p.degree; ++k) {
      const Scalar s = shiftop::arc_mode_integral(k, 0, L(2)) + shiftop::arc_mode_integral(k, L(2), L(1));
      rep.base_case_residual = std::max(rep.base_case_residual, std::abs(s - (k == 0 ? kTwoPi : 0.0)));
    }
    const Scalar total = arc(p, 0, kTwoPi);
    std::vector<double> al;
    for (int i = 0; i < alphas; ++i) al.push_back(ua(rng));
    // alpha -> arc(alpha, len) is again a trig polynomial: c_k A_k(0, len) e^{ik alpha}
    std::vector<Scalar> hc(p.coef.size());
    for (int k = -p.degree; k <= p.degree; ++k)
      hc[static_cast<std::size_t>(k + p.degree)] =
          p.coef[static_cast<std::size_t>(k + p.degree)] * shiftop::arc_mode_integral(k, 0, L(1));
    const double hyp = funcspace::trig_sup(hc.data(), p.degree, 4096);
    rep.hypothesis_residual = std::max(rep.hypothesis_residual, hyp);
    for (int k = 1; k <= n_max; ++k)
      for (double a : al) {
        const Scalar r = arc(p, a, L(k - 1)) - arc(p, a, L(k + 1)) - arc(p, a + L(k + 1), L(k));
        rep.additivity_residual = std::max(rep.additivity_residual, std::abs(r));
      }
    for (int n = 1; n <= n_max; ++n) {
      const double sign = n % 2 == 0 ? 1.0 : -1.0;
      const double F = static_cast<double>(fibonacci(n - 1));
      double err = 0;
      for (double a : al) err = std::max(err, std::abs(arc(p, a, L(n)) - sign * F * total));
      rep.claim_residual = std::max(rep.claim_residual, err);
      // the recursion carries the hypothesis defect with weight F(n)
      if (err > static_cast<double>(fibonacci(n)) * hyp * (1.0 + 1e-6) + tol) implication = false;
    }
  }
  rep.hypothesis_holds = rep.hypothesis_residual <= tol;
  rep.implication_holds = implication;
  return rep;
}

}  // namespace shiftlab::verify
