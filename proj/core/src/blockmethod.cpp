#include "shiftlab/blockmethod/blockmethod.hpp"

#include <Eigen/Dense>
#include <numeric>
#include <random>

namespace shiftlab::blockmethod {

int CompatibleSequence::total() const { return std::accumulate(p.begin(), p.end(), 0); }

int CompatibleSequence::max_p() const { return p.empty() ? 0 : *std::max_element(p.begin(), p.end()); }

CompatibleSequence validate_compatible_sequence(std::vector<int> p, bool all, bool allow_integer_multiple) {
  if (p.empty()) throw ValidationError("p must list at least one family");
  for (std::size_t n = 0; n < p.size(); ++n)
    if (p[n] < 1) throw ValidationError("p_" + std::to_string(n + 1) + " = " + std::to_string(p[n]) + " is not positive");
  if (p.size() == 1 && !all && p[0] <= 1) throw ValidationError("a single family needs p_1 > 1 (got p_1 = 1)");
  for (std::size_t n = 0; n + 1 < p.size(); ++n) {
    const int a = p[n], b = p[n + 1];
    const std::string pair = "(p_" + std::to_string(n + 1) + ", p_" + std::to_string(n + 2) + ") = (" +
                             std::to_string(a) + ", " + std::to_string(b) + ")";
    if (b % a != 0) throw ValidationError(pair + ": ratio is not an integer");
    const int r = b / a;
    if (allow_integer_multiple) {
      if (r < 2) throw ValidationError(pair + ": p_{n+1} must be a larger multiple of p_n");
    } else if (r % 2 != 0) {
      throw ValidationError(pair + ": ratio " + std::to_string(r) + " is not even");
    }
  }
  CompatibleSequence s;
  s.p = std::move(p);
  s.all = all;
  s.integer_multiple = allow_integer_multiple;
  return s;
}

int BlockIndex::total() const { return std::accumulate(p.begin(), p.end(), 0); }

int BlockIndex::a(int n, int j) const {
  if (n < 1 || n > families()) throw StructuralError("family " + std::to_string(n) + " does not exist");
  if (j < 1 || j > p[n - 1]) throw StructuralError("a_j^n with j outside 1..p_n");
  return start[n - 1] + j - 1;
}

int BlockIndex::pi(int k) const {
  for (int n = families(); n >= 1; --n)
    if (k >= start[n - 1]) {
      if (k >= start[n - 1] + p[n - 1]) break;
      return n;
    }
  throw StructuralError("block " + std::to_string(k) + " is not in any A_n");
}

int BlockIndex::position(int k) const { return k - start[pi(k) - 1] + 1; }

int BlockIndex::s(int k) const {
  const int n = pi(k);
  const int j = position(k);
  return j == 1 ? a(n, p[n - 1]) : k - 1;
}

std::vector<int> BlockIndex::s_table(int n) const {
  const int pn = p.at(static_cast<std::size_t>(n - 1));
  std::vector<int> t(static_cast<std::size_t>(pn));
  t[0] = pn;
  for (int j = 2; j <= pn; ++j) t[j - 1] = j - 1;
  return t;
}

BlockIndex build_block_index(const CompatibleSequence& seq) {
  BlockIndex idx;
  idx.p = seq.p;
  int next = 1;
  for (int pn : seq.p) {
    idx.start.push_back(next);
    next += pn;
  }
  return idx;
}

std::vector<Scalar> SkewCirculant::row(int i) const {
  return {entries.begin() + i * order, entries.begin() + (i + 1) * order};
}

SkewCirculant build_skew_circulant(const std::vector<Scalar>& g) {
  SkewCirculant m;
  m.order = static_cast<int>(g.size());
  const int p = m.order;
  m.entries.resize(static_cast<std::size_t>(p * p));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) m.entries[i * p + j] = j < i ? -g[p - i + j] : g[j - i];
  if (p > 0) {
    Eigen::MatrixXcd a(p, p);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) a(i, j) = m.at(i, j);
    m.det = a.determinant();
  }
  return m;
}

bool check_skew_structure(const SkewCirculant& m) {
  const int p = m.order;
  for (int i = 0; i + 1 < p; ++i) {
    if (m.at(i + 1, 0) != -m.at(i, p - 1)) return false;
    for (int j = 1; j < p; ++j)
      if (m.at(i + 1, j) != m.at(i, j - 1)) return false;
  }
  return true;
}

std::vector<Scalar> gamma_block(const GammaConfig& g, const BlockIndex& index, int n) {
  std::vector<Scalar> out;
  for (int j = 1; j <= index.p.at(static_cast<std::size_t>(n - 1)); ++j) out.push_back(g.at(index.a(n, j)));
  return out;
}

SkewCirculant family_matrix(const GammaConfig& g, const BlockIndex& index, int n) {
  return build_skew_circulant(gamma_block(g, index, n));
}

GammaConfig make_gamma_config(std::vector<Scalar> gamma, const BlockIndex& index, ScalarField field,
                              const GammaOptions& opt, double tail_mass) {
  if (static_cast<int>(gamma.size()) != index.total())
    throw ValidationError("gamma has " + std::to_string(gamma.size()) + " entries, the blocks need " +
                          std::to_string(index.total()));
  GammaConfig g;
  g.field = field;
  g.tail_mass = tail_mass;
  int nonzero = 0;
  for (const auto& x : gamma) {
    if (field == ScalarField::Real && x.imag() != 0) throw ValidationError("complex gamma entry over the real field");
    if (x != Scalar{0}) ++nonzero;
    g.mass += std::abs(x);
  }
  if (nonzero < 2) throw ValidationError("gamma needs at least two nonzero entries");
  if (g.mass + tail_mass > 1.0 + 1e-12)
    throw ValidationError("sum |gamma_m| = " + std::to_string(g.mass + tail_mass) + " exceeds 1");
  g.gamma = std::move(gamma);
  for (int n = 1; n <= index.families(); ++n) {
    auto blk = gamma_block(g, index, n);
    const auto m = build_skew_circulant(blk);
    double norm2 = 0;
    for (const auto& x : blk) norm2 += std::norm(x);
    const double scale = std::pow(std::sqrt(norm2), m.order);
    g.dets.push_back(m.det);
    if (!(std::abs(m.det) > opt.det_rel_tol * scale)) {
      if (!opt.allow_singular)
        throw ValidationError("det M_" + std::to_string(n) + " vanishes (|det| = " + std::to_string(std::abs(m.det)) +
                              ")");
      g.singular = true;
    }
  }
  return g;
}

std::vector<Scalar> v_vector(const GammaConfig& g, const BlockIndex& index, int n, int i) {
  if (n < 1 || n > index.families()) throw StructuralError("family " + std::to_string(n) + " does not exist");
  const int p = index.p[n - 1];
  if (i < 0 || i >= 2 * p) throw StructuralError("v_i^n needs 0 <= i < 2 p_n, got i = " + std::to_string(i));
  const auto blk = gamma_block(g, index, n);
  const int r = i % p;
  const double sign = i >= p ? -1.0 : 1.0;
  std::vector<Scalar> v(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) v[j] = sign * (j < r ? -blk[p - r + j] : blk[j - r]);
  return v;
}

std::vector<Scalar> telescoping_sum(const GammaConfig& g, const BlockIndex& index, int n, int count) {
  const int p = index.p.at(static_cast<std::size_t>(n - 1));
  std::vector<Scalar> acc(static_cast<std::size_t>(p), 0.0);
  for (int k = 1; k <= count; ++k) {
    auto v = v_vector(g, index, n, k % (2 * p));
    for (int j = 0; j < p; ++j) acc[j] += v[j];
  }
  return acc;
}

GammaConfig default_gamma_search(const CompatibleSequence& seq, ScalarField field, std::uint64_t seed,
                                 int max_tries) {
  const auto index = build_block_index(seq);
  const int total = index.total();
  const double tail = seq.all ? std::ldexp(1.0, -total) : 0.0;
  std::vector<Scalar> g(static_cast<std::size_t>(total));
  std::string last;
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    if (attempt == 0) {
      for (int m = 1; m <= total; ++m) g[m - 1] = std::ldexp(1.0, -m);
    } else {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      double mass = 0;
      for (int m = 1; m <= total; ++m) {
        g[m - 1] = std::ldexp(1.0, -m) * (1.0 + 0.25 * u(rng));
        mass += std::abs(g[m - 1]);
      }
      if (mass + tail > 1.0)
        for (auto& x : g) x *= (1.0 - tail) / mass;
    }
    try {
      return make_gamma_config(g, index, field, {}, tail);
    } catch (const ValidationError& e) {
      last = e.what();
    }
  }
  throw CapacityError("no admissible gamma after " + std::to_string(max_tries) + " tries: " + last, max_tries);
}

funcspace::BlockPoint lift_point(int m, const funcspace::BlockPoint& z, int nsub) {
  funcspace::BlockPoint x = z;
  x.block = (m - 1) * nsub + z.block;
  return x;
}

shiftop::Functional block_delta(const GammaConfig& g, const BlockIndex& index,
                                const std::vector<funcspace::BlockPoint>& base, int nsub) {
  if (static_cast<int>(base.size()) != index.families())
    throw StructuralError("block functional needs one base point per family");
  std::vector<funcspace::PointRef> pts;
  std::vector<Scalar> w;
  for (int n = 1; n <= index.families(); ++n)
    for (int j = 1; j <= index.p[n - 1]; ++j) {
      const int m = index.a(n, j);
      if (g.at(m) == Scalar{0}) continue;
      pts.emplace_back(lift_point(m, base[n - 1], nsub));
      w.push_back(g.at(m));
    }
  return shiftop::point_combo(std::move(pts), std::move(w), "block_delta");
}

}  // namespace shiftlab::blockmethod
