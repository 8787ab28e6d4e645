#include "shiftlab/funcspace/function.hpp"

#include <queue>

namespace shiftlab::funcspace {

namespace {

constexpr double kGlueTol = 1e-12;
constexpr std::size_t kMaxTable = std::size_t{1} << 24;

std::size_t mode_count(int circles, int degree) {
  return static_cast<std::size_t>(ipow(static_cast<std::uint64_t>(2 * degree + 1), circles));
}

// e^{i k theta} for k = -degree..degree
std::vector<Scalar> exp_table(double theta, int degree) {
  std::vector<Scalar> e(static_cast<std::size_t>(2 * degree + 1));
  const Scalar z = std::polar(1.0, theta);
  Scalar w = 1.0;
  e[degree] = 1.0;
  for (int k = 1; k <= degree; ++k) {
    w *= z;
    e[degree + k] = w;
    e[degree - k] = std::conj(w);
  }
  return e;
}

Scalar fourier_value(const Scalar* c, int circles, int degree, const std::vector<double>& angles) {
  if (circles == 0) return c[0];
  const std::size_t width = 2 * degree + 1;
  if (circles == 1) {
    // Horner in z, then undo the z^{-degree} offset
    const Scalar z = std::polar(1.0, angles[0]);
    Scalar acc = 0;
    for (std::size_t j = width; j-- > 0;) acc = acc * z + c[j];
    return acc * std::polar(1.0, -degree * angles[0]);
  }
  std::vector<std::vector<Scalar>> e;
  e.reserve(circles);
  for (int j = 0; j < circles; ++j) e.push_back(exp_table(angles[j], degree));
  // contract the last factor first
  std::vector<Scalar> cur(c, c + mode_count(circles, degree));
  for (int j = circles - 1; j >= 0; --j) {
    const std::size_t inner = mode_count(j, degree);
    std::vector<Scalar> next(inner, 0.0);
    for (std::size_t k = 0; k < width; ++k)
      for (std::size_t r = 0; r < inner; ++r) next[r] += cur[k * inner + r] * e[j][k];
    cur.swap(next);
  }
  return cur[0];
}

double l1(const Scalar* c, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += std::abs(c[i]);
  return s;
}

template <class F>
double golden_max(F&& g, double a, double b, int iters = 64) {
  const double r = kPhi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = g(x1), f2 = g(x2);
  double best = std::max(f1, f2);
  for (int it = 0; it < iters && b - a > 1e-15; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = g(x2);
      best = std::max(best, f2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = g(x1);
      best = std::max(best, f1);
    }
  }
  return best;
}

// grid sup over circles >= 2, then coordinate ascent from the best cells
double multi_sup(const Scalar* c, int circles, int degree, int resolution) {
  const std::size_t width = 2 * degree + 1;
  int res = resolution;
  const double cap = std::pow(2.0, 22.0 / circles);
  if (res > cap) res = std::max(2, static_cast<int>(cap));
  const double h = kTwoPi / res;

  std::vector<std::vector<Scalar>> grid_exp(res);
  for (int i = 0; i < res; ++i) grid_exp[i] = exp_table(i * h, degree);

  const std::size_t outer_pts = ipow(static_cast<std::uint64_t>(res), circles - 1);
  const std::size_t inner = mode_count(circles - 1, degree);  // modes of factors 1..c-1
  using Cell = std::pair<double, std::size_t>;               // value, flat grid index
  std::priority_queue<Cell, std::vector<Cell>, std::greater<>> top;
  const std::size_t keep = 8;
  double best = 0;

  std::vector<int> idx(static_cast<std::size_t>(circles - 1), 0);
  std::vector<Scalar> g(width);
  for (std::size_t o = 0; o < outer_pts; ++o) {
    // 1D coefficients in factor 0 at this setting of the others
    std::fill(g.begin(), g.end(), Scalar{0});
    for (std::size_t r = 0; r < inner; ++r) {
      Scalar w = 1.0;
      std::size_t rr = r;
      for (int j = 0; j < circles - 1; ++j) {
        w *= grid_exp[idx[j]][rr % width];
        rr /= width;
      }
      for (std::size_t k = 0; k < width; ++k) g[k] += c[r * width + k] * w;
    }
    for (int i = 0; i < res; ++i) {
      const Scalar z = std::polar(1.0, i * h);
      Scalar acc = 0;
      for (std::size_t j = width; j-- > 0;) acc = acc * z + g[j];
      const double v = std::abs(acc);
      best = std::max(best, v);
      if (top.size() < keep || v > top.top().first) {
        top.emplace(v, o * res + i);
        if (top.size() > keep) top.pop();
      }
    }
    for (int j = 0; j < circles - 1 && ++idx[j] == res; ++j) idx[j] = 0;
  }

  while (!top.empty()) {
    auto [v, flat] = top.top();
    top.pop();
    std::vector<double> th(circles);
    th[0] = (flat % res) * h;
    std::size_t rest = flat / res;
    for (int j = 1; j < circles; ++j) {
      th[j] = (rest % res) * h;
      rest /= res;
    }
    double cur = v;
    for (int sweep = 0; sweep < 24; ++sweep) {
      const double before = cur;
      for (int j = 0; j < circles; ++j) {
        double arg = th[j];
        auto val = [&](double t) {
          auto a = th;
          a[j] = t;
          return std::abs(fourier_value(c, circles, degree, a));
        };
        // golden section, then keep the argmax
        double lo = arg - h, hi = arg + h;
        const double r = kPhi;
        double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
        double f1 = val(x1), f2 = val(x2);
        for (int it = 0; it < 48; ++it) {
          if (f1 < f2) {
            lo = x1; x1 = x2; f1 = f2; x2 = lo + r * (hi - lo); f2 = val(x2);
          } else {
            hi = x2; x2 = x1; f2 = f1; x1 = hi - r * (hi - lo); f1 = val(x1);
          }
        }
        const double t = 0.5 * (lo + hi);
        const double ft = val(t);
        if (ft > cur) {
          cur = ft;
          th[j] = t;
        }
      }
      if (cur - before <= 1e-16 * std::max(1.0, cur)) break;
    }
    best = std::max(best, cur);
  }
  return best;
}

void check_same_space(const BlockFunction& f, const BlockFunction& g) {
  if (f.space != g.space && !(f.space && g.space && same_shape(*f.space, *g.space)))
    throw StructuralError("functions live on different spaces");
}

// raise the Fourier truncation (zero padding)
BlockPart pad_degree(const BlockPart& p, int degree) {
  if (p.degree == degree || p.circles == 0) return p;
  BlockPart out = p;
  out.degree = degree;
  const std::size_t m_old = p.modes(), m_new = out.modes();
  out.coef.assign(p.words() * m_new, 0.0);
  for (std::size_t m = 0; m < m_old; ++m) {
    auto k = mode_degrees(m, p.circles, p.degree);
    const std::size_t mn = mode_index(k, degree);
    for (std::size_t w = 0; w < p.words(); ++w) out.coef[w * m_new + mn] = p.coef[w * m_old + m];
  }
  return out;
}

void check_real(const BlockFunction& f) {
  const double tol = 1e-12;
  for (const auto& p : f.parts) {
    const std::size_t modes = p.modes();
    for (std::size_t m = 0; m < modes; ++m) {
      auto k = mode_degrees(m, p.circles, p.degree);
      for (auto& v : k) v = -v;
      const std::size_t mm = mode_index(k, p.degree);
      for (std::size_t w = 0; w < p.words(); ++w)
        if (std::abs(p.coef[w * modes + m] - std::conj(p.coef[w * modes + mm])) >
            tol * std::max(1.0, std::abs(p.coef[w * modes + m])))
          throw ValidationError("REAL function breaks conjugate symmetry of its Fourier table");
    }
  }
  for (const auto& v : f.head)
    if (std::abs(v.imag()) > tol) throw ValidationError("REAL function has a complex sequence value");
  for (const auto& v : f.limits)
    if (std::abs(v.imag()) > tol) throw ValidationError("REAL function has a complex limit value");
}

}  // namespace

std::size_t BlockPart::modes() const { return mode_count(circles, degree); }

std::size_t BlockPart::words() const {
  return alphabet == 0 ? 1 : static_cast<std::size_t>(ipow(static_cast<std::uint64_t>(alphabet), depth));
}

Scalar BlockPart::value(const std::vector<double>& angles, const SymbolPoint* symbol) const {
  std::size_t w = 0;
  if (alphabet > 0) {
    if (!symbol) throw StructuralError("block part needs a symbol coordinate");
    w = static_cast<std::size_t>(symbol->word_index(lo, depth, alphabet));
  }
  if (static_cast<int>(angles.size()) != circles)
    throw StructuralError("angle count does not match the block part");
  return fourier_value(coef.data() + w * modes(), circles, degree, angles);
}

BlockPart zero_part(const BlockDescriptor& b) {
  BlockPart p;
  p.circles = b.circles;
  p.degree = b.circles ? b.degree : 0;
  if (b.symbol) {
    p.alphabet = b.symbol->alphabet;
    p.depth = b.symbol->depth;
    p.lo = centered_lo(p.depth);
  }
  const double size = std::pow(static_cast<double>(std::max(p.alphabet, 1)), p.depth) *
                      static_cast<double>(p.modes());
  if (size > static_cast<double>(kMaxTable))
    throw CapacityError("coefficient table too large for block " + std::to_string(b.id), 0);
  p.coef.assign(p.words() * p.modes(), 0.0);
  return p;
}

BlockPart embed_window(const BlockPart& part, std::int64_t lo, int depth) {
  if (part.alphabet == 0) return part;
  if (lo == part.lo && depth == part.depth) return part;
  if (lo > part.lo || lo + depth < part.lo + part.depth)
    throw StructuralError("embedding window does not contain the part's window");
  const double size = std::pow(static_cast<double>(part.alphabet), depth) * static_cast<double>(part.modes());
  if (size > static_cast<double>(kMaxTable))
    throw CapacityError("cylinder window too deep", depth);
  BlockPart out = part;
  out.lo = lo;
  out.depth = depth;
  const std::size_t modes = part.modes();
  const std::size_t words = out.words();
  out.coef.assign(words * modes, 0.0);
  const std::size_t off = static_cast<std::size_t>(part.lo - lo);
  const std::uint64_t q = static_cast<std::uint64_t>(part.alphabet);
  const std::uint64_t below = ipow(q, static_cast<int>(off));
  const std::uint64_t span = ipow(q, part.depth);
  for (std::size_t w = 0; w < words; ++w) {
    const std::size_t old = static_cast<std::size_t>((w / below) % span);
    std::copy_n(part.coef.begin() + old * modes, modes, out.coef.begin() + w * modes);
  }
  return out;
}

std::vector<int> mode_degrees(std::size_t mode, int circles, int degree) {
  std::vector<int> k(static_cast<std::size_t>(circles));
  const std::size_t width = 2 * degree + 1;
  for (int j = 0; j < circles; ++j) {
    k[j] = static_cast<int>(mode % width) - degree;
    mode /= width;
  }
  return k;
}

std::size_t mode_index(const std::vector<int>& k, int degree) {
  const std::size_t width = 2 * degree + 1;
  std::size_t m = 0, mult = 1;
  for (int v : k) {
    if (std::abs(v) > degree) throw CapacityError("Fourier degree above truncation", degree);
    m += static_cast<std::size_t>(v + degree) * mult;
    mult *= width;
  }
  return m;
}

Scalar BlockFunction::seq_value(std::int64_t n) const {
  if (n < 1) throw StructuralError("sequence points start at 1");
  if (n <= static_cast<std::int64_t>(head.size())) return head[static_cast<std::size_t>(n - 1)];
  return limits[static_cast<std::size_t>(floor_mod(n, static_cast<std::int64_t>(limits.size())))];
}

Scalar eval_function(const BlockFunction& f, const PointRef& x) {
  f.space->check_point(x);
  if (auto* p = std::get_if<BlockPoint>(&x))
    return f.parts[static_cast<std::size_t>(p->block - 1)].value(p->angles,
                                                                p->symbol ? &*p->symbol : nullptr);
  if (auto* s = std::get_if<SeqPoint>(&x)) return f.seq_value(s->n);
  return f.limits[static_cast<std::size_t>(std::get<LimitRef>(x).index)];
}

double trig_sup(const Scalar* c, int degree, int resolution) {
  if (degree == 0) return std::abs(c[0]);
  const std::size_t width = 2 * degree + 1;
  const int res = std::max(resolution, 2);
  const double h = kTwoPi / res;
  auto val = [&](double t) {
    const Scalar z = std::polar(1.0, t);
    Scalar acc = 0;
    for (std::size_t j = width; j-- > 0;) acc = acc * z + c[j];
    return std::abs(acc);
  };
  std::vector<double> v(static_cast<std::size_t>(res));
  double gmax = 0;
  for (int i = 0; i < res; ++i) {
    v[i] = val(i * h);
    gmax = std::max(gmax, v[i]);
  }
  // between grid points |f| can rise by at most ~ degree^2 |c|_1 h^2 / 8;
  // only maxima that close to the top can carry the sup
  const double slack = 0.5 * degree * degree * l1(c, width) * h * h;
  double best = gmax;
  for (int i = 0; i < res; ++i) {
    const double prev = v[(i + res - 1) % res], next = v[(i + 1) % res];
    if (v[i] < prev || v[i] <= next) continue;
    if (v[i] < gmax - slack) continue;
    best = std::max(best, golden_max(val, i * h - h, i * h + h));
  }
  return best;
}

double sup_norm_part(const BlockPart& part, int resolution) {
  const std::size_t modes = part.modes();
  double best = 0;
  for (std::size_t w = 0; w < part.words(); ++w) {
    const Scalar* c = part.coef.data() + w * modes;
    if (part.circles == 0) {
      best = std::max(best, std::abs(c[0]));
    } else if (l1(c, modes) > best) {  // |f| <= |c|_1, skip words that cannot win
      best = std::max(best, part.circles == 1 ? trig_sup(c, part.degree, resolution)
                                             : multi_sup(c, part.circles, part.degree, resolution));
    }
  }
  return best;
}

SupNorm sup_norm_detail(const BlockFunction& f, int resolution) {
  SupNorm out;
  for (const auto& v : f.head) out.value = std::max(out.value, std::abs(v));
  for (const auto& v : f.limits) out.value = std::max(out.value, std::abs(v));
  for (const auto& p : f.parts) {
    out.value = std::max(out.value, sup_norm_part(p, resolution));
    if (p.circles > 0) out.sampled = true;
  }
  return out;
}

double sup_norm(const BlockFunction& f, int resolution) { return sup_norm_detail(f, resolution).value; }

BlockFunction zero_function(const SpacePtr& space) {
  BlockFunction f;
  f.space = space;
  for (const auto& b : space->blocks) f.parts.push_back(zero_part(b));
  f.limits.assign(space->limits.size(), 0.0);
  return f;
}

BlockFunction constant_function(const SpacePtr& space, Scalar c) {
  BlockFunction f = zero_function(space);
  for (auto& p : f.parts) {
    const std::size_t m0 = mode_index(std::vector<int>(p.circles, 0), p.degree);
    for (std::size_t w = 0; w < p.words(); ++w) p.at(w, m0) = c;
  }
  std::fill(f.limits.begin(), f.limits.end(), c);
  return f;
}

BlockFunction block_indicator(const SpacePtr& space, int block) {
  space->block(block);
  BlockFunction f = zero_function(space);
  auto& p = f.parts[static_cast<std::size_t>(block - 1)];
  const std::size_t m0 = mode_index(std::vector<int>(p.circles, 0), p.degree);
  for (std::size_t w = 0; w < p.words(); ++w) p.at(w, m0) = 1.0;
  refresh_glue(f);
  return f;
}

BlockFunction sequence_indicator(const SpacePtr& space) {
  BlockFunction f = zero_function(space);
  for (std::size_t k = 0; k < f.limits.size(); ++k)
    if (space->limits[k].free()) f.limits[k] = 1.0;
  // with glued limits the indicator is not continuous; write the sequence out
  bool glued = false;
  for (const auto& l : space->limits) glued = glued || !l.free();
  if (glued) throw ValidationError("sequence indicator is discontinuous when limits are glued");
  return f;
}

BlockFunction point_one_indicator(const SpacePtr& space) {
  BlockFunction f = zero_function(space);
  f.head = {1.0};
  return f;
}

BlockFunction assemble_block_function(const SpacePtr& space, std::vector<BlockPart> parts,
                                      std::vector<Scalar> seq, std::vector<Scalar> limits) {
  if (static_cast<int>(parts.size()) != space->block_count())
    throw StructuralError("expected " + std::to_string(space->block_count()) + " block parts, got " +
                          std::to_string(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto& b = space->blocks[i];
    const auto& p = parts[i];
    const int q = b.symbol ? b.symbol->alphabet : 0;
    if (p.circles != b.circles || p.alphabet != q)
      throw StructuralError("part " + std::to_string(i + 1) + " does not match its block's factors");
    if (p.circles > 0 && p.degree > b.degree)
      throw CapacityError("part " + std::to_string(i + 1) + " exceeds the Fourier truncation", b.degree);
    if (p.coef.size() != p.words() * p.modes())
      throw StructuralError("part " + std::to_string(i + 1) + " has a malformed coefficient table");
  }
  if (static_cast<int>(limits.size()) != space->limit_count())
    throw StructuralError("expected " + std::to_string(space->limit_count()) + " limit values");
  BlockFunction f{space, std::move(parts), std::move(seq), std::move(limits)};
  for (std::size_t i = 0; i < f.parts.size(); ++i)
    if (f.parts[i].circles > 0) f.parts[i] = pad_degree(f.parts[i], space->blocks[i].degree);
  for (std::size_t k = 0; k < f.limits.size(); ++k) {
    const auto& addr = space->limits[k].address;
    if (!addr) continue;
    const Scalar there = eval_function(f, *addr);
    if (std::abs(there - f.limits[k]) > kGlueTol * std::max(1.0, std::abs(there)))
      throw ValidationError("glue violation at limit " + std::to_string(k) + ": limit value differs from " +
                            describe(*addr));
  }
  if (space->field == ScalarField::Real) check_real(f);
  return f;
}

void refresh_glue(BlockFunction& f) {
  for (std::size_t k = 0; k < f.limits.size(); ++k)
    if (const auto& addr = f.space->limits[k].address) f.limits[k] = eval_function(f, *addr);
}

double glue_defect(const BlockFunction& f) {
  double d = 0;
  for (std::size_t k = 0; k < f.limits.size(); ++k)
    if (const auto& addr = f.space->limits[k].address)
      d = std::max(d, std::abs(eval_function(f, *addr) - f.limits[k]));
  return d;
}

BlockFunction scale(const BlockFunction& f, Scalar s) {
  BlockFunction g = f;
  for (auto& p : g.parts)
    for (auto& c : p.coef) c *= s;
  for (auto& v : g.head) v *= s;
  for (auto& v : g.limits) v *= s;
  return g;
}

BlockFunction combine(Scalar alpha, const BlockFunction& f, Scalar beta, const BlockFunction& g) {
  check_same_space(f, g);
  BlockFunction out;
  out.space = f.space;
  out.parts.reserve(f.parts.size());
  for (std::size_t i = 0; i < f.parts.size(); ++i) {
    BlockPart a = f.parts[i], b = g.parts[i];
    if (a.degree != b.degree) {
      const int d = std::max(a.degree, b.degree);
      a = pad_degree(a, d);
      b = pad_degree(b, d);
    }
    if (a.alphabet > 0) {
      const std::int64_t lo = std::min(a.lo, b.lo);
      const std::int64_t hi = std::max(a.lo + a.depth, b.lo + b.depth);
      a = embed_window(a, lo, static_cast<int>(hi - lo));
      b = embed_window(b, lo, static_cast<int>(hi - lo));
    }
    for (std::size_t j = 0; j < a.coef.size(); ++j) a.coef[j] = alpha * a.coef[j] + beta * b.coef[j];
    out.parts.push_back(std::move(a));
  }
  const std::size_t len = std::max(f.head.size(), g.head.size());
  out.head.resize(len);
  for (std::size_t n = 1; n <= len; ++n)
    out.head[n - 1] = alpha * f.seq_value(static_cast<std::int64_t>(n)) +
                      beta * g.seq_value(static_cast<std::int64_t>(n));
  out.limits.resize(f.limits.size());
  for (std::size_t k = 0; k < f.limits.size(); ++k) out.limits[k] = alpha * f.limits[k] + beta * g.limits[k];
  return out;
}

BlockFunction subtract(const BlockFunction& f, const BlockFunction& g) { return combine(1.0, f, -1.0, g); }

BlockFunction random_function(const SpacePtr& space, std::mt19937_64& rng, const RandomOptions& opt) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const bool real = space->field == ScalarField::Real;
  auto draw = [&] { return real ? Scalar(u(rng), 0.0) : Scalar(u(rng), u(rng)); };
  BlockFunction f = zero_function(space);
  for (auto& p : f.parts) {
    const std::size_t modes = p.modes();
    const double s = opt.fourier_scale > 0 ? opt.fourier_scale : 1.0 / std::sqrt(static_cast<double>(modes));
    for (std::size_t w = 0; w < p.words(); ++w) {
      for (std::size_t m = 0; m < modes; ++m) {
        auto k = mode_degrees(m, p.circles, p.degree);
        for (auto& v : k) v = -v;
        const std::size_t mm = mode_index(k, p.degree);
        if (!real) {
          p.at(w, m) = s * draw();
        } else if (m == mm) {
          p.at(w, m) = s * u(rng);
        } else if (m < mm) {
          p.at(w, m) = s * Scalar(u(rng), u(rng));
          p.at(w, mm) = std::conj(p.at(w, m));
        }
      }
    }
  }
  const int len = opt.head_len >= 0 ? opt.head_len : space->sequence_len;
  f.head.resize(static_cast<std::size_t>(len));
  for (auto& v : f.head) v = draw();
  for (std::size_t k = 0; k < f.limits.size(); ++k)
    if (space->limits[k].free()) f.limits[k] = draw();
  refresh_glue(f);
  return f;
}

CoefficientLayout default_layout(const SpacePtr& space) {
  CoefficientLayout l;
  l.space = space;
  for (const auto& b : space->blocks) {
    l.offset.push_back(l.dim);
    l.shape.push_back(zero_part(b));
    l.dim += l.shape.back().coef.size();
  }
  return l;
}

SparseRow evaluation_row(const CoefficientLayout& layout, const BlockPoint& x) {
  layout.space->check_point(x);
  const auto& shape = layout.shape[static_cast<std::size_t>(x.block - 1)];
  std::size_t w = 0;
  if (shape.alphabet > 0) w = static_cast<std::size_t>(x.symbol->word_index(shape.lo, shape.depth, shape.alphabet));
  const std::size_t modes = shape.modes();
  const std::size_t base = layout.offset[static_cast<std::size_t>(x.block - 1)] + w * modes;
  SparseRow row;
  row.reserve(modes);
  if (shape.circles == 0) {
    row.emplace_back(base, 1.0);
    return row;
  }
  std::vector<std::vector<Scalar>> e;
  for (double t : x.angles) e.push_back(exp_table(t, shape.degree));
  const std::size_t width = 2 * shape.degree + 1;
  for (std::size_t m = 0; m < modes; ++m) {
    Scalar v = 1.0;
    std::size_t mm = m;
    for (int j = 0; j < shape.circles; ++j) {
      v *= e[j][mm % width];
      mm /= width;
    }
    row.emplace_back(base + m, v);
  }
  return row;
}

std::vector<Scalar> layout_coefficients(const CoefficientLayout& layout, const BlockFunction& f) {
  std::vector<Scalar> out(layout.dim, 0.0);
  for (std::size_t i = 0; i < layout.shape.size(); ++i) {
    const auto& s = layout.shape[i];
    BlockPart p = f.parts[i];
    if (p.circles > 0 && p.degree != s.degree) {
      if (p.degree > s.degree) throw CapacityError("function exceeds the layout's truncation", s.degree);
      p = pad_degree(p, s.degree);
    }
    if (p.alphabet > 0) p = embed_window(p, s.lo, s.depth);
    std::copy(p.coef.begin(), p.coef.end(), out.begin() + static_cast<std::ptrdiff_t>(layout.offset[i]));
  }
  return out;
}

}  // namespace shiftlab::funcspace
