#include "shiftlab/funcspace/symbol.hpp"

#include <numeric>
#include <stdexcept>

#include "shiftlab/common.hpp"

namespace shiftlab::funcspace {

namespace {

const std::shared_ptr<const std::vector<int>>& empty_core() {
  static const auto e = std::make_shared<const std::vector<int>>();
  return e;
}

std::vector<int> rotate_tail(const std::vector<int>& t, std::int64_t s) {
  const auto n = static_cast<std::int64_t>(t.size());
  std::vector<int> out(t.size());
  for (std::int64_t r = 0; r < n; ++r) out[r] = t[floor_mod(r + s, n)];
  return out;
}

bool single_letter(const std::vector<int>& t, int* letter) {
  for (int v : t)
    if (v != t.front()) return false;
  if (letter) *letter = t.front();
  return true;
}

}  // namespace

SymbolPoint::SymbolPoint() : core_(empty_core()) {}

SymbolPoint SymbolPoint::constant(int letter) {
  SymbolPoint x;
  x.left_ = {letter};
  x.right_ = {letter};
  return x;
}

SymbolPoint SymbolPoint::periodic(std::vector<int> pattern) {
  if (pattern.empty()) throw StructuralError("periodic pattern must be nonempty");
  SymbolPoint x;
  x.left_ = pattern;
  x.right_ = std::move(pattern);
  return x;
}

SymbolPoint SymbolPoint::from_word(std::int64_t lo, std::vector<int> letters, int fill) {
  return with_tails(lo, std::move(letters), {fill}, {fill});
}

SymbolPoint SymbolPoint::with_tails(std::int64_t lo, std::vector<int> core, std::vector<int> left,
                                    std::vector<int> right) {
  if (left.empty() || right.empty()) throw StructuralError("symbol tails must be nonempty");
  SymbolPoint x;
  x.lo_ = lo;
  x.core_ = std::make_shared<const std::vector<int>>(std::move(core));
  x.left_ = std::move(left);
  x.right_ = std::move(right);
  return x;
}

int SymbolPoint::at(std::int64_t m) const {
  if (m < lo_) return left_[floor_mod(m, static_cast<std::int64_t>(left_.size()))];
  if (m >= hi()) return right_[floor_mod(m, static_cast<std::int64_t>(right_.size()))];
  return (*core_)[static_cast<std::size_t>(m - lo_)];
}

SymbolPoint SymbolPoint::shifted(std::int64_t s) const {
  SymbolPoint y = *this;
  y.lo_ = lo_ - s;
  y.left_ = rotate_tail(left_, s);
  y.right_ = rotate_tail(right_, s);
  return y;
}

std::vector<int> SymbolPoint::read(std::int64_t lo, int depth) const {
  std::vector<int> out(static_cast<std::size_t>(depth));
  for (int t = 0; t < depth; ++t) out[t] = at(lo + t);
  return out;
}

std::uint64_t SymbolPoint::word_index(std::int64_t lo, int depth, int q) const {
  std::uint64_t idx = 0, mult = 1;
  for (int t = 0; t < depth; ++t) {
    idx += mult * static_cast<std::uint64_t>(at(lo + t));
    mult *= static_cast<std::uint64_t>(q);
  }
  return idx;
}

bool SymbolPoint::constant_tails(int* letter) const {
  int a = 0, b = 0;
  if (!single_letter(left_, &a) || !single_letter(right_, &b) || a != b) return false;
  if (letter) *letter = a;
  return true;
}

int SymbolPoint::max_letter() const {
  int m = 0;
  for (int v : *core_) m = std::max(m, v);
  for (int v : left_) m = std::max(m, v);
  for (int v : right_) m = std::max(m, v);
  return m;
}

bool operator==(const SymbolPoint& a, const SymbolPoint& b) {
  std::int64_t period = std::lcm(std::lcm(static_cast<std::int64_t>(a.left_.size()),
                                          static_cast<std::int64_t>(b.left_.size())),
                                 std::lcm(static_cast<std::int64_t>(a.right_.size()),
                                          static_cast<std::int64_t>(b.right_.size())));
  // past both cores the two sequences are periodic with a common period
  std::int64_t from = std::min(a.lo(), b.lo()) - period;
  std::int64_t to = std::max(a.hi(), b.hi()) + period;
  for (std::int64_t m = from; m < to; ++m)
    if (a.at(m) != b.at(m)) return false;
  return true;
}

std::int64_t digit_position(int k) { return (k % 2 == 0) ? k / 2 : -(k + 1) / 2; }

int position_digit(std::int64_t m) {
  return static_cast<int>(m >= 0 ? 2 * m : -2 * m - 1);
}

std::int64_t centered_lo(int depth) { return -(depth / 2); }

int centered_depth_covering(std::int64_t lo, int depth) {
  std::int64_t h = lo + depth - 1;
  std::int64_t d = 0;
  if (lo < 0) d = std::max<std::int64_t>(d, -2 * lo);
  if (h >= 0) d = std::max<std::int64_t>(d, 2 * h + 1);
  return static_cast<int>(d);
}

SymbolPoint padic_to_symbol(const std::vector<int>& digits, int fill) {
  const int d = static_cast<int>(digits.size());
  const std::int64_t lo = centered_lo(d);
  std::vector<int> core(static_cast<std::size_t>(d));
  for (int t = 0; t < d; ++t) core[t] = digits[position_digit(lo + t)];
  return SymbolPoint::from_word(lo, std::move(core), fill);
}

std::vector<int> symbol_to_padic(const SymbolPoint& x, int count) {
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) out[k] = x.at(digit_position(k));
  return out;
}

std::vector<int> translate_digits(std::vector<int> digits, int p, const std::vector<int>& add,
                                  const std::vector<int>& sub) {
  int carry = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    int v = digits[k] + (k < add.size() ? add[k] : 0) + carry;
    carry = v / p;
    digits[k] = v % p;
  }
  int borrow = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    int v = digits[k] - (k < sub.size() ? sub[k] : 0) - borrow;
    borrow = v < 0 ? 1 : 0;
    digits[k] = v + borrow * p;
  }
  return digits;
}

SymbolPoint translate_point(const SymbolPoint& x, int p, const std::vector<int>& add,
                            const std::vector<int>& sub) {
  int fill = 0;
  if (!x.constant_tails(&fill))
    throw StructuralError("digit translation needs a point with one constant tail letter");
  if (x.max_letter() >= p) throw StructuralError("point has letters outside the digit alphabet");

  int need = 0;
  if (x.hi() - 1 >= 0) need = std::max(need, position_digit(x.hi() - 1) + 1);
  if (x.lo() < 0) need = std::max(need, position_digit(x.lo()) + 1);
  need = std::max<int>(need, static_cast<int>(std::max(add.size(), sub.size())));
  std::vector<int> digits = symbol_to_padic(x, need + 1);

  int carry = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    int v = digits[k] + (k < add.size() ? add[k] : 0) + carry;
    carry = v / p;
    digits[k] = v % p;
  }
  if (carry) {
    // the carry runs into the constant tail
    if (fill == p - 1) fill = 0;
    else digits.push_back(fill + 1);
  }
  int borrow = 0;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    int v = digits[k] - (k < sub.size() ? sub[k] : 0) - borrow;
    borrow = v < 0 ? 1 : 0;
    digits[k] = v + borrow * p;
  }
  if (borrow) {
    if (fill == 0) fill = p - 1;
    else digits.push_back(fill - 1);
  }
  return padic_to_symbol(digits, fill);
}

std::uint64_t ipow(std::uint64_t base, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace shiftlab::funcspace
