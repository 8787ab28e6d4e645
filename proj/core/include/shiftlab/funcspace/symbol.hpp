#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace shiftlab::funcspace {

// A point of a bilateral symbol space A^Z that can be written down exactly:
// an explicit core on [lo, lo + size) and periodic tails on either side.
// Tails are anchored at absolute positions, x_m = tail[m mod |tail|], so the
// shift only rotates them. The core is shared, shifting is O(tail length).
class SymbolPoint {
 public:
  SymbolPoint();

  static SymbolPoint constant(int letter);
  static SymbolPoint periodic(std::vector<int> pattern);
  static SymbolPoint from_word(std::int64_t lo, std::vector<int> letters, int fill = 0);
  static SymbolPoint with_tails(std::int64_t lo, std::vector<int> core, std::vector<int> left,
                                std::vector<int> right);

  int at(std::int64_t m) const;
  std::int64_t lo() const { return lo_; }
  std::int64_t hi() const { return lo_ + static_cast<std::int64_t>(core_->size()); }
  const std::vector<int>& core() const { return *core_; }
  const std::vector<int>& left_tail() const { return left_; }
  const std::vector<int>& right_tail() const { return right_; }

  // Sigma^s, where (Sigma x)_m = x_{m+1}.
  SymbolPoint shifted(std::int64_t s) const;

  std::vector<int> read(std::int64_t lo, int depth) const;
  // letters at lo..lo+depth-1 as a base-q number, first letter least significant
  std::uint64_t word_index(std::int64_t lo, int depth, int q) const;

  // true when both tails are the same single repeated letter
  bool constant_tails(int* letter = nullptr) const;
  int max_letter() const;

  friend bool operator==(const SymbolPoint& a, const SymbolPoint& b);

 private:
  std::int64_t lo_ = 0;
  std::shared_ptr<const std::vector<int>> core_;
  std::vector<int> left_{0};
  std::vector<int> right_{0};
};

// Interleaving Z_p <-> A^Z: digit k sits at position k/2 (k even) or
// -(k+1)/2 (k odd). The first d digits are the centered window
// [-(d/2), (d+1)/2 - 1].
std::int64_t digit_position(int k);
int position_digit(std::int64_t m);
std::int64_t centered_lo(int depth);
// smallest d whose centered window contains [lo, lo + depth)
int centered_depth_covering(std::int64_t lo, int depth);

SymbolPoint padic_to_symbol(const std::vector<int>& digits, int fill = 0);
std::vector<int> symbol_to_padic(const SymbolPoint& x, int count);

// t -> t + add - sub on the first digits.size() digits, i.e. mod p^len.
// Digit strings are least significant first.
std::vector<int> translate_digits(std::vector<int> digits, int p, const std::vector<int>& add,
                                  const std::vector<int>& sub);

// Same translation on a whole point. Needs constant tails on both sides
// (the class is closed under translations and the shift).
SymbolPoint translate_point(const SymbolPoint& x, int p, const std::vector<int>& add,
                            const std::vector<int>& sub);

std::uint64_t ipow(std::uint64_t base, int e);

}  // namespace shiftlab::funcspace
