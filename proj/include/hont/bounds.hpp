#pragma once

#include <string>
#include <vector>

#include "hont/analysis.hpp"
#include "hont/bigint.hpp"
#include "hont/system.hpp"

namespace hont {

// An exact value, or a marker that the value needs more than kMaxBits bits.
struct Bound {
  BigInt value = 0;
  bool overflow = false;

  static constexpr std::size_t kMaxBits = std::size_t{1} << 24;

  Bound() = default;
  Bound(BigInt v) : value(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  static Bound huge() {
    Bound b;
    b.overflow = true;
    return b;
  }
  std::string str() const;
};

Bound operator+(const Bound& a, const Bound& b);
Bound operator*(const Bound& a, const Bound& b);
Bound max(const Bound& a, const Bound& b);
bool operator==(const Bound& a, const Bound& b);

// Number of word classes per level at a fixed threshold; levels past the end
// reuse the last entry.
struct ClassCounts {
  std::vector<BigInt> by_level{1};
  BigInt level0_z2 = 1;  // classes at level 0, threshold 2
  std::string source = "constant";

  BigInt at(const BigInt& level) const;
  // Σ_{c=0}^{x} at(c); zero for x < 0.
  BigInt prefix_sum(const BigInt& x) const;

  static ClassCounts constant(BigInt c);
  // Classes met while typing all words up to max_word_len.
  static ClassCounts observed(const PushdownSystem& sys, unsigned z, unsigned max_level,
                              std::size_t max_word_len, std::size_t budget);
};

struct BoundInputs {
  unsigned z = 2;
  ClassCounts classes;
  LengthBoundTable lambda = LengthBoundTable::constant(2, 1, 1, 1);
  std::string lambda_source = "fixed";
};

// Helpers named after their roles. `sys` supplies |Q| and |Σ|.
BigInt top_word_bound(const PushdownSystem& sys, const BoundInputs& in, const BigInt& level);
BigInt word_height_constant(const PushdownSystem& sys, const BoundInputs& in);
Bound width_word_bound(const PushdownSystem& sys, const Bound& height);
Bound one_step_height(const PushdownSystem& sys, const BoundInputs& in, const Bound& a, const Bound& b,
                      const BigInt& level);

struct BoundLevel {
  unsigned n = 0;
  BigInt l = 0, n1 = 0, n2 = 0;  // parameters at this level
  // Auxiliary sequences: first and last entries and their lengths.
  BigInt loc_len = 0, glob_len = 0;
  Bound loc_first, loc_last, glob_first, glob_last;
  Bound top_word;      // top_word_bound at the glob level argument
  Bound width_word;    // width_word_bound(glob_first)
  Bound loop_length;   // Λ(height)
  Bound height, width, length;
};

struct BoundTables {
  unsigned z = 0;
  // levels[i] holds the values at first argument i.
  std::vector<BoundLevel> levels;
  BigInt height_word = 0;
  std::string class_source;
  std::string lambda_source;
  bool lambda_complete = true;

  const BoundLevel& top() const { return levels.back(); }
  bool exact() const;
};

BoundTables bound_tables(const PushdownSystem& sys, unsigned n, const BigInt& l, const BigInt& n1, const BigInt& n2,
                         const BoundInputs& in);

}  // namespace hont
