#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hont/bigint.hpp"
#include "hont/system.hpp"

namespace hont {

// ---------------------------------------------------------------------------
// Milestones

struct Milestone {
  Stack stack;
  bool flagged = false;  // an ordinary milestone (the new word is a prefix of the next word of s)
};

// Generalised milestones of a level-2 stack, in the order the minimal
// operation sequence visits them. Throws Unreachable for stacks whose words
// do not carry ⊥ exactly at the bottom.
std::vector<Milestone> generalized_milestones(const Stack& s);
// The unique shortest sequence over {Push, Pop1, Clone2} from [⊥] to s.
std::vector<StackOp> minimal_op_sequence(const Stack& s);

// Milestones of runs from s to s:w that never visit a proper substack of s:
// s itself, then s:v as the new top word walks from TOP2(s) down to the
// common prefix and up to w.
std::vector<Stack> extension_milestones(const Stack& s, const Word& w);

// ---------------------------------------------------------------------------
// Counting

class CountFunction {
 public:
  CountFunction() = default;
  CountFunction(std::size_t states, unsigned z) : n_(states), z_(z), v_(states * states, 0) {}

  std::size_t states() const { return n_; }
  unsigned threshold() const { return z_; }
  unsigned get(StateId q, StateId r) const { return v_[q * n_ + r]; }
  void set(StateId q, StateId r, unsigned c) { v_[q * n_ + r] = c > z_ ? z_ : c; }
  void add(StateId q, StateId r, unsigned c) { set(q, r, v_[q * n_ + r] + c); }
  const std::vector<unsigned>& values() const { return v_; }
  bool all_saturated() const;

  friend bool operator==(const CountFunction&, const CountFunction&) = default;

 private:
  std::size_t n_ = 0;
  unsigned z_ = 0;
  std::vector<unsigned> v_;
};

enum class RunKind { Loop, HighLoop, Return, ToPrefix };

const char* run_kind_name(RunKind k);

struct CountResult {
  CountFunction counts;
  // Set when the counts are certified: the search space was exhausted, every
  // entry saturated, or the counts did not change over two doublings of the
  // length bound.
  bool exact = false;
  std::size_t explored_length = 0;
};

// Runs of the given kind for the word w in a generic context [⊥]:w.
// Loop: from (q,s:w) to (q',s:w) never passing s. HighLoop: additionally
// never passing s:Pop1(w). Return: from (q,s:w) to (q',s) visiting s only at
// the end. ToPrefix: from (q,s:w) to (q',s:w_{-i}) never visiting s or below.
// Level-2 systems only. budget bounds the explored run length.
CountResult count_runs(const PushdownSystem& sys, const Word& w, RunKind kind, unsigned z,
                       std::size_t budget, std::size_t prefix = 0);
// ToPrefix counts for every i in [0, |w|) in one pass.
std::vector<CountResult> count_to_prefixes(const PushdownSystem& sys, const Word& w, unsigned z,
                                           std::size_t budget);

// Lengths of the up-to-z shortest runs of the kind, per state pair.
struct ShortestLengths {
  std::size_t states = 0;
  std::vector<std::vector<std::size_t>> lengths;  // index q * states + q'
  bool complete = false;                          // every pair got z runs or the space was exhausted
  std::size_t max_length() const;
};
ShortestLengths shortest_run_lengths(const PushdownSystem& sys, const Word& w, RunKind kind, unsigned z,
                                     std::size_t budget);

// The actual runs behind the kinds above, starting at (q, [⊥]:w).
RunFilter kind_filter(const Word& w, RunKind kind, std::size_t prefix = 0);
Stack generic_context(const Word& w);  // [⊥]:w

// ---------------------------------------------------------------------------
// Decompositions

enum class GapMode { Prefixed, Loop, Return };
enum class PartKind { Prefixed, Loop, Return, LoopThenPush, FinalPop };

const char* part_kind_name(PartKind k);

struct Part {
  PartKind kind;
  std::size_t begin;
  std::size_t end;
};

// Splits a run into maximal s-prefixed segments and the gaps between them.
// Prefixed mode: s is given and must prefix the first and last stack with
// every width at least |s|. Loop and Return modes: the run is a loop or a
// return of its own first stack, which plays the role of s.
std::vector<Part> gap_decompose(const Run& r, const std::optional<Stack>& s, GapMode mode);

struct CarayolDecomposition {
  std::vector<Stack> milestones;
  // loops[i] = [a_i, t_i]: a loop of milestones[i]; the step t_i -> t_i + 1
  // performs the i-th operation.
  std::vector<std::pair<std::size_t, std::size_t>> loops;
};

// Run from [⊥] to s, split at the last visit of each generalised milestone.
CarayolDecomposition carayol_decompose(const Run& r);
// Same split with an explicit milestone list (used for extensions).
CarayolDecomposition milestone_decompose(const Run& r, const std::vector<Stack>& milestones);

// ---------------------------------------------------------------------------
// Run replacement

enum class ReplaceMode { Basic, Gaps };

// ρ[s/u]. Basic mode needs every position s-prefixed. Gap mode refills gaps
// with the length-lexicographically least loop or return; it needs equal
// Loop and Return signatures (threshold 1) for the top words of s and u.
Run replace_prefix_run(const PushdownSystem& sys, const Run& r, const Stack& s, const Stack& u,
                       ReplaceMode mode, std::size_t budget = 32);

// ---------------------------------------------------------------------------
// Length bounds

struct LengthBoundTable {
  unsigned z = 0;
  // Entry h-1 is for top words of height h.
  std::vector<std::size_t> loop;
  std::vector<std::size_t> high_loop;
  std::vector<std::size_t> ret;
  std::size_t m_max = 0;
  std::size_t n_max = 0;
  bool complete = true;

  std::size_t sampled_height() const { return loop.size(); }
  // Running maximum over kinds and heights up to h, extrapolated beyond the
  // sampled range with f(h+1) = m_max + n_max * f(h).
  BigInt lambda(const BigInt& h) const;
  std::size_t lambda_small(std::size_t h) const;

  // A fixed table used when no measurement is wanted.
  static LengthBoundTable constant(unsigned z, std::size_t value, std::size_t m_max, std::size_t n_max);
};

LengthBoundTable loop_length_table(const PushdownSystem& sys, unsigned z, std::size_t max_height,
                                   std::size_t budget, std::size_t max_words_per_height = 64);

enum class ShrinkMode { FromInitial, Extension };

// Replaces every loop longer than Λ(height) in the milestone decomposition by
// one of the shortest loops with the same endpoints, keeping the result out
// of `avoid`. In Extension mode ρ runs from (q,s) to (q',s:w) without
// visiting proper substacks of s.
Run shrink_run(const PushdownSystem& sys, const Run& r, const std::vector<Run>& avoid, unsigned z,
               const LengthBoundTable& table, ShrinkMode mode, std::size_t budget = 32);

// 2|s| height(s) (1 + Λ(height(s))) and 2 height(s:w) (1 + Λ(height(s:w))).
BigInt shrink_bound(const Stack& s, const LengthBoundTable& table, ShrinkMode mode);

}  // namespace hont
