#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hont/stack.hpp"

namespace hont {

using StateId = std::uint16_t;
using TransitionId = std::uint32_t;

struct Transition {
  StateId from = 0;
  Symbol symbol = kBottom;
  StateId to = 0;
  StackOp op;
};

struct Configuration {
  StateId state = 0;
  Stack stack;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const {
    return c.stack.hash() * 31 + c.state;
  }
};

class PushdownSystem {
 public:
  PushdownSystem(int level, Alphabet alphabet, std::vector<std::string> states,
                 StateId initial, std::vector<Transition> delta);

  int level() const { return level_; }
  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<std::string>& states() const { return states_; }
  std::size_t num_states() const { return states_.size(); }
  StateId initial_state() const { return initial_; }
  const std::vector<Transition>& transitions() const { return delta_; }
  const Transition& transition(TransitionId t) const { return delta_.at(t); }
  StateId state_id(std::string_view name) const;  // throws InvalidArgument

  Configuration initial_configuration() const;
  // Transitions whose state and top symbol match, in Δ order.
  const std::vector<TransitionId>& candidates(StateId q, Symbol top) const;
  // nullopt when the state or top symbol does not match or the operation is undefined.
  std::optional<Configuration> step(const Configuration& c, TransitionId t) const;

  std::string format_configuration(const Configuration& c) const;

 private:
  int level_;
  Alphabet alphabet_;
  std::vector<std::string> states_;
  StateId initial_;
  std::vector<Transition> delta_;
  std::vector<std::vector<TransitionId>> by_state_symbol_;
};

// A run is its start configuration plus the transition sequence. The
// intermediate configurations are kept alongside.
class Run {
 public:
  explicit Run(Configuration start);
  // Throws Inapplicable with the failing step index.
  static Run replay(const PushdownSystem& sys, Configuration start, std::span<const TransitionId> steps);

  std::size_t length() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  const Configuration& at(std::size_t i) const { return configs_.at(i); }
  const Configuration& front() const { return configs_.front(); }
  const Configuration& back() const { return configs_.back(); }
  const std::vector<TransitionId>& steps() const { return steps_; }

  std::optional<Run> extended(const PushdownSystem& sys, TransitionId t) const;
  void push(const PushdownSystem& sys, TransitionId t);  // throws Inapplicable
  void pop_step();
  Run prefix(std::size_t len) const;
  // ρ restricted to positions [begin, end], as a run from configuration begin.
  Run slice(std::size_t begin, std::size_t end) const;
  // ⪯: same start, steps are a prefix.
  bool is_prefix_of(const Run& other) const;

  friend Run compose(const Run& a, const Run& b);
  friend bool operator==(const Run& a, const Run& b) {
    return a.steps_ == b.steps_ && a.configs_.front() == b.configs_.front();
  }

 private:
  std::vector<TransitionId> steps_;
  std::vector<Configuration> configs_;
};

// Length first, then transition indices. Runs are assumed to share a start.
bool length_lex_less(const Run& a, const Run& b);
bool length_lex_less(const std::vector<TransitionId>& a, const std::vector<TransitionId>& b);

// Throws EndpointMismatch unless a ends where b starts.
Run compose(const Run& a, const Run& b);

struct RunFilter {
  // Every configuration after the start must satisfy this.
  std::function<bool(const Configuration&)> keep;
  // Runs for which this is false are not extended further (they may still be yielded).
  std::function<bool(const Run&)> extend;
  // Only runs satisfying this are yielded.
  std::function<bool(const Run&)> accept;
};

// Breadth-first enumeration of runs from a configuration, yielding them in
// length-lexicographic order.
class RunStream {
 public:
  RunStream(const PushdownSystem& sys, Configuration from, std::size_t max_len, RunFilter filter = {});

  std::optional<Run> next();
  // True when some run of length max_len could still have been extended.
  bool truncated() const { return truncated_; }
  // Number of runs generated so far (yielded or not).
  std::size_t generated() const { return generated_; }

 private:
  const PushdownSystem& sys_;
  std::size_t max_len_;
  RunFilter filter_;
  std::vector<Run> layer_;
  std::vector<Run> next_layer_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
  bool truncated_ = false;
  std::size_t generated_ = 0;

  bool advance_layer();
};

std::vector<Run> enumerate_runs(const PushdownSystem& sys, const Configuration& from,
                                std::size_t max_len, const RunFilter& filter = {});

struct ShortestRuns {
  std::vector<Run> runs;
  bool budget_exhausted = false;
};

// Up to k runs satisfying the target predicate, shortest first, with length at most budget.
ShortestRuns shortest_runs(const PushdownSystem& sys, const Configuration& from,
                           const std::function<bool(const Configuration&)>& target,
                           std::size_t k, std::size_t budget, RunFilter filter = {});

// The .nps text format. Throws ParseError carrying the 1-based line.
PushdownSystem parse_system(std::string_view text);
PushdownSystem load_system(const std::string& path);
std::string serialize_system(const PushdownSystem& sys);

// "0,1,3"; the empty string is the empty sequence.
std::vector<TransitionId> parse_steps(std::string_view text);
std::string format_steps(std::span<const TransitionId> steps);

}  // namespace hont
