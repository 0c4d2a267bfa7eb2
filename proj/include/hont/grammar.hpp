#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hont/system.hpp"

namespace hont {

// Terminals are transition indices.
struct GrammarSymbol {
  bool terminal = false;
  std::uint32_t id = 0;

  static GrammarSymbol t(std::uint32_t i) { return {true, i}; }
  static GrammarSymbol nt(std::uint32_t i) { return {false, i}; }
  friend auto operator<=>(const GrammarSymbol&, const GrammarSymbol&) = default;
};

struct Production {
  std::uint32_t lhs = 0;
  std::vector<GrammarSymbol> rhs;
};

struct Grammar {
  std::vector<std::string> nonterminals;
  std::vector<Production> productions;
  std::uint32_t start = 0;

  bool language_empty() const { return productions.empty(); }
  std::string to_string() const;
};

// Keeps only nonterminals that are productive and reachable from the start.
// An empty language leaves the start symbol without productions.
Grammar reduce(const Grammar& g);

// Level-1 systems only. Loop mode: transition sequences from (q, w·a) back to
// (q', w·a) that never pop the a. Initial-run mode: sequences from the
// initial configuration to `target`.
Grammar loops_to_cfl(const PushdownSystem& sys, StateId q, StateId q_end, Symbol a);
Grammar initial_runs_to_cfl(const PushdownSystem& sys, const Configuration& target);

struct ShortestWords {
  std::vector<std::vector<TransitionId>> words;  // length-lexicographic, distinct
  bool complete = true;                          // false when the budget ran out
};

// Up to k shortest words of L(g). `budget` caps the number of expanded
// sentential forms.
ShortestWords cfl_shortest_words(const Grammar& g, std::size_t k, std::size_t budget = 1'000'000);

}  // namespace hont
