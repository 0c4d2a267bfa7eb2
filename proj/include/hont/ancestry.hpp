#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hont/npt.hpp"
#include "hont/structure.hpp"
#include "hont/wordtypes.hpp"

namespace hont {

struct AncestorEdge {
  std::size_t from;
  std::size_t to;
  EdgeKind kind;
  TransitionId label = 0;

  friend auto operator<=>(const AncestorEdge&, const AncestorEdge&) = default;
};

// The structure induced on the relevant l-ancestors of a tuple of runs.
// Every node carries its final state and the class of its final stack
// (stack_equiv at level n2, threshold z, window n1).
struct AncestorStructure {
  unsigned l = 0, n1 = 0, n2 = 0;
  std::vector<Run> tuple;
  std::vector<Run> nodes;                          // length-lexicographic
  std::vector<std::vector<std::size_t>> chains;    // chains[j]: ancestors of tuple[j] in ⪯ order
  std::vector<std::vector<unsigned>> member;       // member[j][node]: least k, or kNotMember
  std::vector<std::vector<std::uint32_t>> tau;     // state followed by the stack class
  std::vector<AncestorEdge> edges;
  bool exact = true;

  static constexpr unsigned kNotMember = ~0u;
};

AncestorStructure ancestor_structure(WordTyper& typer, const std::vector<Run>& tuple, unsigned l, unsigned n1,
                                     unsigned n2);
// Level-1 systems: nodes carry state and top symbol only.
AncestorStructure ancestor_structure_plain(const std::vector<Run>& tuple, unsigned l);

// The only candidate isomorphism maps the i-th element of chain j to the
// i-th element of the matching chain; returns it when it is one.
std::optional<std::vector<std::size_t>> iso_map(const AncestorStructure& a, const AncestorStructure& b);
bool iso_check(const AncestorStructure& a, const AncestorStructure& b);

// Generic relational view (for game-based checks): relations are the Delta
// edges per transition, jump, plus; labels combine tau and membership.
Structure to_structure(const AncestorStructure& a, std::size_t num_transitions);

// Finds an extension from the end of `target` that creates a word equivalent
// (level n-1) to the one `ext` creates from the end of `context`, differing
// from every run in `existing`. `budget` caps the number of runs examined.
Run transfer_extension(WordTyper& typer, const Run& context, const Run& target, const Run& ext,
                       const std::vector<Run>& existing, unsigned n, std::size_t budget);

// Rebuilds a ⪯-chain whose successive members are joined by Delta or plus
// edges on top of `seed`, using level n2 for the first transfer.
std::vector<Run> construct_ancestor_chain(WordTyper& typer, const std::vector<Run>& chain, const Run& seed,
                                          unsigned n2, std::size_t budget);

struct GameParams {
  unsigned l = 0;
  unsigned n1 = 1;
  unsigned n2 = 1;
};

// Parameters the previous round needs for a move at `next`.
GameParams lift_params(const GameParams& next);

struct DuplicatorAnswer {
  Run run;
  std::string strategy;  // "local", "global" or "search"
  std::size_t examined = 0;
};

// Answer to Spoiler choosing `move` in the tree of `tuple`, for the tree of
// `answer_tuple`. Needs the tuples related at the lifted parameters and
// z > |tuple| * 4^l. The answer is verified with iso_check at `next`.
DuplicatorAnswer duplicator_response(WordTyper& typer, const std::vector<Run>& tuple,
                                     const std::vector<Run>& answer_tuple, const Run& move, const GameParams& next,
                                     std::size_t budget);

}  // namespace hont
