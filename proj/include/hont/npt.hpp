#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hont/system.hpp"

namespace hont {

// Number of top-level entries: words for level 2, symbols for level 1.
// Jump and plus edges are defined through this quantity.
inline std::size_t top_width(const Stack& s) { return s.width(); }

// Widths of every position of a run.
std::vector<std::size_t> width_profile(const Run& r);

struct Successors {
  std::vector<Run> delta;  // in Δ order
  std::vector<Run> jumps;  // length-lexicographic
  bool jumps_complete = false;
};

// Delta successors and the jump targets reachable with an extension of at
// most jump_search_depth steps.
Successors node_successors(const PushdownSystem& sys, const Run& node, std::size_t jump_search_depth);

// Prefix lengths of the Delta predecessor, the jump source and the plus source.
struct SpecialPredecessors {
  std::optional<std::size_t> delta;
  std::optional<std::size_t> jump;
  std::optional<std::size_t> plus;
};

SpecialPredecessors special_predecessors(const Run& node);
SpecialPredecessors special_predecessors(const std::vector<std::size_t>& widths, std::size_t len);

// Relations between two runs from the same start.
bool is_delta_edge(const Run& a, const Run& b);
bool is_jump_edge(const Run& a, const Run& b);
bool is_plus_edge(const Run& a, const Run& b);

struct Ancestor {
  std::size_t length;  // the ancestor is node.prefix(length)
  unsigned level;      // least k with the ancestor in the k-th set
};

// Relevant ancestors up to level l, ordered by length.
std::vector<Ancestor> relevant_ancestors(const Run& node, unsigned l);
std::vector<Ancestor> relevant_ancestors(const std::vector<std::size_t>& widths, std::size_t len, unsigned l);

enum class EdgeKind { Delta, Jump, Plus };

struct TreeEdge {
  std::size_t from;
  std::size_t to;
  EdgeKind kind;
  TransitionId label = 0;  // Delta edges only
};

struct Truncation {
  std::vector<Run> nodes;  // length-lexicographic; nodes[0] is the root
  std::vector<TreeEdge> edges;
  std::size_t depth = 0;

  std::optional<std::size_t> find(const std::vector<TransitionId>& steps) const;
  std::size_t count(EdgeKind k) const;

  std::unordered_map<std::string, std::size_t> index;
};

// All runs of length at most depth from the initial configuration. Throws
// SizeLimit when more than max_nodes nodes would be produced.
Truncation truncate(const PushdownSystem& sys, std::size_t depth, std::size_t max_nodes = 1'000'000);

// DOT rendering of Delta and Jump edges.
std::string to_dot(const PushdownSystem& sys, const Truncation& t);
std::string dot_node_name(const Run& r);

}  // namespace hont
