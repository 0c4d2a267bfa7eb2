#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

namespace hont {

using Element = std::uint32_t;

struct Relation {
  unsigned arity = 2;
  std::set<std::vector<Element>> tuples;

  bool contains(const std::vector<Element>& t) const { return tuples.count(t) != 0; }
};

// Finite relational structure. Unary predicates are folded into one label
// per element (two elements satisfy the same unary predicates iff their
// labels are equal); higher-arity relations are listed explicitly. Two
// structures are comparable when their relation lists have matching arities.
struct Structure {
  std::size_t size = 0;
  std::vector<std::uint64_t> labels;
  std::vector<Relation> relations;

  std::uint64_t label(Element e) const { return labels.empty() ? 0 : labels[e]; }
};

// The map a_i -> b_i is a partial isomorphism.
bool partial_iso(const Structure& A, std::span<const Element> a, const Structure& B, std::span<const Element> b);

// Duplicator wins the k-round Ehrenfeucht-Fraisse game on (A, a) and (B, b),
// i.e. the tuples satisfy the same formulas of quantifier rank at most k.
bool fo_equiv(const Structure& A, std::span<const Element> a, const Structure& B, std::span<const Element> b,
              unsigned k);

// Labelled successor chain: element i -> i+1.
Structure chain_structure(const std::vector<std::uint64_t>& labels);

}  // namespace hont
