#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hont/analysis.hpp"
#include "hont/structure.hpp"
#include "hont/system.hpp"

namespace hont {

enum class Verdict { Equivalent, Distinct, Indeterminate };
const char* verdict_name(Verdict v);

using TypeId = std::uint32_t;

// Enriched word model of w. Position i stands for the prefix w_{-i}
// (w with i symbols removed), so position 0 is w itself.
struct WordModel {
  Word word;
  unsigned n = 0;
  unsigned k = 0;
  unsigned z = 0;
  std::vector<Symbol> top;                   // TOP1 of each prefix
  std::vector<CountFunction> runs_to;        // runs from (q,w) to (q',w_{-i}) above the context
  std::vector<CountFunction> ret, loop, high_loop;
  std::vector<std::vector<TypeId>> types;    // types[j][i]: level-j type of w_{-i}, j < n
  Structure structure;
  bool exact = true;
};

// Computes enriched word models and their types for one system at a fixed
// threshold z and rank k. Types are interned: two words get the same TypeId
// at level n iff their models are k-round game equivalent.
class WordTyper {
 public:
  WordTyper(const PushdownSystem& sys, unsigned z, std::size_t budget, unsigned k = 0);

  const PushdownSystem& system() const { return sys_; }
  unsigned threshold() const { return z_; }
  unsigned rank() const { return k_; }
  std::size_t budget() const { return budget_; }

  const WordModel& model(const Word& w, unsigned n);
  TypeId type_of(const Word& w, unsigned n);
  // Whether every count behind the level-n type of w was certified.
  bool exact(const Word& w, unsigned n);
  Verdict word_equiv(const Word& a, const Word& b, unsigned n);
  Verdict stack_equiv(const Stack& a, const Stack& b, unsigned n, unsigned m);
  // A label that coincides for two stacks iff stack_equiv says Equivalent
  // (for exact counts): the width (or m+1 when wider) and the top types.
  std::vector<std::uint32_t> stack_class(const Stack& s, unsigned n, unsigned m);

  // Classes observed so far at level n.
  std::size_t observed_classes(unsigned n) const;

 private:
  struct WordCounts {
    CountFunction ret, loop, high_loop;
    std::vector<CountFunction> runs_to;
    bool exact = true;
  };

  const PushdownSystem& sys_;
  unsigned z_;
  std::size_t budget_;
  unsigned k_;
  std::map<Word, WordCounts> counts_;
  std::map<std::pair<Word, unsigned>, std::unique_ptr<WordModel>> models_;
  std::map<std::pair<Word, unsigned>, TypeId> type_cache_;
  std::map<unsigned, std::vector<const WordModel*>> representatives_;
  std::map<std::vector<std::uint64_t>, std::uint64_t> label_ids_;

  const WordCounts& counts(const Word& w);
  std::uint64_t intern(const std::vector<std::uint64_t>& label);
  bool same_type(const WordModel& a, const WordModel& b) const;
};

// One-shot helpers mirroring the typer methods.
WordModel build_lin(const PushdownSystem& sys, const Word& w, unsigned n, unsigned k, unsigned z,
                    std::size_t budget);
Verdict word_equiv(const PushdownSystem& sys, const Word& a, const Word& b, unsigned n, unsigned z,
                   std::size_t budget);

}  // namespace hont
