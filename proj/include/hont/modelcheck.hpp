#pragma once

#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hont/ancestry.hpp"
#include "hont/bounds.hpp"
#include "hont/formula.hpp"
#include "hont/npt.hpp"

namespace hont {

// Values of free variables. A free variable named "root" that is not
// assigned denotes the empty run.
using Assignment = std::vector<std::pair<std::string, Run>>;

// Evaluation over the finite tree of all runs of length at most depth.
class BoundedChecker {
 public:
  BoundedChecker(const PushdownSystem& sys, std::size_t depth, std::size_t max_nodes = 1'000'000);

  bool check(const Formula& f, const Assignment& a = {}) const;
  const Truncation& truncation() const { return tree_; }

 private:
  Truncation tree_;
  std::vector<std::size_t> parent_;  // kNone for the root
  std::vector<TransitionId> label_;
  std::vector<std::size_t> jump_source_;

  static constexpr std::size_t kNone = ~std::size_t{0};

  bool eval(const Formula& f, std::vector<std::pair<std::string, std::size_t>>& env) const;
  std::size_t lookup(const std::string& v, const std::vector<std::pair<std::string, std::size_t>>& env) const;
};

bool check_bounded(const PushdownSystem& sys, const Formula& f, std::size_t depth, const Assignment& a = {});

// Per-arity restriction of run tuples together with a generator of the
// admissible extensions.
class Constraint {
 public:
  virtual ~Constraint() = default;
  virtual bool contains(const std::vector<Run>& tuple) const = 0;
  // Calls visit on the admissible runs a with tuple·a, length-lexicographic,
  // until visit returns false. Returns false when the generator ran out of
  // budget before the candidates were exhausted and visit still wanted more.
  virtual bool extensions(const std::vector<Run>& tuple, const std::function<bool(const Run&)>& visit) const = 0;
  virtual std::string provenance() const = 0;
};

struct ArityRule {
  std::size_t max_length = 0;
  std::function<bool(const Run&)> admit;  // optional extra condition on the new run
};

// Arity m+1 uses rules[min(m, size-1)]. Runs start at the initial configuration.
class ScheduleConstraint : public Constraint {
 public:
  ScheduleConstraint(const PushdownSystem& sys, std::vector<ArityRule> rules, std::size_t budget,
                     std::string provenance);

  bool contains(const std::vector<Run>& tuple) const override;
  bool extensions(const std::vector<Run>& tuple, const std::function<bool(const Run&)>& visit) const override;
  std::string provenance() const override { return provenance_; }
  const std::vector<ArityRule>& rules() const { return rules_; }

 private:
  struct Pool {
    RunStream stream;
    std::deque<Run> runs;
    bool done = false;
    Pool(const PushdownSystem& sys, std::size_t len) : stream(sys, sys.initial_configuration(), len) {}
  };

  const PushdownSystem& sys_;
  std::vector<ArityRule> rules_;
  std::size_t budget_;
  std::string provenance_;
  mutable std::mutex mu_;
  mutable std::map<std::size_t, std::unique_ptr<Pool>> pools_;

  const ArityRule& rule(std::size_t arity) const;
  // Run number i of the pool, or nullptr when exhausted; *cut is set when the budget stopped it.
  const Run* fetch(Pool& p, std::size_t i, bool* cut) const;
};

std::shared_ptr<ScheduleConstraint> uniform_constraint(const PushdownSystem& sys, std::size_t depth,
                                                       std::size_t budget = 1'000'000);

// Throws BudgetExhausted when a generator stops early and the verdict depends on it.
bool s_model_check(const PushdownSystem& sys, const Formula& f, const Constraint& s, const Assignment& a = {});

struct Caps {
  std::optional<std::size_t> length, height, width;
};

struct ArityBounds {
  GameParams params;
  Bound length, height, width;           // theoretical
  std::size_t max_length = 0, max_height = 0, max_width = 0;  // in force
};

struct NptConstraint {
  std::shared_ptr<ScheduleConstraint> constraint;
  std::vector<ArityBounds> arities;  // entry m-1 for the m-th tuple element
  std::string provenance;
};

// Parameter chain for a formula of rank r with `free` free variables; the
// last arity plays at l = 0, n1 = n2 = 1.
std::vector<GameParams> parameter_chain(unsigned arity);

NptConstraint constraint_2npt(const PushdownSystem& sys, unsigned r, const BoundInputs& in, const Caps& caps,
                              unsigned free = 0, std::size_t budget = 1'000'000);

struct Npt1Constraint {
  std::shared_ptr<ScheduleConstraint> constraint;
  std::vector<GameParams> params;
  std::vector<BigInt> schedule;  // C_0 = 0, C_1, ..., C_R
  std::size_t expansion = 0;     // E
  std::string provenance;
};

// Level-1 systems. E = 0 selects the measured default.
Npt1Constraint constraint_1npt(const PushdownSystem& sys, unsigned r, std::size_t expansion = 0, unsigned free = 0,
                               std::size_t budget = 1'000'000);

// Longest of the k shortest loops over all state pairs and symbols.
std::size_t measured_expansion(const PushdownSystem& sys, std::size_t k);

}  // namespace hont
