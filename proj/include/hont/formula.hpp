#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hont/system.hpp"

namespace hont {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Exists, Forall, And, Or, Not, Eq, Edge, Jump, Root };

  Kind kind;
  std::string var;                    // bound variable of a quantifier
  std::vector<FormulaPtr> children;   // body, operands or negated formula
  std::vector<std::string> args;      // atom arguments
  std::optional<TransitionId> label;  // edge[i]

  static FormulaPtr exists(std::string v, FormulaPtr body);
  static FormulaPtr forall(std::string v, FormulaPtr body);
  static FormulaPtr conj(std::vector<FormulaPtr> xs);
  static FormulaPtr disj(std::vector<FormulaPtr> xs);
  static FormulaPtr neg(FormulaPtr x);
  static FormulaPtr eq(std::string x, std::string y);
  static FormulaPtr edge(std::string x, std::string y, std::optional<TransitionId> label = std::nullopt);
  static FormulaPtr jump(std::string x, std::string y);
  static FormulaPtr root(std::string x);

  bool is_atom() const { return kind >= Kind::Eq; }
};

bool formula_equal(const Formula& a, const Formula& b);

// Throws ParseError (code Syntax) carrying the 0-based column.
FormulaPtr parse_formula(std::string_view text);
std::string print_formula(const Formula& f);

// Negation normal form: negations only directly above atoms.
FormulaPtr to_nnf(const FormulaPtr& f);
unsigned quantifier_rank(const Formula& f);
std::set<std::string> free_variables(const Formula& f);

struct NormalizedFormula {
  FormulaPtr formula;
  unsigned rank;
};
NormalizedFormula normalize(const FormulaPtr& f);

}  // namespace hont
