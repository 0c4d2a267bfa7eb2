// Systematic closed NNF formulas of quantifier rank at most 2.
#pragma once

#include <vector>

#include "hont/formula.hpp"

namespace formula_gen {

using hont::Formula;
using hont::FormulaPtr;

inline std::vector<FormulaPtr> atoms(const std::vector<std::string>& vars, std::size_t labels) {
  std::vector<FormulaPtr> out;
  for (const auto& a : vars) {
    out.push_back(Formula::root(a));
    for (const auto& b : vars) {
      out.push_back(Formula::eq(a, b));
      out.push_back(Formula::edge(a, b));
      out.push_back(Formula::jump(a, b));
      for (hont::TransitionId i = 0; i < labels; ++i) out.push_back(Formula::edge(a, b, i));
    }
  }
  return out;
}

inline std::vector<FormulaPtr> literals(const std::vector<std::string>& vars, std::size_t labels) {
  std::vector<FormulaPtr> out;
  for (const auto& a : atoms(vars, labels)) {
    out.push_back(a);
    out.push_back(Formula::neg(a));
  }
  return out;
}

inline FormulaPtr quantify(bool exists, const std::string& v, FormulaPtr body) {
  return exists ? Formula::exists(v, std::move(body)) : Formula::forall(v, std::move(body));
}

// `labels` edge labels are used; `stride` thins the larger families.
inline std::vector<FormulaPtr> closed_formulas(std::size_t labels, std::size_t stride = 1) {
  std::vector<FormulaPtr> out;
  // rank 1 over x and the root constant
  auto l1 = literals({"x", "root"}, labels);
  for (bool e : {true, false})
    for (const auto& lit : l1) out.push_back(quantify(e, "x", lit));
  std::size_t k = 0;
  for (bool e : {true, false})
    for (std::size_t i = 0; i < l1.size(); ++i)
      for (std::size_t j = i + 1; j < l1.size(); ++j, ++k) {
        if (k % (7 * stride) != 0) continue;
        out.push_back(quantify(e, "x", (i + j) % 2 ? Formula::conj({l1[i], l1[j]}) : Formula::disj({l1[i], l1[j]})));
      }
  // rank 2: a literal under two quantifiers
  auto l2 = literals({"x", "y"}, labels);
  k = 0;
  for (bool e1 : {true, false})
    for (bool e2 : {true, false})
      for (const auto& lit : l2)
        if (k++ % stride == 0) out.push_back(quantify(e1, "x", quantify(e2, "y", lit)));
  // rank 2 with a guard on x
  auto lx = literals({"x"}, labels);
  k = 0;
  for (bool e1 : {true, false})
    for (bool e2 : {true, false})
      for (std::size_t i = 0; i < lx.size(); ++i)
        for (std::size_t j = 0; j < l2.size(); ++j, ++k) {
          if (k % (13 * stride) != 0) continue;
          auto inner = quantify(e2, "y", l2[j]);
          out.push_back(quantify(e1, "x", k % 2 ? Formula::conj({lx[i], inner}) : Formula::disj({lx[i], inner})));
        }
  return out;
}

}  // namespace formula_gen
