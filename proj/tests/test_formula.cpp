#include <gtest/gtest.h>

#include <random>

#include "hont/error.hpp"
#include "hont/formula.hpp"

using namespace hont;

namespace {

FormulaPtr random_formula(std::mt19937& rng, int depth, std::vector<std::string>& vars) {
  auto var = [&] { return vars.empty() ? std::string("root") : vars[rng() % vars.size()]; };
  if (depth == 0 || rng() % 4 == 0) {
    switch (rng() % 5) {
      case 0: return Formula::eq(var(), var());
      case 1: return Formula::edge(var(), var());
      case 2: return Formula::edge(var(), var(), static_cast<TransitionId>(rng() % 4));
      case 3: return Formula::jump(var(), var());
      default: return Formula::root(var());
    }
  }
  switch (rng() % 5) {
    case 0:
    case 1: {
      std::string v = "x" + std::to_string(vars.size());
      vars.push_back(v);
      auto body = random_formula(rng, depth - 1, vars);
      vars.pop_back();
      return rng() % 2 ? Formula::exists(v, body) : Formula::forall(v, body);
    }
    case 2: return Formula::neg(random_formula(rng, depth - 1, vars));
    case 3: return Formula::conj({random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars)});
    default: return Formula::disj({random_formula(rng, depth - 1, vars), random_formula(rng, depth - 1, vars)});
  }
}

bool negations_on_atoms(const Formula& f) {
  if (f.kind == Formula::Kind::Not) return f.children[0]->is_atom();
  for (const auto& c : f.children)
    if (!negations_on_atoms(*c)) return false;
  return true;
}

TEST(Parse, Quantifiers) {
  auto f = parse_formula("exists x. exists y. jump(x,y)");
  EXPECT_TRUE(formula_equal(*f, *Formula::exists("x", Formula::exists("y", Formula::jump("x", "y")))));
  EXPECT_EQ(quantifier_rank(*f), 2u);
  EXPECT_EQ(print_formula(*f), "exists x. exists y. jump(x, y)");
}

TEST(Parse, ArityError) {
  try {
    parse_formula("exists x jump(x)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.code(), ErrorCode::Syntax);
  }
  EXPECT_THROW(parse_formula("exists x. jump(x)"), ParseError);
  EXPECT_THROW(parse_formula("root(x,y)"), ParseError);
  EXPECT_THROW(parse_formula("x = "), ParseError);
}

TEST(Parse, LabelledEdgesAndRoot) {
  auto f = parse_formula("forall x. edge[2](root,x) | !root(x)");
  ASSERT_EQ(f->kind, Formula::Kind::Forall);
  const auto& body = *f->children[0];
  ASSERT_EQ(body.kind, Formula::Kind::Or);
  EXPECT_EQ(body.children[0]->label, TransitionId{2});
  EXPECT_EQ(body.children[0]->args[0], "root");
  EXPECT_TRUE(free_variables(*f).empty() || free_variables(*f) == std::set<std::string>{"root"});
}

TEST(Parse, PrintRoundTrip) {
  std::mt19937 rng(11);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> vars;
    auto f = random_formula(rng, 4, vars);
    auto text = print_formula(*f);
    auto g = parse_formula(text);
    EXPECT_TRUE(formula_equal(*f, *g)) << text << " vs " << print_formula(*g);
  }
}

TEST(Normalize, NegatedExistential) {
  auto n = normalize(parse_formula("!exists x. root(x)"));
  EXPECT_TRUE(formula_equal(*n.formula, *Formula::forall("x", Formula::neg(Formula::root("x")))));
  EXPECT_EQ(n.rank, 1u);
  auto atom = parse_formula("jump(x,y)");
  auto m = normalize(atom);
  EXPECT_TRUE(formula_equal(*m.formula, *atom));
  EXPECT_EQ(m.rank, 0u);
}

TEST(Normalize, Properties) {
  std::mt19937 rng(5);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> vars;
    auto f = random_formula(rng, 4, vars);
    auto n = to_nnf(f);
    EXPECT_TRUE(negations_on_atoms(*n));
    EXPECT_EQ(quantifier_rank(*n), quantifier_rank(*f));
    EXPECT_EQ(free_variables(*n), free_variables(*f));
    EXPECT_TRUE(formula_equal(*to_nnf(n), *n));
  }
}

TEST(FreeVariables, Basic) {
  EXPECT_EQ(free_variables(*parse_formula("exists x. edge(x,y)")), (std::set<std::string>{"y"}));
}

}  // namespace
