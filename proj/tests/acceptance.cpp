// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "formula_gen.hpp"
#include "hont/analysis.hpp"
#include "hont/ancestry.hpp"
#include "hont/bounds.hpp"
#include "hont/error.hpp"
#include "hont/grammar.hpp"
#include "hont/modelcheck.hpp"
#include "hont/npt.hpp"
#include "hont/structure.hpp"
#include "hont/wordtypes.hpp"
#include "oracles.hpp"

using namespace hont;

namespace {

PushdownSystem fixture(const std::string& name) { return load_system(std::string(HONT_FIXTURES) + "/" + name); }

std::vector<Configuration> configs(const Run& r) {
  std::vector<Configuration> cs;
  for (std::size_t i = 0; i <= r.length(); ++i) cs.push_back(r.at(i));
  return cs;
}

// Collects violations with the first few messages.
struct Tally {
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    ++violations;
    if (notes.size() < 3) notes.push_back(what);
  }
  std::string summary() const {
    std::ostringstream out;
    out << checks << " checks, " << violations << " violations";
    for (const auto& n : notes) out << "; " << n;
    return out.str();
  }
};

// ---------------------------------------------------------------------------

std::string stack_algebra(bool& ok) {
  Tally t;
  std::mt19937 rng(1);
  for (int iter = 0; iter < 1000; ++iter) {
    Stack s = Stack::initial(2);
    for (int j = static_cast<int>(rng() % 30); j > 0; --j) {
      StackOp op;
      switch (rng() % 4) {
        case 0: op = StackOp::push(static_cast<Symbol>(1 + rng() % 2)); break;
        case 1: op = StackOp::pop(1); break;
        case 2: op = StackOp::clone(2); break;
        default: op = StackOp::pop(2); break;
      }
      if (auto n = try_apply(s, op)) s = *n;
    }
    t.expect(apply_op(apply_op(s, StackOp::clone(2)), StackOp::pop(2)) == s, "pop2 after clone2");
    for (Symbol a : {1, 2}) t.expect(apply_op(apply_op(s, StackOp::push(a)), StackOp::pop(1)) == s, "pop1 after push");
  }

  // Every level-2 stack of width and height at most 4 over {a, b}.
  std::vector<Word> words{Word{kBottom}};
  for (std::size_t i = 0; i < words.size(); ++i)
    if (words[i].size() < 4)
      for (Symbol c : {1, 2}) {
        Word w = words[i];
        w.push_back(c);
        words.push_back(w);
      }
  std::vector<Stack> stacks;
  std::map<oracle::Stack2, std::size_t> index;
  std::vector<std::vector<Word>> layer{{}};
  for (int width = 1; width <= 4; ++width) {
    std::vector<std::vector<Word>> next;
    for (const auto& p : layer)
      for (const auto& w : words) {
        auto q = p;
        q.push_back(w);
        Stack s = make_stack2(q);
        index[oracle::plain(s)] = stacks.size();
        stacks.push_back(s);
        next.push_back(q);
      }
    layer = std::move(next);
  }
  // Blocked over pairs so both sides stay in cache.
  const std::size_t count = stacks.size(), block = 256;
  std::vector<std::vector<std::size_t>> closure(count);
  for (std::size_t j = 0; j < count; ++j) {
    for (const auto& c : oracle::pop_closure(oracle::plain(stacks[j]))) closure[j].push_back(index.at(c));
    std::sort(closure[j].begin(), closure[j].end());
  }
  std::vector<std::size_t> hits(count, 0);
  std::size_t pairs = 0, mismatches = 0;
  for (std::size_t j0 = 0; j0 < count; j0 += block)
    for (std::size_t i0 = 0; i0 < count; i0 += block)
      for (std::size_t j = j0; j < std::min(count, j0 + block); ++j)
        for (std::size_t i = i0; i < std::min(count, i0 + block); ++i) {
          ++pairs;
          if (!is_substack(stacks[i], stacks[j])) continue;
          ++hits[j];
          if (!std::binary_search(closure[j].begin(), closure[j].end(), i)) ++mismatches;
        }
  for (std::size_t j = 0; j < count; ++j)
    if (hits[j] != closure[j].size()) ++mismatches;
  t.expect(mismatches == 0, std::to_string(mismatches) + " substack mismatches");
  ok = t.violations == 0;
  return t.summary() + ", " + std::to_string(stacks.size()) + " stacks, " + std::to_string(pairs) + " substack pairs";
}

std::string milestones(bool& ok) {
  Tally t;
  for (const char* name : {"fig1.nps", "mixed2.nps"}) {
    auto sys = fixture(name);
    for (const auto& r : enumerate_runs(sys, sys.initial_configuration(), 10)) {
      const Stack& s = r.back().stack;
      auto ms = generalized_milestones(s);
      t.expect(ms.size() <= 2 * s.height() * s.width(), "milestone count above 2 height width");
      std::size_t pos = 0;
      for (const auto& m : ms) {
        while (pos <= r.length() && !(r.at(pos).stack == m.stack)) ++pos;
        t.expect(pos <= r.length(), std::string(name) + " run " + format_steps(r.steps()) + " misses a milestone");
      }
      auto ops = minimal_op_sequence(s);
      t.expect(ops.size() + 1 == ms.size(), "sequence length differs from milestone count");
      Stack cur = Stack::initial(2);
      for (const auto& op : ops) cur = apply_op(cur, op);
      t.expect(cur == s, "sequence does not rebuild the stack");
    }
  }
  ok = t.violations == 0;
  return t.summary();
}

std::string counting(bool& ok) {
  Tally t;
  const std::pair<RunKind, oracle::CountKind> kinds[] = {{RunKind::Loop, oracle::CountKind::Loop},
                                                         {RunKind::HighLoop, oracle::CountKind::HighLoop},
                                                         {RunKind::Return, oracle::CountKind::Return}};
  std::size_t certified = 0, uncertified = 0;
  for (const char* name : {"fig1.nps", "mixed2.nps"}) {
    auto sys = fixture(name);
    std::vector<Word> words{Word{kBottom}};
    for (std::size_t i = 0; i < words.size(); ++i)
      if (words[i].size() < 3)
        for (Symbol c = 1; c < sys.alphabet().size(); ++c) {
          Word w = words[i];
          w.push_back(c);
          words.push_back(w);
        }
    const Stack other = make_stack2({Word{kBottom, 1}});
    for (const auto& w : words)
      for (unsigned z : {1u, 2u}) {
        for (auto [kind, ok_kind] : kinds) {
          auto res = count_runs(sys, w, kind, z, 64);
          if (!res.exact) {
            ++uncertified;
            continue;
          }
          ++certified;
          auto expected = oracle::count_in_context(sys, Stack::initial(2), w, ok_kind, z, 14);
          t.expect(res.counts.values() == expected,
                   std::string(name) + " " + run_kind_name(kind) + " |w|=" + std::to_string(w.size()));
          if (kind != RunKind::HighLoop) {
            auto elsewhere = oracle::count_in_context(sys, other, w, ok_kind, z, 14);
            t.expect(elsewhere == expected, std::string(name) + " context dependence of " + run_kind_name(kind));
          }
        }
        auto prefixes = count_to_prefixes(sys, w, z, 64);
        for (std::size_t i = 0; i < prefixes.size(); ++i) {
          if (!prefixes[i].exact) {
            ++uncertified;
            continue;
          }
          ++certified;
          auto expected = oracle::count_in_context(sys, Stack::initial(2), w, oracle::CountKind::ToPrefix, z, 14, i);
          t.expect(prefixes[i].counts.values() == expected, std::string(name) + " to-prefix " + std::to_string(i));
        }
      }
  }
  t.expect(uncertified == 0, std::to_string(uncertified) + " uncertified counts");
  ok = t.violations == 0;
  return t.summary() + ", " + std::to_string(certified) + " certified count functions";
}

std::string prefix_replacement(bool& ok) {
  Tally t;
  std::size_t gap_runs = 0, gap_budget = 0;
  for (const char* name : {"fig1.nps", "mixed2.nps"}) {
    auto sys = fixture(name);
    for (const auto& full : enumerate_runs(sys, sys.initial_configuration(), 8)) {
      for (std::size_t b = 0; b <= full.length(); ++b) {
        auto r = full.slice(b, full.length());
        const Stack& s = r.front().stack;
        bool prefixed = true, above = true;
        for (std::size_t i = 0; i <= r.length(); ++i) {
          prefixed = prefixed && is_prefix(s, r.at(i).stack);
          above = above && r.at(i).stack.width() >= s.width();
        }
        bool ends_prefixed = is_prefix(s, r.back().stack);
        if (!prefixed && !(above && ends_prefixed)) continue;
        std::vector<Word> ws;
        for (const auto& e : s.entries()) ws.push_back(e.word());
        auto deeper = ws;
        deeper.insert(deeper.begin(), Word{kBottom, 1, 1});
        auto shallow = ws;
        shallow.back() = Word{kBottom};
        if (s.top_symbol() != kBottom) shallow.back().push_back(s.top_symbol());
        for (const auto& u : {make_stack2(deeper), make_stack2(shallow)}) {
          auto check = [&](const Run& out, const char* mode) {
            t.expect(out.front() == Configuration{r.front().state, replace_prefix(r.front().stack, s, u)},
                     std::string(mode) + " start");
            t.expect(out.back() == Configuration{r.back().state, replace_prefix(r.back().stack, s, u)},
                     std::string(mode) + " end");
            bool replays = true;
            try {
              Run::replay(sys, out.front(), out.steps());
            } catch (const Error&) {
              replays = false;
            }
            t.expect(replays, std::string(mode) + " replay");
          };
          if (prefixed) {
            auto out = replace_prefix_run(sys, r, s, u, ReplaceMode::Basic);
            check(out, "basic");
            for (std::size_t i = 0; i <= r.length(); ++i)
              t.expect(out.at(i).stack == replace_prefix(r.at(i).stack, s, u), "basic position");
          } else {
            // u keeps the top word of s in the deeper variant only
            const bool same_top = u.top_word() == s.top_word();
            try {
              check(replace_prefix_run(sys, r, s, u, ReplaceMode::Gaps, 64), "gaps");
              ++gap_runs;
            } catch (const Error& e) {
              if (e.code() == ErrorCode::BudgetExhausted) {
                ++gap_budget;
              } else {
                t.expect(e.code() == ErrorCode::SignatureMismatch && !same_top,
                         std::string("gaps: ") + e.what());
              }
            }
          }
        }
      }
    }
  }
  ok = t.violations == 0 && gap_runs > 0;
  return t.summary() + ", " + std::to_string(gap_runs) + " replaced runs with gaps (" + std::to_string(gap_budget) +
         " out of budget)";
}

std::string relevant_ancestors_laws(bool& ok) {
  Tally t;
  for (const char* name : {"fig1.nps", "pushpop1.nps", "mixed2.nps"}) {
    auto sys = fixture(name);
    auto tree = truncate(sys, 10);
    std::vector<std::map<unsigned, std::set<std::size_t>>> rel(tree.nodes.size());
    for (std::size_t n = 0; n < tree.nodes.size(); ++n) {
      const Run& r = tree.nodes[n];
      auto cs = configs(r);
      auto w = oracle::widths(cs);
      const std::size_t width = w.back();
      for (unsigned l = 0; l <= 9; ++l) {
        auto anc = relevant_ancestors(r, l);
        std::set<std::size_t> lens;
        for (const auto& a : anc) lens.insert(a.length);
        rel[n][l] = lens;
        if (l > 3 && l != 6 && l != 9) continue;
        t.expect(lens == oracle::relevant_by_closure(cs, l), std::string(name) + " closure " + format_steps(r.steps()));
        if (l > 3) continue;
        t.expect(anc.size() <= (std::size_t{1} << (2 * l)), "more than 4^l ancestors");
        for (std::size_t i = 1; i < anc.size(); ++i) {
          t.expect(anc[i - 1].length < anc[i].length, "not a chain");
          std::size_t a = anc[i - 1].length, b = anc[i].length;
          t.expect(b == a + 1 || oracle::plus_by_widths(cs, a, b),
                   std::string(name) + " successive ancestors " + std::to_string(a) + "," + std::to_string(b));
        }
        for (const auto& a : anc) {
          std::size_t aw = w[a.length];
          t.expect((aw > width ? aw - width : width - aw) <= l, "width distance");
        }
        // minimal element
        std::size_t min_len = anc.front().length;
        if (width <= l) {
          t.expect(w[min_len] == 1, "minimal element above width 1");
        } else {
          std::size_t last = 0;
          for (std::size_t i = 0; i < w.size(); ++i)
            if (w[i] == width - l) last = i;
          t.expect(min_len == last, std::string(name) + " minimal element of " + format_steps(r.steps()));
          for (std::size_t i = 1; i < anc.size(); ++i) t.expect(w[anc[i].length] > w[min_len], "minimal width");
        }
      }
    }
    // composition and the 3l corollary
    for (std::size_t n2 = 0; n2 < tree.nodes.size(); ++n2)
      for (unsigned l1 = 0; l1 <= 3; ++l1)
        for (std::size_t len1 : rel[n2][l1]) {
          std::size_t n1 = *tree.find(std::vector<TransitionId>(tree.nodes[n2].steps().begin(),
                                                                tree.nodes[n2].steps().begin() +
                                                                    static_cast<std::ptrdiff_t>(len1)));
          for (unsigned l2 = 0; l2 + l1 <= 6 && l2 <= 3; ++l2) {
            const auto& big = rel[n2][l1 + l2];
            for (std::size_t x : rel[n1][l2]) t.expect(big.count(x) != 0, "composition inclusion");
            for (std::size_t x : rel[n2][l2])
              if (x <= len1) t.expect(rel[n1][l1 + l2].count(x) != 0, "composition below");
          }
        }
    for (std::size_t a = 0; a < tree.nodes.size(); ++a)
      for (std::size_t b = 0; b < tree.nodes.size(); ++b)
        for (unsigned l = 1; l <= 3; ++l)
          for (std::size_t x : rel[a][l]) {
            if (!rel[b][l].count(x)) continue;
            // x is a prefix length shared by both runs
            if (!tree.nodes[a].prefix(x).is_prefix_of(tree.nodes[b])) continue;
            for (std::size_t y : rel[a][l])
              if (y <= x) t.expect(rel[b][3 * l].count(y) != 0, "3l corollary");
          }
  }
  ok = t.violations == 0;
  return t.summary();
}

std::string word_types(bool& ok) {
  Tally t;
  // Games: every two-coloured successor chain up to 5 elements, every
  // directed graph up to 3 elements, and random structures of 4 and 5.
  std::vector<Structure> pool;
  for (std::size_t n = 1; n <= 5; ++n)
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<std::uint64_t> labels;
      for (std::size_t i = 0; i < n; ++i) labels.push_back((mask >> i) & 1);
      pool.push_back(chain_structure(labels));
    }
  std::size_t chains = pool.size();
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t mask = 0; mask < (std::size_t{1} << (n * n)); ++mask) {
      Structure s;
      s.size = n;
      Relation r;
      for (std::size_t i = 0; i < n * n; ++i)
        if ((mask >> i) & 1) r.tuples.insert({static_cast<Element>(i / n), static_cast<Element>(i % n)});
      s.relations.push_back(r);
      pool.push_back(s);
    }
  std::size_t games = 0;
  auto compare = [&](const Structure& a, const Structure& b, unsigned k) {
    ++games;
    t.expect(fo_equiv(a, {}, b, {}, k) == oracle::ef_game(a, {}, b, {}, k), "fo_equiv differs from the game tree");
  };
  for (std::size_t i = 0; i < chains; ++i)
    for (std::size_t j = 0; j < chains; ++j)
      for (unsigned k = 0; k <= 2; ++k) compare(pool[i], pool[j], k);
  for (std::size_t i = chains; i < pool.size(); ++i)
    for (std::size_t j = chains; j < pool.size(); ++j)
      if (pool[i].size + pool[j].size <= 5 || (i + j) % 7 == 0)
        for (unsigned k = 0; k <= 2; ++k) compare(pool[i], pool[j], k);
  std::mt19937 rng(9);
  for (int iter = 0; iter < 400; ++iter) {
    auto make = [&] {
      Structure s;
      s.size = 4 + rng() % 2;
      for (std::size_t i = 0; i < s.size; ++i) s.labels.push_back(rng() % 2);
      Relation r;
      for (Element a = 0; a < s.size; ++a)
        for (Element b = 0; b < s.size; ++b)
          if (rng() % 4 == 0) r.tuples.insert({a, b});
      s.relations.push_back(r);
      return s;
    };
    auto a = make(), b = make();
    for (unsigned k = 0; k <= 2; ++k) compare(a, b, k);
  }

  // Right congruence and Pop1 compatibility on equivalent word pairs, z = 2.
  auto sys = fixture("unary2.nps");
  WordTyper typer(sys, 2, 512);
  std::vector<Word> words;
  for (Word w{kBottom, 1}; w.size() <= 24; w.push_back(1)) words.push_back(w);
  std::size_t pairs = 0;
  for (unsigned n : {1u, 2u})
    for (std::size_t i = 0; i < words.size(); ++i)
      for (std::size_t j = i + 1; j < words.size(); ++j) {
        if (typer.word_equiv(words[i], words[j], n) != Verdict::Equivalent) continue;
        ++pairs;
        Word a = words[i], b = words[j];
        a.push_back(1);
        b.push_back(1);
        t.expect(typer.word_equiv(a, b, n) == Verdict::Equivalent, "right congruence");
        Stack s1 = make_stack2({Word{kBottom}, words[i]}), s2 = make_stack2({Word{kBottom}, words[j]});
        t.expect(typer.stack_equiv(apply_op(s1, StackOp::pop(1)), apply_op(s2, StackOp::pop(1)), n - 1, 1) ==
                     Verdict::Equivalent,
                 "pop1 compatibility");
      }
  t.expect(pairs >= 50, "only " + std::to_string(pairs) + " equivalent pairs");
  ok = t.violations == 0;
  return t.summary() + ", " + std::to_string(games) + " games, " + std::to_string(pairs) + " equivalent word pairs";
}

std::string ancestor_isomorphism(bool& ok) {
  Tally t;
  std::size_t positive = 0;
  for (const char* name : {"fig1.nps", "pushpop1.nps", "mixed2.nps"}) {
    auto sys = fixture(name);
    auto tree = truncate(sys, 8);
    std::optional<WordTyper> typer;
    if (sys.level() == 2) typer.emplace(sys, 2, 64);
    std::vector<AncestorStructure> structs;
    for (const auto& node : tree.nodes)
      structs.push_back(typer ? ancestor_structure(*typer, {node}, 1, 1, 1) : ancestor_structure_plain({node}, 1));
    for (std::size_t i = 0; i < structs.size(); ++i)
      for (std::size_t j = 0; j < structs.size(); ++j) {
        const auto& a = structs[i];
        const auto& b = structs[j];
        if (!iso_check(a, b)) continue;
        auto phi = iso_map(a, b);
        t.expect(phi.has_value(), "iso_check without a map");
        if (!phi) continue;
        ++positive;
        for (std::size_t x = 0; x < a.nodes.size(); ++x) {
          const Run& ax = a.nodes[x];
          const Run& bx = b.nodes[(*phi)[x]];
          t.expect(ax.back().state == bx.back().state, "state");
          for (std::size_t y = 0; y < a.nodes.size(); ++y) {
            const Run& ay = a.nodes[y];
            const Run& by = b.nodes[(*phi)[y]];
            auto delta = [](const Run& p, const Run& q) {
              return q.length() == p.length() + 1 && p.is_prefix_of(q) ? std::optional(q.steps().back())
                                                                       : std::nullopt;
            };
            t.expect(delta(ax, ay) == delta(bx, by), std::string(name) + " delta atom");
            auto ca = configs(ay), cb = configs(by);
            bool ja = ax.is_prefix_of(ay) && oracle::jump_by_widths(ca, ax.length(), ay.length());
            bool jb = bx.is_prefix_of(by) && oracle::jump_by_widths(cb, bx.length(), by.length());
            t.expect(ja == jb, std::string(name) + " jump atom");
          }
        }
      }
  }
  ok = t.violations == 0 && positive > 0;
  return t.summary() + ", " + std::to_string(positive) + " isomorphic pairs";
}

std::string model_checker(bool& ok) {
  Tally t;
  auto formulas = formula_gen::closed_formulas(2);
  std::size_t evaluations = 0;
  for (const char* name : {"fig1.nps", "pushpop1.nps", "mixed2.nps"}) {
    auto sys = fixture(name);
    for (std::size_t d = 0; d <= 6; ++d) {
      auto s = uniform_constraint(sys, d);
      BoundedChecker oracle(sys, d);
      for (const auto& f : formulas) {
        bool got = s_model_check(sys, *f, *s);
        bool negated = s_model_check(sys, *to_nnf(Formula::neg(f)), *s);
        ++evaluations;
        t.expect(got == oracle.check(*f), std::string(name) + " D=" + std::to_string(d) + " " + print_formula(*f));
        t.expect(got != negated, "De Morgan " + print_formula(*f));
      }
    }
  }
  ok = t.violations == 0;
  return t.summary() + ", " + std::to_string(formulas.size()) + " formulas, " + std::to_string(evaluations) +
         " evaluations";
}

std::string loop_languages(bool& ok) {
  Tally t;
  auto sys = fixture("pushpop1.nps");
  const std::size_t max_len = 10;
  std::size_t words_checked = 0;
  for (StateId q = 0; q < sys.num_states(); ++q)
    for (StateId r = 0; r < sys.num_states(); ++r)
      for (Symbol a = 1; a < sys.alphabet().size(); ++a) {
        Configuration start{q, Stack::from_word({kBottom, a})};
        std::set<std::vector<TransitionId>> loops;
        std::vector<std::vector<TransitionId>> all;
        oracle::all_runs(sys, start, max_len, [&](const auto& steps, const auto& cs) {
          all.push_back(steps);
          for (const auto& c : cs)
            if (c.stack.width() < 2) return;
          if (cs.back() == Configuration{r, start.stack}) loops.insert(steps);
        });
        auto g = loops_to_cfl(sys, q, r, a);
        oracle::Cyk cyk(g);
        for (const auto& w : all) t.expect(cyk.accepts(w) == (loops.count(w) != 0), "CYK membership vs loop set");
        auto res = cfl_shortest_words(g, loops.size() + 5);
        std::set<std::vector<TransitionId>> short_words;
        for (std::size_t i = 0; i < res.words.size(); ++i) {
          const auto& w = res.words[i];
          ++words_checked;
          t.expect(cyk.accepts(w), "shortest word rejected by CYK");
          if (i > 0) t.expect(length_lex_less(res.words[i - 1], w), "order or duplicate");
          if (w.size() <= max_len) short_words.insert(w);
        }
        bool enough = !res.words.empty() && res.words.back().size() > max_len;
        t.expect(enough || res.complete, "too few shortest words to cover length 10");
        t.expect(short_words == loops, "language differs from the loop set");
        for (const auto& w : short_words) {
          bool valid = true;
          try {
            auto run = Run::replay(sys, start, w);
            valid = run.back() == Configuration{r, start.stack};
          } catch (const Error&) {
            valid = false;
          }
          t.expect(valid, "word does not replay as a loop");
        }
      }
  // a^n b^n
  Grammar g;
  g.nonterminals = {"S"};
  g.productions = {{0, {GrammarSymbol::t(0), GrammarSymbol::nt(0), GrammarSymbol::t(1)}},
                   {0, {GrammarSymbol::t(0), GrammarSymbol::t(1)}}};
  auto ab = cfl_shortest_words(g, 2).words;
  t.expect(ab == std::vector<std::vector<TransitionId>>{{0, 1}, {0, 0, 1, 1}}, "a^n b^n");
  ok = t.violations == 0;
  return t.summary() + ", " + std::to_string(words_checked) + " shortest words";
}

struct RefBounds {
  BigInt h, w, len;
};

BigInt pow4(const BigInt& e) { return boost::multiprecision::pow(BigInt(4), static_cast<unsigned>(e)); }

RefBounds reference_bounds(unsigned n, const BigInt& l, const BigInt& n1, const BigInt& n2, const BigInt& q,
                           const BigInt& c, const BigInt& lam_v, const BigInt& lam_m) {
  if (n == 0) return {0, 0, 0};
  auto prev = reference_bounds(n - 1, 4 * l + 5, n1 + 2 * (l + 1) + 1, n2 + pow4(l + 1) + 1, q, c, lam_v, lam_m);
  auto bh1 = [&](const BigInt& a, const BigInt& b) { return 1 + b + a * (q * c); };
  BigInt loc = bh1(BigInt(n - 1) * pow4(4 * l + 3), prev.h);
  loc += (pow4(l + 1) - 1) * (1 + q * c);
  BigInt glob1 = prev.h + c * q * q + (q * c + 1);
  BigInt glob = glob1 + (n1 + pow4(l) - 1) * (1 + q * c);
  BigInt h = std::max(loc, glob);
  BigInt w = prev.w + q + n1 + 2 * (l + 1);
  BigInt lam = h <= 0 ? BigInt(0) : lam_v + (h - 1) * lam_m;
  return {h, w, prev.len + (pow4(l + 1) + 1) * h * w * (1 + lam)};
}

std::string bound_recurrences(bool& ok) {
  Tally t;
  auto sys = parse_system(
      "level: 2\nbottom: _\nalphabet: _\nstates: p q\ninitial: p\ndelta:\n  p _ -> q clone2\n  q _ -> p pop2\n");
  std::size_t digits = 0;
  for (unsigned c : {1u, 2u, 5u})
    for (unsigned l : {0u, 1u})
      for (unsigned n = 0; n <= 3; ++n) {
        BoundInputs in;
        in.classes = ClassCounts::constant(c);
        in.lambda = LengthBoundTable::constant(2, 2, 3, 1);
        auto tab = bound_tables(sys, n, l, 1, 1, in);
        t.expect(tab.exact(), "overflow at n=" + std::to_string(n));
        t.expect(tab.levels.front().height.value == 0 && tab.levels.front().width.value == 0 &&
                     tab.levels.front().length.value == 0,
                 "level zero not zero");
        auto ref = reference_bounds(n, l, 1, 1, 2, c, 2, 3);
        t.expect(tab.top().height.value == ref.h, "height n=" + std::to_string(n));
        t.expect(tab.top().width.value == ref.w, "width n=" + std::to_string(n));
        t.expect(tab.top().length.value == ref.len, "length n=" + std::to_string(n));
        for (std::size_t i = 1; i < tab.levels.size(); ++i) {
          const auto& lv = tab.levels[i];
          const auto& prev = tab.levels[i - 1];
          // each stored entry against its own defining equation
          BigInt q = 2;
          t.expect(lv.loc_first.value == 1 + prev.height.value + BigInt(lv.n - 1) * pow4(4 * lv.l + 3) * q * c,
                   "first local height");
          t.expect(lv.glob_first.value == prev.height.value + c * q * q + (q * c + 1), "first global height");
          t.expect(lv.height.value == std::max(lv.loc_last.value, lv.glob_last.value), "height is the max");
          t.expect(lv.width.value == prev.width.value + lv.width_word.value + lv.n1 + 2 * (lv.l + 1), "width");
          t.expect(lv.length.value == prev.length.value + (pow4(lv.l + 1) + 1) * lv.height.value * lv.width.value *
                                                              (1 + lv.loop_length.value),
                   "length");
          t.expect(lv.height.value >= prev.height.value && lv.length.value >= prev.length.value, "monotone");
        }
        digits = std::max(digits, tab.top().length.value.str().size());
      }
  ok = t.violations == 0;
  return t.summary() + ", largest length bound has " + std::to_string(digits) + " digits";
}

std::string strategy_search(bool& ok) {
  Tally t;
  auto sys = fixture("fig1.nps");
  const GameParams next{0, 1, 1};
  WordTyper typer(sys, 1025, 64);
  Run root(sys.initial_configuration());
  std::size_t answered = 0, exhausted = 0, longest = 0;
  std::vector<TransitionId> steps{0, 1};
  for (int k = 0; k < 5; ++k) {
    std::vector<TransitionId> s = steps;
    for (int i = 0; i < 2 * k + 1; ++i) s.push_back(2);
    s.push_back(3);
    Run move = Run::replay(sys, root.front(), s);
    try {
      auto ans = duplicator_response(typer, {root}, {root}, move, next, 10'000);
      auto goal = ancestor_structure(typer, {root, move}, next.l, next.n1, next.n2);
      auto got = ancestor_structure(typer, {root, ans.run}, next.l, next.n1, next.n2);
      t.expect(iso_check(goal, got), "answer not isomorphic");
      t.expect(ans.run.length() <= move.length(), "answer longer than the query");
      t.expect(ans.examined <= 10'000, "budget overrun");
      longest = std::max(longest, ans.run.length());
      ++answered;
    } catch (const Error& e) {
      t.expect(e.code() == ErrorCode::BudgetExhausted, std::string("unexpected error: ") + e.what());
      ++exhausted;
    }
  }
  t.expect(answered == 5, std::to_string(exhausted) + " queries out of budget");
  ok = t.violations == 0;
  return t.summary() + ", " + std::to_string(answered) + " verified answers, longest " + std::to_string(longest);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<std::string(bool&)> run;
  };
  const std::vector<Criterion> criteria{
      {"stack algebra", stack_algebra},
      {"milestones", milestones},
      {"run counting", counting},
      {"prefix replacement", prefix_replacement},
      {"relevant ancestors", relevant_ancestors_laws},
      {"word types", word_types},
      {"ancestor isomorphism", ancestor_isomorphism},
      {"model checker vs bounded oracle", model_checker},
      {"loop languages", loop_languages},
      {"bound recurrences", bound_recurrences},
      {"strategy search", strategy_search},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
      detail = criteria[i].run(ok);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 60) {
      ok = false;
      detail += ", over the 60 s limit";
    }
    std::printf("%s %2zu %s (%.1f s): %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name, secs, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
