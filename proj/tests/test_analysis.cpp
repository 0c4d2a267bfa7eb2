#include <gtest/gtest.h>

#include "hont/analysis.hpp"
#include "hont/error.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace hont;
using testing_support::fixture;
using testing_support::run_of;

namespace {

const Alphabet kAlpha({"_", "a", "b", "c", "d", "e", "f"});

Stack S(const char* text) { return parse_stack(kAlpha, 2, text); }

std::vector<StackOp> ops_by_search(const Stack& target, std::size_t max_len) {
  // breadth-first over {Push a..f, Pop1, Clone2}
  std::vector<std::pair<Stack, std::vector<StackOp>>> layer{{Stack::initial(2), {}}};
  for (std::size_t len = 0; len <= max_len; ++len) {
    std::vector<std::pair<Stack, std::vector<StackOp>>> next;
    for (auto& [s, ops] : layer) {
      if (s == target) return ops;
      std::vector<StackOp> moves{StackOp::pop(1), StackOp::clone(2)};
      for (Symbol c = 1; c < kAlpha.size(); ++c) moves.push_back(StackOp::push(c));
      for (const auto& op : moves)
        if (auto t = try_apply(s, op)) {
          auto o = ops;
          o.push_back(op);
          next.emplace_back(*t, o);
        }
    }
    layer = std::move(next);
  }
  return {StackOp::pop(2)};  // marker: not found
}

TEST(Milestones, InitialStack) {
  auto ms = generalized_milestones(Stack::initial(2));
  ASSERT_EQ(ms.size(), 1u);
  EXPECT_EQ(ms[0].stack, Stack::initial(2));
  EXPECT_TRUE(minimal_op_sequence(Stack::initial(2)).empty());
}

TEST(Milestones, ContainsFigureExample) {
  auto ms = generalized_milestones(S("_ab:_ad:_aef:_aef"));
  bool found = false;
  for (const auto& m : ms) found |= m.stack == S("_ab:_ad:_ae");
  EXPECT_TRUE(found);
}

TEST(Milestones, MinimalSequencesMatchSearch) {
  EXPECT_EQ(minimal_op_sequence(S("_:_a")), (std::vector<StackOp>{StackOp::clone(2), StackOp::push(1)}));
  EXPECT_EQ(minimal_op_sequence(S("_a:_")),
            (std::vector<StackOp>{StackOp::push(1), StackOp::clone(2), StackOp::pop(1)}));
  for (const char* t : {"_:_a", "_a:_", "_ab:_a", "_a:_b", "_:_:_a"}) {
    auto s = S(t);
    auto ops = minimal_op_sequence(s);
    EXPECT_EQ(ops, ops_by_search(s, 5)) << t;
    EXPECT_EQ(ops.size() + 1, generalized_milestones(s).size()) << t;
  }
}

TEST(Milestones, SequenceVisitsMilestones) {
  auto s = S("_ab:_ad:_aef:_aef");
  auto ops = minimal_op_sequence(s);
  auto ms = generalized_milestones(s);
  ASSERT_EQ(ops.size() + 1, ms.size());
  Stack cur = Stack::initial(2);
  EXPECT_EQ(cur, ms[0].stack);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    cur = apply_op(cur, ops[i]);
    EXPECT_EQ(cur, ms[i + 1].stack);
  }
  EXPECT_EQ(cur, s);
  EXPECT_LE(ms.size(), 2 * s.height() * s.width());
}

TEST(Milestones, UnreachableStack) {
  EXPECT_THROW(generalized_milestones(Stack::from_entries({Stack::from_word({1})})), Error);
}

TEST(Counts, FigureOneLoopsAndReturns) {
  auto sys = fixture("fig1.nps");
  Word w{kBottom, 1};
  auto loops = count_runs(sys, w, RunKind::Loop, 2, 64);
  auto rets = count_runs(sys, w, RunKind::Return, 2, 64);
  EXPECT_TRUE(loops.exact);
  EXPECT_TRUE(rets.exact);
  for (StateId q = 0; q < 3; ++q)
    for (StateId r = 0; r < 3; ++r) {
      EXPECT_EQ(loops.counts.get(q, r), q == r ? 1u : 0u);
      EXPECT_EQ(rets.counts.get(q, r), q == 1 && r == 2 ? 2u : 0u);
    }
}

TEST(Counts, AgreeWithEnumeration) {
  const std::pair<RunKind, oracle::CountKind> kinds[] = {{RunKind::Loop, oracle::CountKind::Loop},
                                                         {RunKind::HighLoop, oracle::CountKind::HighLoop},
                                                         {RunKind::Return, oracle::CountKind::Return}};
  for (const char* name : {"fig1.nps", "mixed2.nps"}) {
    auto sys = fixture(name);
    for (Word w : {Word{0}, Word{0, 1}, Word{0, 1, 1}}) {
      if (sys.alphabet().size() > 2 && w.size() == 3) w[2] = 2;
      for (auto [kind, ok] : kinds) {
        auto res = count_runs(sys, w, kind, 2, 64);
        auto expected = oracle::count_in_context(sys, Stack::initial(2), w, ok, 2, 12);
        ASSERT_TRUE(res.exact) << name;
        EXPECT_EQ(res.counts.values(), expected) << name << " " << run_kind_name(kind) << " |w|=" << w.size();
        for (StateId q = 0; q < sys.num_states() && kind != RunKind::Return; ++q) EXPECT_GE(res.counts.get(q, q), 1u);
      }
    }
  }
}

TEST(Counts, LoopsIndependentOfContext) {
  auto sys = fixture("mixed2.nps");
  for (Word w : {Word{0}, Word{0, 1}, Word{0, 1, 2}}) {
    auto a = oracle::count_in_context(sys, Stack::initial(2), w, oracle::CountKind::Loop, 2, 12);
    auto b = oracle::count_in_context(sys, S("_:_a"), w, oracle::CountKind::Loop, 2, 12);
    EXPECT_EQ(a, b);
    EXPECT_EQ(count_runs(sys, w, RunKind::Loop, 2, 64).counts.values(), b);
  }
}

TEST(Counts, RejectsLevelOne) { EXPECT_THROW(count_runs(fixture("pushpop1.nps"), {0}, RunKind::Loop, 2, 8), Error); }

TEST(Gaps, FullyPrefixedRun) {
  auto sys = fixture("fig1.nps");
  auto r = run_of(sys, "0,1,2").slice(1, 3);
  auto parts = gap_decompose(r, S("_:_"), GapMode::Prefixed);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0].kind, PartKind::Prefixed);
  EXPECT_EQ(parts[0].end, 2u);
}

TEST(Gaps, ReturnEndsWithPop) {
  auto sys = fixture("fig1.nps");
  Configuration c{sys.state_id("q1"), S("_:_a")};
  auto r = hont::Run::replay(sys, c, std::vector<TransitionId>{2, 3});
  auto parts = gap_decompose(r, std::nullopt, GapMode::Return);
  ASSERT_FALSE(parts.empty());
  EXPECT_EQ(parts[0].kind, PartKind::Prefixed);
  EXPECT_EQ(parts[0].end - parts[0].begin, 1u);
  EXPECT_EQ(parts.back().end, r.length());
}

TEST(Gaps, ClassificationMatchesDirectTest) {
  auto sys = fixture("mixed2.nps");
  std::size_t checked = 0;
  for (const auto& r : enumerate_runs(sys, sys.initial_configuration(), 8)) {
    for (std::size_t b = 0; b < r.length(); ++b) {
      if (r.at(b).stack.width() < 2) continue;
      const auto& s = r.at(b).stack;
      for (std::size_t e = b + 1; e <= r.length(); ++e) {
        auto seg = r.slice(b, e);
        bool is_return = true, is_loop = seg.back().stack == s;
        for (std::size_t i = 1; i <= seg.length(); ++i) {
          auto w = seg.at(i).stack.width();
          if (w < s.width()) is_loop = false;
          if (i < seg.length() && w < s.width()) is_return = false;
        }
        is_return = is_return && seg.back().stack == *pop2_times(s, 1);
        if (!is_loop && !is_return) continue;
        auto parts = gap_decompose(seg, std::nullopt, is_loop ? GapMode::Loop : GapMode::Return);
        ++checked;
        EXPECT_EQ(parts.front().begin, 0u);
        EXPECT_EQ(parts.back().end, seg.length());
        for (std::size_t p = 0; p < parts.size(); ++p) {
          if (p > 0) EXPECT_EQ(parts[p].begin, parts[p - 1].end);
          const auto& a = seg.at(parts[p].begin).stack;
          const auto& z = seg.at(parts[p].end).stack;
          switch (parts[p].kind) {
            case PartKind::Prefixed:
              for (std::size_t i = parts[p].begin; i <= parts[p].end; ++i) EXPECT_TRUE(is_prefix(s, seg.at(i).stack));
              break;
            case PartKind::Loop:
            case PartKind::LoopThenPush: EXPECT_EQ(a, z); break;
            case PartKind::Return:
            case PartKind::FinalPop: EXPECT_EQ(z, *pop2_times(a, 1)); break;
          }
        }
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(Carayol, EmptyRun) {
  auto sys = fixture("fig1.nps");
  auto d = carayol_decompose(hont::Run(sys.initial_configuration()));
  ASSERT_EQ(d.loops.size(), 1u);
  EXPECT_EQ(d.loops[0], std::make_pair(std::size_t{0}, std::size_t{0}));
}

TEST(Carayol, CloneThenPush) {
  auto sys = fixture("fig1.nps");
  auto d = carayol_decompose(run_of(sys, "0,1"));
  ASSERT_EQ(d.loops.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(d.loops[i].first, d.loops[i].second);
}

TEST(Carayol, SplitsAtLastVisits) {
  auto sys = fixture("mixed2.nps");
  for (const auto& r : enumerate_runs(sys, sys.initial_configuration(), 8)) {
    auto d = carayol_decompose(r);
    ASSERT_EQ(d.loops.size(), d.milestones.size());
    for (std::size_t i = 0; i < d.loops.size(); ++i) {
      auto [a, t] = d.loops[i];
      EXPECT_EQ(r.at(a).stack, d.milestones[i]);
      EXPECT_EQ(r.at(t).stack, d.milestones[i]);
      for (std::size_t p = t + 1; p <= r.length(); ++p) EXPECT_NE(r.at(p).stack, d.milestones[i]);
    }
  }
}

TEST(Replace, Identity) {
  auto sys = fixture("fig1.nps");
  auto r = run_of(sys, "0,1,2");
  auto s = S("_:_a");
  auto tail = r.slice(2, 3);
  EXPECT_EQ(replace_prefix_run(sys, tail, s, s, ReplaceMode::Basic), tail);
  EXPECT_THROW(replace_prefix_run(sys, tail, s, S("_:_b"), ReplaceMode::Basic), Error);
}

TEST(Replace, BasicReplays) {
  auto sys = fixture("mixed2.nps");
  std::size_t checked = 0;
  for (const auto& full : enumerate_runs(sys, sys.initial_configuration(), 8)) {
    for (std::size_t b = 0; b < full.length(); ++b) {
      auto r = full.slice(b, full.length());
      const auto& s = r.front().stack;
      bool prefixed = true;
      for (std::size_t i = 0; i <= r.length(); ++i) prefixed = prefixed && is_prefix(s, r.at(i).stack);
      if (!prefixed) continue;
      // u: s below an extra word, and s with its top word shortened to the top symbol
      std::vector<Word> words;
      for (const auto& e : s.entries()) words.push_back(e.word());
      auto deeper = words;
      deeper.insert(deeper.begin(), Word{kBottom, 2, 1});
      auto shallow = words;
      if (shallow.back().size() > 1) shallow.back() = Word{kBottom, shallow.back().back()};
      for (const auto& u : {make_stack2(deeper), make_stack2(shallow)}) {
        auto out = replace_prefix_run(sys, r, s, u, ReplaceMode::Basic);
        ++checked;
        EXPECT_EQ(out.steps(), r.steps());
        EXPECT_EQ(out.front().stack, u);
        EXPECT_EQ(out.back().stack, replace_prefix(r.back().stack, s, u));
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(Shrink, KeepsShortRuns) {
  auto sys = fixture("fig1.nps");
  auto table = loop_length_table(sys, 2, 3, 16);
  auto r = run_of(sys, "0,1,3");
  EXPECT_EQ(shrink_run(sys, r, {}, 2, table, ShrinkMode::FromInitial), r);
}

TEST(Shrink, PumpedRun) {
  auto sys = fixture("fig1.nps");
  auto table = loop_length_table(sys, 2, 3, 16);
  auto pumped = run_of(sys, "0,1,2,2,2,2,3");
  auto small = shrink_run(sys, pumped, {}, 2, table, ShrinkMode::FromInitial);
  EXPECT_EQ(format_steps(small.steps()), "0,1,3");
  auto next = shrink_run(sys, pumped, {small}, 2, table, ShrinkMode::FromInitial);
  EXPECT_EQ(format_steps(next.steps()), "0,1,2,3");
  EXPECT_LE(BigInt(next.length()), shrink_bound(next.back().stack, table, ShrinkMode::FromInitial));
}

TEST(LengthTable, FigureOneReturnsAreSingleSteps) {
  auto sys = fixture("fig1.nps");
  for (std::size_t k = 1; k <= 4; ++k) {
    Word w(k + 1, 1);
    w[0] = kBottom;
    auto lengths = shortest_run_lengths(sys, w, RunKind::Return, 1, 16);
    EXPECT_EQ(lengths.lengths[1 * 3 + 2], std::vector<std::size_t>{1}) << k;
  }
  auto table = loop_length_table(sys, 1, 4, 16);
  for (std::size_t h = 1; h < table.loop.size(); ++h) EXPECT_GE(table.lambda_small(h + 1), table.lambda_small(h));
}

TEST(LengthTable, NoLoopsMeansZero) {
  auto sys = parse_system("level: 2\nbottom: _\nalphabet: _ a\nstates: p q\ninitial: p\ndelta:\n  p _ -> q clone2\n");
  auto table = loop_length_table(sys, 1, 3, 8);
  for (auto v : table.loop) EXPECT_EQ(v, 0u);
  for (auto v : table.high_loop) EXPECT_EQ(v, 0u);
}

}  // namespace
