#include "hont/grammar.hpp"

#include <limits>
#include <map>
#include <set>

#include "hont/error.hpp"

namespace hont {

std::string Grammar::to_string() const {
  std::string out;
  for (const auto& p : productions) {
    out += nonterminals[p.lhs] + " ->";
    if (p.rhs.empty()) out += " ε";
    for (const auto& s : p.rhs) out += " " + (s.terminal ? std::to_string(s.id) : nonterminals[s.id]);
    out += '\n';
  }
  return out;
}

Grammar reduce(const Grammar& g) {
  const std::size_t n = g.nonterminals.size();
  std::vector<bool> productive(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      if (productive[p.lhs]) continue;
      bool ok = true;
      for (const auto& s : p.rhs)
        if (!s.terminal && !productive[s.id]) ok = false;
      if (ok) productive[p.lhs] = changed = true;
    }
  }
  Grammar out;
  if (!productive[g.start]) {
    out.nonterminals = {g.nonterminals[g.start]};
    return out;
  }
  std::vector<bool> reachable(n, false);
  std::vector<std::uint32_t> todo{g.start};
  reachable[g.start] = true;
  std::vector<std::vector<const Production*>> by_lhs(n);
  for (const auto& p : g.productions) by_lhs[p.lhs].push_back(&p);
  while (!todo.empty()) {
    std::uint32_t x = todo.back();
    todo.pop_back();
    for (const Production* p : by_lhs[x]) {
      bool ok = true;
      for (const auto& s : p->rhs)
        if (!s.terminal && !productive[s.id]) ok = false;
      if (!ok) continue;
      for (const auto& s : p->rhs)
        if (!s.terminal && !reachable[s.id]) {
          reachable[s.id] = true;
          todo.push_back(s.id);
        }
    }
  }
  std::vector<std::uint32_t> renum(n, std::numeric_limits<std::uint32_t>::max());
  for (std::size_t i = 0; i < n; ++i)
    if (productive[i] && reachable[i]) {
      renum[i] = static_cast<std::uint32_t>(out.nonterminals.size());
      out.nonterminals.push_back(g.nonterminals[i]);
    }
  out.start = renum[g.start];
  for (const auto& p : g.productions) {
    if (renum[p.lhs] == std::numeric_limits<std::uint32_t>::max()) continue;
    Production q{renum[p.lhs], {}};
    bool ok = true;
    for (const auto& s : p.rhs) {
      if (s.terminal) {
        q.rhs.push_back(s);
      } else if (renum[s.id] == std::numeric_limits<std::uint32_t>::max()) {
        ok = false;
        break;
      } else {
        q.rhs.push_back(GrammarSymbol::nt(renum[s.id]));
      }
    }
    if (ok) out.productions.push_back(std::move(q));
  }
  return out;
}

namespace {

struct LoopGrammar {
  const PushdownSystem& sys;
  std::size_t nq, ns;
  Grammar g;

  explicit LoopGrammar(const PushdownSystem& s) : sys(s), nq(s.num_states()), ns(s.alphabet().size()) {
    if (sys.level() != 1) throw Error(ErrorCode::LevelUnsupported, "context-free loop languages need a level-1 system");
    for (std::size_t p = 0; p < nq; ++p)
      for (std::size_t p2 = 0; p2 < nq; ++p2)
        for (std::size_t b = 0; b < ns; ++b)
          g.nonterminals.push_back("L[" + sys.states()[p] + "," + sys.states()[p2] + "," +
                                   sys.alphabet().name(static_cast<Symbol>(b)) + "]");
    const auto& delta = sys.transitions();
    for (std::size_t p = 0; p < nq; ++p)
      for (std::size_t b = 0; b < ns; ++b) {
        g.productions.push_back({loop(p, p, b), {}});
        for (TransitionId d = 0; d < delta.size(); ++d) {
          const Transition& up = delta[d];
          if (up.from != p || up.symbol != b || up.op.kind != StackOp::Kind::Push) continue;
          Symbol c = up.op.symbol;
          for (TransitionId e = 0; e < delta.size(); ++e) {
            const Transition& down = delta[e];
            if (down.symbol != c || down.op.kind != StackOp::Kind::Pop) continue;
            for (std::size_t p2 = 0; p2 < nq; ++p2)
              g.productions.push_back({loop(p, p2, b),
                                       {GrammarSymbol::t(d), GrammarSymbol::nt(loop(up.to, down.from, c)),
                                        GrammarSymbol::t(e), GrammarSymbol::nt(loop(down.to, p2, b))}});
          }
        }
      }
  }

  std::uint32_t loop(std::size_t p, std::size_t p2, std::size_t b) const {
    return static_cast<std::uint32_t>((p * nq + p2) * ns + b);
  }
};

}  // namespace

Grammar loops_to_cfl(const PushdownSystem& sys, StateId q, StateId q_end, Symbol a) {
  LoopGrammar lg(sys);
  if (q >= lg.nq || q_end >= lg.nq || a >= lg.ns) throw Error(ErrorCode::InvalidArgument, "loop endpoint out of range");
  lg.g.start = lg.loop(q, q_end, a);
  return reduce(lg.g);
}

Grammar initial_runs_to_cfl(const PushdownSystem& sys, const Configuration& target) {
  LoopGrammar lg(sys);
  if (target.stack.level() != 1 || target.state >= lg.nq)
    throw Error(ErrorCode::InvalidArgument, "target must be a level-1 configuration of the system");
  const Word& w = target.stack.word();
  Grammar& g = lg.g;
  const std::uint32_t base = static_cast<std::uint32_t>(g.nonterminals.size());
  auto stage = [&](std::size_t i, std::size_t p) { return static_cast<std::uint32_t>(base + i * lg.nq + p); };
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t p = 0; p < lg.nq; ++p)
      g.nonterminals.push_back("I" + std::to_string(i) + "[" + sys.states()[p] + "]");
  for (std::size_t p = 0; p < lg.nq; ++p)
    g.productions.push_back({stage(0, p), {GrammarSymbol::nt(lg.loop(sys.initial_state(), p, kBottom))}});
  const auto& delta = sys.transitions();
  for (std::size_t i = 1; i < w.size(); ++i)
    for (TransitionId d = 0; d < delta.size(); ++d) {
      const Transition& t = delta[d];
      if (t.symbol != w[i - 1] || t.op.kind != StackOp::Kind::Push || t.op.symbol != w[i]) continue;
      for (std::size_t p = 0; p < lg.nq; ++p)
        g.productions.push_back({stage(i, p),
                                 {GrammarSymbol::nt(stage(i - 1, t.from)), GrammarSymbol::t(d),
                                  GrammarSymbol::nt(lg.loop(t.to, p, w[i]))}});
    }
  g.start = stage(w.size() - 1, target.state);
  return reduce(g);
}

namespace {

std::vector<std::size_t> min_lengths(const Grammar& g) {
  constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> m(g.nonterminals.size(), inf);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions) {
      std::size_t len = 0;
      for (const auto& s : p.rhs) {
        std::size_t x = s.terminal ? 1 : m[s.id];
        if (x == inf) {
          len = inf;
          break;
        }
        len += x;
      }
      if (len < m[p.lhs]) {
        m[p.lhs] = len;
        changed = true;
      }
    }
  }
  return m;
}

struct Form {
  std::size_t bound;
  std::vector<TransitionId> prefix;
  std::vector<GrammarSymbol> rest;  // empty, or starts with a nonterminal

  auto key() const { return std::tie(bound, prefix, rest); }
  bool operator<(const Form& o) const { return key() < o.key(); }
};

}  // namespace

ShortestWords cfl_shortest_words(const Grammar& g, std::size_t k, std::size_t budget) {
  ShortestWords out;
  if (k == 0 || g.language_empty()) return out;
  auto minlen = min_lengths(g);
  std::vector<std::vector<const Production*>> by_lhs(g.nonterminals.size());
  for (const auto& p : g.productions) by_lhs[p.lhs].push_back(&p);

  auto make = [&](std::vector<TransitionId> prefix, std::vector<GrammarSymbol> rest) -> std::optional<Form> {
    std::size_t i = 0;
    while (i < rest.size() && rest[i].terminal) prefix.push_back(rest[i++].id);
    rest.erase(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(i));
    std::size_t bound = prefix.size();
    for (const auto& s : rest) {
      if (s.terminal) {
        ++bound;
      } else {
        if (minlen[s.id] == std::numeric_limits<std::size_t>::max()) return std::nullopt;
        bound += minlen[s.id];
      }
    }
    return Form{bound, std::move(prefix), std::move(rest)};
  };

  std::set<Form> agenda;
  std::set<std::pair<std::vector<TransitionId>, std::vector<GrammarSymbol>>> seen;
  auto add = [&](std::optional<Form> f) {
    if (!f) return;
    if (!seen.emplace(f->prefix, f->rest).second) return;
    agenda.insert(std::move(*f));
  };
  add(make({}, {GrammarSymbol::nt(g.start)}));
  std::size_t expanded = 0;
  while (!agenda.empty() && out.words.size() < k) {
    Form f = *agenda.begin();
    agenda.erase(agenda.begin());
    if (f.rest.empty()) {
      if (out.words.empty() || out.words.back() != f.prefix) out.words.push_back(std::move(f.prefix));
      continue;
    }
    if (++expanded > budget) {
      out.complete = false;
      break;
    }
    std::uint32_t x = f.rest.front().id;
    for (const Production* p : by_lhs[x]) {
      std::vector<GrammarSymbol> rest(p->rhs);
      rest.insert(rest.end(), f.rest.begin() + 1, f.rest.end());
      add(make(f.prefix, std::move(rest)));
    }
  }
  return out;
}

}  // namespace hont
