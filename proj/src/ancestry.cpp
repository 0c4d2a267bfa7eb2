#include "hont/ancestry.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "hont/bigint.hpp"
#include "hont/error.hpp"

namespace hont {

namespace {

using TauFn = std::function<std::vector<std::uint32_t>(const Configuration&)>;

AncestorStructure build_structure(const std::vector<Run>& tuple, unsigned l, const TauFn& tau) {
  AncestorStructure a;
  a.l = l;
  a.tuple = tuple;
  std::map<std::vector<TransitionId>, std::pair<std::size_t, std::size_t>> where;  // steps -> (tuple idx, len)
  std::vector<std::vector<Ancestor>> anc(tuple.size());
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    if (j && !(tuple[j].front() == tuple[0].front()))
      throw Error(ErrorCode::InvalidArgument, "tuple runs must share their start");
    anc[j] = relevant_ancestors(tuple[j], l);
    for (const auto& x : anc[j]) {
      std::vector<TransitionId> key(tuple[j].steps().begin(),
                                    tuple[j].steps().begin() + static_cast<std::ptrdiff_t>(x.length));
      where.emplace(std::move(key), std::make_pair(j, x.length));
    }
  }
  std::vector<std::vector<TransitionId>> keys;
  for (auto& [k, v] : where) keys.push_back(k);
  std::sort(keys.begin(), keys.end(), [](const auto& x, const auto& y) { return length_lex_less(x, y); });
  std::map<std::vector<TransitionId>, std::size_t> index;
  for (const auto& k : keys) {
    auto [j, len] = where[k];
    index[k] = a.nodes.size();
    a.nodes.push_back(tuple[j].prefix(len));
  }
  a.chains.resize(tuple.size());
  a.member.assign(tuple.size(), std::vector<unsigned>(a.nodes.size(), AncestorStructure::kNotMember));
  for (std::size_t j = 0; j < tuple.size(); ++j) {
    for (const auto& x : anc[j]) {  // sorted by length already
      std::vector<TransitionId> key(tuple[j].steps().begin(),
                                    tuple[j].steps().begin() + static_cast<std::ptrdiff_t>(x.length));
      std::size_t id = index[key];
      a.chains[j].push_back(id);
      a.member[j][id] = x.level;
    }
  }
  for (const auto& n : a.nodes) a.tau.push_back(tau(n.back()));
  for (std::size_t y = 0; y < a.nodes.size(); ++y) {
    const Run& r = a.nodes[y];
    if (r.empty()) continue;
    auto p = special_predecessors(r);
    auto add = [&](std::optional<std::size_t> len, EdgeKind kind) {
      if (!len) return;
      std::vector<TransitionId> key(r.steps().begin(), r.steps().begin() + static_cast<std::ptrdiff_t>(*len));
      auto it = index.find(key);
      if (it == index.end()) return;
      a.edges.push_back({it->second, y, kind, kind == EdgeKind::Delta ? r.steps().back() : 0});
    };
    add(p.delta, EdgeKind::Delta);
    add(p.jump, EdgeKind::Jump);
    add(p.plus, EdgeKind::Plus);
  }
  std::sort(a.edges.begin(), a.edges.end());
  return a;
}

}  // namespace

AncestorStructure ancestor_structure(WordTyper& typer, const std::vector<Run>& tuple, unsigned l, unsigned n1,
                                     unsigned n2) {
  bool exact = true;
  auto tau = [&](const Configuration& c) {
    std::vector<std::uint32_t> t{c.state};
    auto cls = typer.stack_class(c.stack, n2, n1);
    t.insert(t.end(), cls.begin(), cls.end());
    if (c.stack.level() == 2) {
      const auto& e = c.stack.entries();
      std::size_t compare = e.size() > n1 ? n1 + 1 : e.size();
      for (std::size_t i = 0; i < compare; ++i) exact = exact && typer.exact(e[e.size() - 1 - i].word(), n2);
    }
    return t;
  };
  AncestorStructure a = build_structure(tuple, l, tau);
  a.n1 = n1;
  a.n2 = n2;
  a.exact = exact;
  return a;
}

AncestorStructure ancestor_structure_plain(const std::vector<Run>& tuple, unsigned l) {
  auto tau = [](const Configuration& c) {
    return std::vector<std::uint32_t>{c.state, c.stack.top_symbol()};
  };
  return build_structure(tuple, l, tau);
}

std::optional<std::vector<std::size_t>> iso_map(const AncestorStructure& a, const AncestorStructure& b) {
  if (a.tuple.size() != b.tuple.size() || a.nodes.size() != b.nodes.size()) return std::nullopt;
  constexpr std::size_t kUnset = ~std::size_t{0};
  std::vector<std::size_t> phi(a.nodes.size(), kUnset), inv(b.nodes.size(), kUnset);
  for (std::size_t j = 0; j < a.chains.size(); ++j) {
    if (a.chains[j].size() != b.chains[j].size()) return std::nullopt;
    for (std::size_t i = 0; i < a.chains[j].size(); ++i) {
      std::size_t x = a.chains[j][i], y = b.chains[j][i];
      if (phi[x] == kUnset && inv[y] == kUnset) {
        phi[x] = y;
        inv[y] = x;
      } else if (phi[x] != y || inv[y] != x) {
        return std::nullopt;
      }
    }
  }
  for (std::size_t x = 0; x < a.nodes.size(); ++x) {
    if (phi[x] == kUnset) return std::nullopt;
    if (a.tau[x] != b.tau[phi[x]]) return std::nullopt;
    for (std::size_t j = 0; j < a.member.size(); ++j)
      if (a.member[j][x] != b.member[j][phi[x]]) return std::nullopt;
  }
  std::vector<AncestorEdge> mapped;
  for (const auto& e : a.edges) mapped.push_back({phi[e.from], phi[e.to], e.kind, e.label});
  std::sort(mapped.begin(), mapped.end());
  if (mapped != b.edges) return std::nullopt;
  return phi;
}

bool iso_check(const AncestorStructure& a, const AncestorStructure& b) { return iso_map(a, b).has_value(); }

Structure to_structure(const AncestorStructure& a, std::size_t num_transitions) {
  Structure s;
  s.size = a.nodes.size();
  for (std::size_t x = 0; x < a.nodes.size(); ++x) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](std::uint64_t v) {
      h ^= v + 1;
      h *= 0x100000001b3ULL;
    };
    for (auto v : a.tau[x]) feed(v);
    feed(0xABCDEFu);
    for (const auto& m : a.member) feed(m[x]);
    s.labels.push_back(h);
  }
  s.relations.resize(num_transitions + 2);
  for (auto& r : s.relations) r.arity = 2;
  for (const auto& e : a.edges) {
    std::size_t rel = e.kind == EdgeKind::Delta ? e.label : num_transitions + (e.kind == EdgeKind::Jump ? 0 : 1);
    s.relations.at(rel).tuples.insert({static_cast<Element>(e.from), static_cast<Element>(e.to)});
  }
  return s;
}

// ---------------------------------------------------------------------------

Run transfer_extension(WordTyper& typer, const Run& context, const Run& target, const Run& ext,
                       const std::vector<Run>& existing, unsigned n, std::size_t budget) {
  const PushdownSystem& sys = typer.system();
  auto fail = [](const std::string& m) { throw Error(ErrorCode::PreconditionViolated, m); };
  if (n < 1) fail("transfer needs level at least 1");
  if (typer.threshold() <= existing.size() + 1) fail("threshold must exceed the number of transfers");
  if (!(ext.front() == context.back())) fail("extension does not start at the end of the context run");
  if (context.back().state != target.back().state) fail("context and target end in different states");
  const std::size_t w = context.back().stack.width();
  if (ext.length() < 1 || ext.at(1).stack.width() != w + 1) fail("extension must start with a clone");
  for (std::size_t i = 1; i <= ext.length(); ++i)
    if (ext.at(i).stack.width() < w + 1) fail("extension returns to its base width");
  if (ext.back().stack.width() != w + 1) fail("extension must end one word above its base");
  if (typer.word_equiv(context.back().stack.top_word(), target.back().stack.top_word(), n) != Verdict::Equivalent)
    fail("top words of context and target are not equivalent");

  auto is_existing = [&](const Run& r) { return std::find(existing.begin(), existing.end(), r) != existing.end(); };
  if (context.back() == target.back() && !is_existing(ext)) return ext;

  const Word created = ext.back().stack.top_word();
  const StateId q = ext.back().state;
  const std::size_t tw = target.back().stack.width();
  RunFilter f;
  f.keep = [tw](const Configuration& c) { return c.stack.width() >= tw + 1; };
  f.accept = [&](const Run& r) {
    return r.length() >= 1 && r.back().state == q && r.back().stack.width() == tw + 1 && !is_existing(r) &&
           typer.word_equiv(r.back().stack.top_word(), created, n - 1) == Verdict::Equivalent;
  };
  RunStream stream(sys, target.back(), budget, f);
  while (stream.generated() <= budget) {
    auto r = stream.next();
    if (!r) break;
    return *r;
  }
  throw Error(ErrorCode::BudgetExhausted, "no equivalent extension within the budget");
}

std::vector<Run> construct_ancestor_chain(WordTyper& typer, const std::vector<Run>& chain, const Run& seed,
                                          unsigned n2, std::size_t budget) {
  const PushdownSystem& sys = typer.system();
  auto fail = [](const std::string& m) { throw Error(ErrorCode::PreconditionViolated, m); };
  if (chain.empty()) fail("empty chain");
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!chain[i].is_prefix_of(chain[i + 1])) fail("chain is not ordered by prefix");
    if (!is_delta_edge(chain[i], chain[i + 1]) && !is_plus_edge(chain[i], chain[i + 1]))
      fail("chain members are not joined by Delta or plus edges");
  }
  if (seed.back().state != chain[0].back().state) fail("seed ends in a different state");
  if (typer.word_equiv(seed.back().stack.top_word(), chain[0].back().stack.top_word(), n2) != Verdict::Equivalent)
    fail("seed top word is not equivalent");

  std::vector<Run> out{seed};
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const Run& cur = out.back();
    if (is_delta_edge(chain[i], chain[i + 1])) {
      auto next = cur.extended(sys, chain[i + 1].steps().back());
      if (!next) fail("Delta step not applicable to the constructed run");
      out.push_back(std::move(*next));
      continue;
    }
    if (n2 < i + 1) fail("level exhausted before the chain ends");
    Run ext = chain[i + 1].slice(chain[i].length(), chain[i + 1].length());
    Run t = transfer_extension(typer, chain[i], cur, ext, {}, n2 - static_cast<unsigned>(i), budget);
    out.push_back(compose(cur, t));
  }
  return out;
}

GameParams lift_params(const GameParams& next) {
  GameParams p;
  p.l = 4 * next.l + 5;
  p.n1 = next.n1 + 2 * (next.l + 1) + 1;
  BigInt n2 = BigInt(next.n2) + boost::multiprecision::pow(BigInt(4), next.l + 1) + 1;
  if (n2 > BigInt(std::numeric_limits<unsigned>::max())) throw Error(ErrorCode::SizeLimit, "lifted level too large");
  p.n2 = static_cast<unsigned>(n2);
  return p;
}

DuplicatorAnswer duplicator_response(WordTyper& typer, const std::vector<Run>& tuple,
                                     const std::vector<Run>& answer_tuple, const Run& move, const GameParams& next,
                                     std::size_t budget) {
  const PushdownSystem& sys = typer.system();
  auto fail = [](const std::string& m) { throw Error(ErrorCode::PreconditionViolated, m); };
  if (tuple.size() != answer_tuple.size()) fail("tuples differ in size");
  GameParams lifted = lift_params(next);
  BigInt need = BigInt(tuple.size()) * boost::multiprecision::pow(BigInt(4), lifted.l);
  if (typer.threshold() < 2 || BigInt(typer.threshold()) <= need) fail("threshold must exceed |tuple| * 4^l");

  AncestorStructure a = ancestor_structure(typer, tuple, lifted.l, lifted.n1, lifted.n2);
  AncestorStructure b = ancestor_structure(typer, answer_tuple, lifted.l, lifted.n1, lifted.n2);
  auto phi = iso_map(a, b);
  if (!phi) fail("tuples are not related at the lifted parameters");

  std::vector<Run> with_move = tuple;
  with_move.push_back(move);
  AncestorStructure goal = ancestor_structure(typer, with_move, next.l, next.n1, next.n2);
  auto accepts = [&](const Run& cand) {
    std::vector<Run> t = answer_tuple;
    t.push_back(cand);
    return iso_check(goal, ancestor_structure(typer, t, next.l, next.n1, next.n2));
  };

  std::optional<DuplicatorAnswer> best;
  std::size_t examined = 0;
  try {
    auto anc = relevant_ancestors(move, next.l + 1);
    std::vector<Run> chain;
    for (const auto& x : anc) chain.push_back(move.prefix(x.length));
    std::map<std::vector<TransitionId>, std::size_t> in_a;
    for (std::size_t i = 0; i < a.nodes.size(); ++i) in_a[a.nodes[i].steps()] = i;
    std::size_t shared = 0;
    while (shared < chain.size() && in_a.count(chain[shared].steps())) ++shared;
    std::vector<Run> built;
    std::string strategy;
    if (shared > 0) {
      const Run& anchor = chain[shared - 1];
      Run seed = b.nodes[(*phi)[in_a[anchor.steps()]]];
      std::vector<Run> rest(chain.begin() + static_cast<std::ptrdiff_t>(shared - 1), chain.end());
      built = construct_ancestor_chain(typer, rest, seed, lifted.n2, budget);
      strategy = "local";
    } else {
      std::map<std::vector<TransitionId>, bool> in_b;
      for (const auto& n : b.nodes) in_b[n.steps()] = true;
      const Configuration& target = chain.front().back();
      RunFilter f;
      f.accept = [&](const Run& r) {
        return r.back().state == target.state && !in_b.count(r.steps()) &&
               typer.stack_equiv(r.back().stack, target.stack, lifted.n2, lifted.n1) == Verdict::Equivalent;
      };
      RunStream stream(sys, sys.initial_configuration(), budget, f);
      std::optional<Run> seed;
      while (stream.generated() <= budget) {
        auto r = stream.next();
        if (!r) break;
        seed = std::move(r);
        break;
      }
      examined += stream.generated();
      if (!seed) throw Error(ErrorCode::BudgetExhausted, "no seed run");
      built = construct_ancestor_chain(typer, chain, *seed, lifted.n2, budget);
      strategy = "global";
    }
    if (accepts(built.back())) best = DuplicatorAnswer{built.back(), strategy, examined};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PreconditionViolated && e.code() != ErrorCode::BudgetExhausted) throw;
  }

  // Look for a shorter verified answer among small runs.
  const Configuration& end = move.back();
  std::size_t max_len = best ? best->run.length() : budget;
  if (max_len > 0) {
    RunFilter f;
    f.accept = [&](const Run& r) {
      return r.back().state == end.state && top_width(r.back().stack) == top_width(end.stack) &&
             r.back().stack.top_symbol() == end.stack.top_symbol();
    };
    RunStream stream(sys, sys.initial_configuration(), best ? max_len - 1 : max_len, f);
    while (examined + stream.generated() <= budget) {
      auto r = stream.next();
      if (!r) break;
      if (best && r->length() >= best->run.length()) break;
      if (accepts(*r)) {
        best = DuplicatorAnswer{*r, "search", 0};
        break;
      }
    }
    examined += stream.generated();
  }
  if (!best) throw Error(ErrorCode::BudgetExhausted, "no verified answer within the budget");
  best->examined = examined;
  return *best;
}

}  // namespace hont
