#include "hont/modelcheck.hpp"

#include <algorithm>
#include <limits>

#include "hont/error.hpp"
#include "hont/grammar.hpp"

namespace hont {

namespace {

constexpr const char* kRootName = "root";

std::size_t to_size(const Bound& b) {
  if (b.overflow || b.value > BigInt(std::numeric_limits<std::size_t>::max()))
    return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(b.value);
}

std::size_t to_size(const BigInt& v) { return to_size(Bound(v)); }

}  // namespace

// ---------------------------------------------------------------------------
// Bounded checker

BoundedChecker::BoundedChecker(const PushdownSystem& sys, std::size_t depth, std::size_t max_nodes)
    : tree_(truncate(sys, depth, max_nodes)) {
  std::size_t n = tree_.nodes.size();
  parent_.assign(n, kNone);
  label_.assign(n, 0);
  jump_source_.assign(n, kNone);
  for (const auto& e : tree_.edges) {
    if (e.kind == EdgeKind::Delta) {
      parent_[e.to] = e.from;
      label_[e.to] = e.label;
    } else if (e.kind == EdgeKind::Jump) {
      jump_source_[e.to] = e.from;
    }
  }
}

std::size_t BoundedChecker::lookup(const std::string& v,
                                   const std::vector<std::pair<std::string, std::size_t>>& env) const {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == v) return it->second;
  if (v == kRootName) return 0;
  throw Error(ErrorCode::InvalidArgument, "unassigned variable '" + v + "'");
}

bool BoundedChecker::eval(const Formula& f, std::vector<std::pair<std::string, std::size_t>>& env) const {
  using K = Formula::Kind;
  switch (f.kind) {
    case K::Exists:
    case K::Forall: {
      bool ex = f.kind == K::Exists;
      for (std::size_t i = 0; i < tree_.nodes.size(); ++i) {
        env.emplace_back(f.var, i);
        bool v = eval(*f.children[0], env);
        env.pop_back();
        if (v == ex) return ex;
      }
      return !ex;
    }
    case K::And:
      for (const auto& c : f.children)
        if (!eval(*c, env)) return false;
      return true;
    case K::Or:
      for (const auto& c : f.children)
        if (eval(*c, env)) return true;
      return false;
    case K::Not:
      return !eval(*f.children[0], env);
    case K::Eq:
      return lookup(f.args[0], env) == lookup(f.args[1], env);
    case K::Edge: {
      std::size_t x = lookup(f.args[0], env), y = lookup(f.args[1], env);
      return parent_[y] == x && (!f.label || label_[y] == *f.label);
    }
    case K::Jump:
      return jump_source_[lookup(f.args[1], env)] == lookup(f.args[0], env);
    case K::Root:
      return lookup(f.args[0], env) == 0;
  }
  return false;
}

bool BoundedChecker::check(const Formula& f, const Assignment& a) const {
  std::vector<std::pair<std::string, std::size_t>> env;
  for (const auto& [name, run] : a) {
    if (!(run.front() == tree_.nodes[0].front()))
      throw Error(ErrorCode::InvalidArgument, "assigned run does not start at the initial configuration");
    auto i = tree_.find(run.steps());
    if (!i) throw Error(ErrorCode::InvalidArgument, "assigned run is longer than the truncation depth");
    env.emplace_back(name, *i);
  }
  return eval(f, env);
}

bool check_bounded(const PushdownSystem& sys, const Formula& f, std::size_t depth, const Assignment& a) {
  return BoundedChecker(sys, depth).check(f, a);
}

// ---------------------------------------------------------------------------
// Constraints

ScheduleConstraint::ScheduleConstraint(const PushdownSystem& sys, std::vector<ArityRule> rules, std::size_t budget,
                                       std::string provenance)
    : sys_(sys), rules_(std::move(rules)), budget_(budget), provenance_(std::move(provenance)) {}

const ArityRule& ScheduleConstraint::rule(std::size_t arity) const {
  if (rules_.empty()) throw Error(ErrorCode::InvalidArgument, "constraint admits only the empty tuple");
  return rules_[std::min(arity, rules_.size() - 1)];
}

bool ScheduleConstraint::contains(const std::vector<Run>& tuple) const {
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    const Run& r = tuple[i];
    if (rules_.empty()) return false;
    const ArityRule& ru = rule(i);
    if (!(r.front() == sys_.initial_configuration())) return false;
    if (r.length() > ru.max_length) return false;
    if (ru.admit && !ru.admit(r)) return false;
  }
  return true;
}

const Run* ScheduleConstraint::fetch(Pool& p, std::size_t i, bool* cut) const {
  std::lock_guard<std::mutex> lock(mu_);
  while (p.runs.size() <= i && !p.done) {
    if (p.runs.size() >= budget_) {
      *cut = true;
      return nullptr;
    }
    auto r = p.stream.next();
    if (!r) {
      p.done = true;
      break;
    }
    p.runs.push_back(std::move(*r));
  }
  return i < p.runs.size() ? &p.runs[i] : nullptr;
}

bool ScheduleConstraint::extensions(const std::vector<Run>& tuple,
                                    const std::function<bool(const Run&)>& visit) const {
  const ArityRule& ru = rule(tuple.size());
  Pool* pool;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto& slot = pools_[ru.max_length];
    if (!slot) slot = std::make_unique<Pool>(sys_, ru.max_length);
    pool = slot.get();
  }
  for (std::size_t i = 0;; ++i) {
    bool cut = false;
    const Run* r = fetch(*pool, i, &cut);
    if (!r) return !cut;
    if (ru.admit && !ru.admit(*r)) continue;
    if (!visit(*r)) return true;
  }
}

std::shared_ptr<ScheduleConstraint> uniform_constraint(const PushdownSystem& sys, std::size_t depth,
                                                       std::size_t budget) {
  return std::make_shared<ScheduleConstraint>(sys, std::vector<ArityRule>{{depth, {}}}, budget,
                                              "uniform: all runs of length <= " + std::to_string(depth));
}

// ---------------------------------------------------------------------------
// Checker

namespace {

struct SChecker {
  const Constraint& s;
  std::vector<Run> tuple;
  std::vector<std::pair<std::string, std::size_t>> env;
  Run root;

  const Run& lookup(const std::string& v) const {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->first == v) return tuple[it->second];
    if (v == kRootName) return root;
    throw Error(ErrorCode::InvalidArgument, "unassigned variable '" + v + "'");
  }

  bool eval(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind) {
      case K::Exists:
      case K::Forall: {
        const bool ex = f.kind == K::Exists;
        bool decided = false;
        bool complete = s.extensions(tuple, [&](const Run& r) {
          tuple.push_back(r);
          env.emplace_back(f.var, tuple.size() - 1);
          bool v = eval(*f.children[0]);
          env.pop_back();
          tuple.pop_back();
          if (v == ex) decided = true;
          return !decided;
        });
        if (decided) return ex;
        if (!complete)
          throw Error(ErrorCode::BudgetExhausted, "constraint generator stopped before the quantifier was decided");
        return !ex;
      }
      case K::And:
        for (const auto& c : f.children)
          if (!eval(*c)) return false;
        return true;
      case K::Or:
        for (const auto& c : f.children)
          if (eval(*c)) return true;
        return false;
      case K::Not:
        return !eval(*f.children[0]);
      case K::Eq:
        return lookup(f.args[0]) == lookup(f.args[1]);
      case K::Edge: {
        const Run& x = lookup(f.args[0]);
        const Run& y = lookup(f.args[1]);
        return is_delta_edge(x, y) && (!f.label || y.steps().back() == *f.label);
      }
      case K::Jump:
        return is_jump_edge(lookup(f.args[0]), lookup(f.args[1]));
      case K::Root:
        return lookup(f.args[0]).empty();
    }
    return false;
  }
};

}  // namespace

bool s_model_check(const PushdownSystem& sys, const Formula& f, const Constraint& s, const Assignment& a) {
  SChecker c{s, {}, {}, Run(sys.initial_configuration())};
  for (const auto& [name, run] : a) {
    c.tuple.push_back(run);
    c.env.emplace_back(name, c.tuple.size() - 1);
  }
  if (!s.contains(c.tuple)) throw Error(ErrorCode::PreconditionViolated, "assignment is outside the constraint");
  return c.eval(f);
}

// ---------------------------------------------------------------------------
// Constraints derived from the strategy bounds

std::vector<GameParams> parameter_chain(unsigned arity) {
  std::vector<GameParams> chain(arity);
  if (arity == 0) return chain;
  chain.back() = GameParams{0, 1, 1};
  for (std::size_t m = arity - 1; m-- > 0;) chain[m] = lift_params(chain[m + 1]);
  return chain;
}

namespace {

bool ancestors_within(const Run& r, unsigned l, std::size_t max_len, std::size_t max_height, std::size_t max_width) {
  for (const auto& a : relevant_ancestors(r, l)) {
    if (a.length > max_len) return false;
    const Stack& s = r.at(a.length).stack;
    if (s.height() > max_height || s.width() > max_width) return false;
  }
  return true;
}

}  // namespace

NptConstraint constraint_2npt(const PushdownSystem& sys, unsigned r, const BoundInputs& in, const Caps& caps,
                              unsigned free, std::size_t budget) {
  NptConstraint out;
  const unsigned arity = r + free;
  auto chain = parameter_chain(arity);
  std::vector<ArityRule> rules;
  std::string prov = "2npt: rank " + std::to_string(r) + ", free " + std::to_string(free) + ", z " +
                     std::to_string(in.z) + "; classes " + in.classes.source + "; loop lengths " + in.lambda_source;
  for (unsigned m = 1; m <= arity; ++m) {
    const GameParams& p = chain[m - 1];
    ArityBounds ab;
    ab.params = p;
    auto t = bound_tables(sys, m, p.l, p.n1, p.n2, in);
    ab.length = t.top().length;
    ab.height = t.top().height;
    ab.width = t.top().width;
    ab.max_length = caps.length ? std::min(*caps.length, to_size(ab.length)) : to_size(ab.length);
    ab.max_height = caps.height ? std::min(*caps.height, to_size(ab.height)) : to_size(ab.height);
    ab.max_width = caps.width ? std::min(*caps.width, to_size(ab.width)) : to_size(ab.width);
    prov += "; arity " + std::to_string(m) + " (l=" + std::to_string(p.l) + ", n1=" + std::to_string(p.n1) +
            ", n2=" + std::to_string(p.n2) + "): length " + ab.length.str() + ", height " + ab.height.str() +
            ", width " + ab.width.str();
    if (caps.length || caps.height || caps.width) prov += " capped";
    unsigned l = p.l;
    std::size_t ml = ab.max_length, mh = ab.max_height, mw = ab.max_width;
    rules.push_back({ml, [=](const Run& run) { return ancestors_within(run, l, ml, mh, mw); }});
    out.arities.push_back(ab);
  }
  if (in.z < 2) prov += "; warning: threshold below 2";
  out.provenance = prov;
  out.constraint = std::make_shared<ScheduleConstraint>(sys, std::move(rules), budget, prov);
  return out;
}

std::size_t measured_expansion(const PushdownSystem& sys, std::size_t k) {
  std::size_t longest = 0;
  for (StateId q = 0; q < sys.num_states(); ++q)
    for (StateId q2 = 0; q2 < sys.num_states(); ++q2)
      for (Symbol a = 1; a < sys.alphabet().size(); ++a) {
        auto words = cfl_shortest_words(loops_to_cfl(sys, q, q2, a), k, 100'000);
        for (const auto& w : words.words) longest = std::max(longest, w.size());
      }
  return longest;
}

Npt1Constraint constraint_1npt(const PushdownSystem& sys, unsigned r, std::size_t expansion, unsigned free,
                               std::size_t budget) {
  if (sys.level() != 1) throw Error(ErrorCode::LevelUnsupported, "the 1-NPT constraint needs a level-1 system");
  constexpr std::size_t kShortestCap = 32;
  Npt1Constraint out;
  const unsigned arity = r + free;
  out.params = parameter_chain(arity);
  std::string prov = "1npt: rank " + std::to_string(r) + ", free " + std::to_string(free);
  if (expansion == 0) {
    expansion = std::max<std::size_t>(1, measured_expansion(sys, kShortestCap));
    prov += "; E measured over the " + std::to_string(kShortestCap) + " shortest loops = " + std::to_string(expansion);
  } else {
    prov += "; E given = " + std::to_string(expansion);
  }
  out.expansion = expansion;
  out.schedule.push_back(0);
  std::vector<ArityRule> rules;
  for (unsigned m = 1; m <= arity; ++m) {
    const unsigned next = out.params[m - 1].l;
    const unsigned cur = lift_params(out.params[m - 1]).l;
    BigInt step = (BigInt(1) << (2 * next)) * (BigInt(m) * (BigInt(1) << (2 * cur))) * expansion;
    out.schedule.push_back(out.schedule.back() + step);
    std::size_t cap = to_size(out.schedule.back());
    std::size_t seg = to_size(step);
    prov += "; C_" + std::to_string(m) + " = " + out.schedule.back().str();
    rules.push_back({cap, [=](const Run& run) {
                       // Consecutive relevant ancestors are at most one increment apart.
                       std::size_t last = 0;
                       for (const auto& a : relevant_ancestors(run, next)) {
                         if (a.length - last > seg) return false;
                         last = a.length;
                       }
                       return true;
                     }});
  }
  out.provenance = prov;
  out.constraint = std::make_shared<ScheduleConstraint>(sys, std::move(rules), budget, prov);
  return out;
}

}  // namespace hont
