#include "hont/analysis.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "hont/error.hpp"

namespace hont {

namespace {

void validate_words(const Stack& s) {
  if (s.level() != 2) throw Error(ErrorCode::LevelUnsupported, "level-2 stack expected");
  for (const auto& e : s.entries()) {
    const Word& w = e.word();
    if (w.empty() || w.front() != kBottom)
      throw Error(ErrorCode::Unreachable, "word without bottom symbol");
    for (std::size_t i = 1; i < w.size(); ++i)
      if (w[i] == kBottom) throw Error(ErrorCode::Unreachable, "bottom symbol inside a word");
  }
}

Word word_prefix(const Word& w, std::size_t len) {
  return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(len));
}

Stack with_top(const std::vector<Stack>& lower, const Word& v) {
  std::vector<Stack> e = lower;
  e.push_back(Stack::from_word(v));
  return Stack::from_entries(std::move(e));
}

}  // namespace

std::vector<Milestone> generalized_milestones(const Stack& s) {
  validate_words(s);
  const auto& ws = s.entries();
  std::vector<Milestone> out;
  const Word& w1 = ws[0].word();
  for (std::size_t len = 1; len <= w1.size(); ++len)
    out.push_back({make_stack2({word_prefix(w1, len)}), true});
  std::vector<Stack> lower;
  for (std::size_t i = 1; i < ws.size(); ++i) {
    lower.push_back(ws[i - 1]);
    const Word& wi = ws[i - 1].word();
    const Word& wn = ws[i].word();
    std::size_t c = common_prefix(wi, wn).size();
    for (std::size_t len = wi.size(); len >= c; --len) {
      out.push_back({with_top(lower, word_prefix(wi, len)), len == c});
      if (len == c) break;
    }
    for (std::size_t len = c + 1; len <= wn.size(); ++len)
      out.push_back({with_top(lower, word_prefix(wn, len)), true});
  }
  return out;
}

std::vector<StackOp> minimal_op_sequence(const Stack& s) {
  validate_words(s);
  const auto& ws = s.entries();
  std::vector<StackOp> ops;
  const Word& w1 = ws[0].word();
  for (std::size_t i = 1; i < w1.size(); ++i) ops.push_back(StackOp::push(w1[i]));
  for (std::size_t i = 1; i < ws.size(); ++i) {
    ops.push_back(StackOp::clone(2));
    const Word& wi = ws[i - 1].word();
    const Word& wn = ws[i].word();
    std::size_t c = common_prefix(wi, wn).size();
    for (std::size_t k = wi.size(); k > c; --k) ops.push_back(StackOp::pop(1));
    for (std::size_t k = c; k < wn.size(); ++k) ops.push_back(StackOp::push(wn[k]));
  }
  return ops;
}

std::vector<Stack> extension_milestones(const Stack& s, const Word& w) {
  validate_words(s);
  std::vector<Stack> out{s};
  std::vector<Stack> lower = s.entries();
  const Word& top = s.top_word();
  std::size_t c = common_prefix(top, w).size();
  for (std::size_t len = top.size(); len >= c; --len) {
    out.push_back(with_top(lower, word_prefix(top, len)));
    if (len == c) break;
  }
  for (std::size_t len = c + 1; len <= w.size(); ++len) out.push_back(with_top(lower, word_prefix(w, len)));
  return out;
}

// ---------------------------------------------------------------------------
// Counting

bool CountFunction::all_saturated() const {
  return std::all_of(v_.begin(), v_.end(), [&](unsigned x) { return x >= z_; });
}

const char* run_kind_name(RunKind k) {
  switch (k) {
    case RunKind::Loop: return "loop";
    case RunKind::HighLoop: return "highloop";
    case RunKind::Return: return "return";
    case RunKind::ToPrefix: return "to_prefix";
  }
  return "?";
}

Stack generic_context(const Word& w) { return make_stack2({Word{kBottom}, w}); }

namespace {

struct KindSpec {
  std::function<bool(const Configuration&)> keep;
  std::function<bool(const Configuration&)> absorb;
  // Target index of a configuration, or -1.
  std::function<int(const Configuration&)> target;
};

KindSpec make_spec(const Word& w, RunKind kind, std::size_t prefix, bool all_prefixes) {
  Stack ctx = generic_context(w);
  KindSpec spec;
  switch (kind) {
    case RunKind::Loop:
      spec.keep = [](const Configuration& c) { return c.stack.width() >= 2; };
      spec.target = [ctx](const Configuration& c) { return c.stack == ctx ? 0 : -1; };
      break;
    case RunKind::HighLoop: {
      std::optional<Stack> low;
      if (w.size() >= 2) low = make_stack2({Word{kBottom}, word_prefix(w, w.size() - 1)});
      spec.keep = [low](const Configuration& c) { return c.stack.width() >= 2 && !(low && c.stack == *low); };
      spec.target = [ctx](const Configuration& c) { return c.stack == ctx ? 0 : -1; };
      break;
    }
    case RunKind::Return:
      spec.keep = [](const Configuration&) { return true; };
      spec.absorb = [](const Configuration& c) { return c.stack.width() == 1; };
      spec.target = [](const Configuration& c) { return c.stack.width() == 1 ? 0 : -1; };
      break;
    case RunKind::ToPrefix: {
      if (!all_prefixes && prefix >= w.size())
        throw Error(ErrorCode::InvalidArgument, "prefix index out of range");
      spec.keep = [](const Configuration& c) { return c.stack.width() >= 2; };
      std::size_t n = w.size();
      if (all_prefixes) {
        spec.target = [w, n](const Configuration& c) {
          if (c.stack.width() != 2) return -1;
          const Word& v = c.stack.top_word();
          if (v.size() > n || !is_word_prefix(v, w)) return -1;
          return static_cast<int>(n - v.size());
        };
      } else {
        Stack goal = make_stack2({Word{kBottom}, word_prefix(w, n - prefix)});
        spec.target = [goal](const Configuration& c) { return c.stack == goal ? 0 : -1; };
      }
      break;
    }
  }
  return spec;
}

constexpr std::size_t kFrontierCap = 2'000'000;

// Saturating breadth-first count of runs from `start`. on_length(ell) is
// called after arrivals of length ell have been reported through on_arrive.
// Returns true when the frontier died out (every run was explored).
bool count_engine(const PushdownSystem& sys, const Configuration& start, const KindSpec& spec, unsigned z,
                  std::size_t max_len,
                  const std::function<void(int target, StateId state, unsigned count, std::size_t ell)>& on_arrive,
                  const std::function<bool(std::size_t ell)>& on_length) {
  std::unordered_map<Configuration, unsigned, ConfigurationHash> frontier, next;
  frontier.emplace(start, 1u);
  if (int t = spec.target(start); t >= 0) on_arrive(t, start.state, 1, 0);
  if (spec.absorb && spec.absorb(start)) return true;
  if (!on_length(0)) return false;
  for (std::size_t ell = 1; ell <= max_len; ++ell) {
    next.clear();
    for (const auto& [c, n] : frontier) {
      for (TransitionId t : sys.candidates(c.state, c.stack.top_symbol())) {
        auto d = sys.step(c, t);
        if (!d || !spec.keep(*d)) continue;
        auto& slot = next[*d];
        slot = std::min<unsigned>(z, slot + n);
      }
    }
    frontier.clear();
    for (auto& [c, n] : next) {
      if (int t = spec.target(c); t >= 0) on_arrive(t, c.state, n, ell);
      if (spec.absorb && spec.absorb(c)) continue;
      frontier.emplace(c, n);
    }
    if (frontier.empty()) return true;
    if (frontier.size() > kFrontierCap) return false;
    if (!on_length(ell)) return false;
  }
  return false;
}

void require_level2(const PushdownSystem& sys) {
  if (sys.level() != 2) throw Error(ErrorCode::LevelUnsupported, "counting needs a level-2 system");
}

std::vector<CountResult> count_generic(const PushdownSystem& sys, const Word& w, RunKind kind, unsigned z,
                                       std::size_t budget, std::size_t prefix, bool all_prefixes) {
  require_level2(sys);
  if (z == 0) throw Error(ErrorCode::InvalidArgument, "threshold must be positive");
  KindSpec spec = make_spec(w, kind, prefix, all_prefixes);
  std::size_t targets = all_prefixes ? w.size() : 1;
  std::size_t nq = sys.num_states();
  std::vector<CountResult> out(targets);
  for (auto& r : out) {
    r.counts = CountFunction(nq, z);
    r.exact = true;
  }
  Stack ctx = generic_context(w);
  for (StateId q = 0; q < nq; ++q) {
    // Row q of every target, snapshotted at doubling lengths.
    std::vector<std::vector<unsigned>> rows(targets, std::vector<unsigned>(nq, 0));
    std::vector<std::vector<std::vector<unsigned>>> snaps;
    std::size_t checkpoint = 8;
    bool stable = false;
    std::size_t reached = 0;
    auto row_saturated = [&] {
      for (const auto& r : rows)
        for (unsigned x : r)
          if (x < z) return false;
      return true;
    };
    bool exhausted = count_engine(
        sys, Configuration{q, ctx}, spec, z, budget,
        [&](int t, StateId r, unsigned n, std::size_t) {
          auto& x = rows[static_cast<std::size_t>(t)][r];
          x = std::min<unsigned>(z, x + n);
        },
        [&](std::size_t ell) {
          reached = ell;
          if (row_saturated()) {
            stable = true;
            return false;
          }
          if (ell == checkpoint) {
            snaps.push_back(rows);
            checkpoint *= 2;
            std::size_t k = snaps.size();
            if (k >= 3 && snaps[k - 1] == snaps[k - 2] && snaps[k - 2] == snaps[k - 3]) {
              stable = true;
              return false;
            }
          }
          return true;
        });
    bool exact = exhausted || stable || row_saturated();
    for (std::size_t t = 0; t < targets; ++t) {
      for (StateId r = 0; r < nq; ++r) out[t].counts.set(q, r, rows[t][r]);
      out[t].exact = out[t].exact && exact;
      out[t].explored_length = std::max(out[t].explored_length, reached);
    }
  }
  return out;
}

}  // namespace

CountResult count_runs(const PushdownSystem& sys, const Word& w, RunKind kind, unsigned z, std::size_t budget,
                       std::size_t prefix) {
  return count_generic(sys, w, kind, z, budget, prefix, false).front();
}

std::vector<CountResult> count_to_prefixes(const PushdownSystem& sys, const Word& w, unsigned z,
                                           std::size_t budget) {
  return count_generic(sys, w, RunKind::ToPrefix, z, budget, 0, true);
}

std::size_t ShortestLengths::max_length() const {
  std::size_t m = 0;
  for (const auto& l : lengths)
    for (auto x : l) m = std::max(m, x);
  return m;
}

ShortestLengths shortest_run_lengths(const PushdownSystem& sys, const Word& w, RunKind kind, unsigned z,
                                     std::size_t budget) {
  require_level2(sys);
  KindSpec spec = make_spec(w, kind, 0, false);
  std::size_t nq = sys.num_states();
  ShortestLengths out;
  out.states = nq;
  out.lengths.assign(nq * nq, {});
  out.complete = true;
  Stack ctx = generic_context(w);
  for (StateId q = 0; q < nq; ++q) {
    auto row_full = [&] {
      for (StateId r = 0; r < nq; ++r)
        if (out.lengths[q * nq + r].size() < z) return false;
      return true;
    };
    bool exhausted = count_engine(
        sys, Configuration{q, ctx}, spec, z, budget,
        [&](int, StateId r, unsigned n, std::size_t ell) {
          auto& l = out.lengths[q * nq + r];
          for (unsigned i = 0; i < n && l.size() < z; ++i) l.push_back(ell);
        },
        [&](std::size_t) { return !row_full(); });
    if (!exhausted && !row_full()) out.complete = false;
  }
  return out;
}

RunFilter kind_filter(const Word& w, RunKind kind, std::size_t prefix) {
  KindSpec spec = make_spec(w, kind, prefix, false);
  RunFilter f;
  f.keep = spec.keep;
  if (spec.absorb) {
    auto absorb = spec.absorb;
    f.extend = [absorb](const Run& r) { return !absorb(r.back()); };
  }
  auto target = spec.target;
  f.accept = [target](const Run& r) { return target(r.back()) >= 0; };
  return f;
}

// ---------------------------------------------------------------------------
// Decompositions

const char* part_kind_name(PartKind k) {
  switch (k) {
    case PartKind::Prefixed: return "prefixed";
    case PartKind::Loop: return "loop";
    case PartKind::Return: return "return";
    case PartKind::LoopThenPush: return "loop-then-push";
    case PartKind::FinalPop: return "final-pop";
  }
  return "?";
}

std::vector<Part> gap_decompose(const Run& r, const std::optional<Stack>& s_opt, GapMode mode) {
  const std::size_t n = r.length();
  Stack s = mode == GapMode::Prefixed ? (s_opt ? *s_opt : throw Error(ErrorCode::InvalidArgument, "prefix required"))
                                      : r.front().stack;
  if (s.level() != 2) throw Error(ErrorCode::LevelUnsupported, "level-2 runs only");
  auto fail = [](std::size_t i, const std::string& what) {
    throw Error(ErrorCode::PreconditionViolated, what + " at position " + std::to_string(i));
  };
  std::vector<char> pre(n + 1);
  for (std::size_t i = 0; i <= n; ++i) pre[i] = is_prefix(s, r.at(i).stack);
  const std::size_t width = s.width();
  switch (mode) {
    case GapMode::Prefixed:
      if (!pre[0]) fail(0, "start not prefixed");
      if (!pre[n]) fail(n, "end not prefixed");
      for (std::size_t i = 0; i <= n; ++i)
        if (r.at(i).stack.width() < width) fail(i, "width below the prefix");
      break;
    case GapMode::Loop:
      if (!(r.back().stack == s)) fail(n, "loop does not end at its start stack");
      for (std::size_t i = 1; i <= n; ++i)
        if (r.at(i).stack.width() < width) fail(i, "loop passes below its stack");
      break;
    case GapMode::Return: {
      auto low = pop2_times(s, 1);
      if (!low || !(r.back().stack == *low)) fail(n, "return does not end at Pop2 of its start");
      for (std::size_t i = 1; i < n; ++i)
        if (r.at(i).stack.width() < width) fail(i, "return reaches its target early");
      break;
    }
  }

  std::vector<Part> parts;
  std::size_t i = 0;
  while (true) {
    std::size_t j = i;
    while (j < n && pre[j + 1]) ++j;
    parts.push_back({PartKind::Prefixed, i, j});
    if (j == n) break;
    std::size_t k = j + 1;
    while (k < n && !pre[k]) ++k;
    // Gap [j, k]; k == n and !pre[n] only happens for returns.
    const Stack& a = r.at(j).stack;
    const Stack& b = r.at(k).stack;
    auto a_low = pop2_times(a, 1);
    PartKind kind;
    if (mode == GapMode::Return && k == n && k == j + 1 && a_low && b == *a_low &&
        r.front().stack.width() == a.width()) {
      kind = PartKind::FinalPop;
    } else if (b == a) {
      kind = mode == GapMode::Prefixed ? PartKind::Loop : PartKind::LoopThenPush;
    } else if (a_low && b == *a_low) {
      kind = PartKind::Return;
    } else {
      throw Error(ErrorCode::PreconditionViolated, "unclassifiable gap at " + std::to_string(j));
    }
    parts.push_back({kind, j, k});
    if (k == n && !pre[n]) break;
    i = k;
  }
  return parts;
}

CarayolDecomposition milestone_decompose(const Run& r, const std::vector<Stack>& ms) {
  CarayolDecomposition d;
  d.milestones = ms;
  auto fail = [](const std::string& what) { throw Error(ErrorCode::PreconditionViolated, what); };
  if (ms.empty() || !(r.front().stack == ms.front())) fail("run does not start at the first milestone");
  if (!(r.back().stack == ms.back())) fail("run does not end at the last milestone");
  std::size_t a = 0;
  for (std::size_t i = 0; i < ms.size(); ++i) {
    std::size_t t = r.length() + 1;
    for (std::size_t p = r.length() + 1; p-- > a;)
      if (r.at(p).stack == ms[i]) {
        t = p;
        break;
      }
    if (t > r.length()) fail("milestone " + std::to_string(i) + " not visited in order");
    d.loops.emplace_back(a, t);
    if (i + 1 < ms.size()) {
      if (t + 1 > r.length() || !(r.at(t + 1).stack == ms[i + 1]))
        fail("step after the last visit of milestone " + std::to_string(i) + " misses the next one");
      a = t + 1;
    } else if (t != r.length()) {
      fail("last milestone is not the final position");
    }
  }
  return d;
}

CarayolDecomposition carayol_decompose(const Run& r) {
  if (r.front().stack.level() != 2 || r.front().stack != Stack::initial(2))
    throw Error(ErrorCode::PreconditionViolated, "run must start at the initial stack");
  std::vector<Stack> ms;
  for (auto& m : generalized_milestones(r.back().stack)) ms.push_back(std::move(m.stack));
  return milestone_decompose(r, ms);
}

// ---------------------------------------------------------------------------
// Run replacement

namespace {

Configuration replaced(const Configuration& c, const Stack& s, const Stack& u) {
  return {c.state, replace_prefix(c.stack, s, u)};
}

// Shortest loop (never below its stack) or return (to Pop2 of its stack).
std::optional<Run> shortest_fill(const PushdownSystem& sys, const Configuration& from, const Configuration& to,
                                 bool is_return, std::size_t budget) {
  std::size_t w = from.stack.width();
  RunFilter f;
  if (is_return) {
    f.keep = [w](const Configuration& c) { return c.stack.width() + 1 >= w; };
    f.extend = [w](const Run& r) { return r.back().stack.width() >= w; };
  } else {
    f.keep = [w](const Configuration& c) { return c.stack.width() >= w; };
  }
  auto res = shortest_runs(sys, from, [&](const Configuration& c) { return c == to; }, 1, budget, f);
  if (res.runs.empty()) return std::nullopt;
  return res.runs.front();
}

}  // namespace

Run replace_prefix_run(const PushdownSystem& sys, const Run& r, const Stack& s, const Stack& u, ReplaceMode mode,
                       std::size_t budget) {
  if (s.top_symbol() != u.top_symbol())
    throw Error(ErrorCode::SignatureMismatch, "top symbols of s and u differ");
  if (mode == ReplaceMode::Basic) {
    for (std::size_t i = 0; i <= r.length(); ++i)
      if (!is_prefix(s, r.at(i).stack))
        throw Error(ErrorCode::NotAPrefix, "position " + std::to_string(i) + " is not prefixed");
    Run out(replaced(r.front(), s, u));
    for (std::size_t i = 0; i < r.length(); ++i) out.push(sys, r.steps()[i]);
    return out;
  }

  for (RunKind k : {RunKind::Loop, RunKind::Return}) {
    auto cs = count_runs(sys, s.top_word(), k, 1, budget);
    auto cu = count_runs(sys, u.top_word(), k, 1, budget);
    if (!(cs.counts == cu.counts))
      throw Error(ErrorCode::SignatureMismatch, std::string(run_kind_name(k)) + " signatures differ");
  }
  auto parts = gap_decompose(r, s, GapMode::Prefixed);
  Run out(replaced(r.front(), s, u));
  for (const auto& p : parts) {
    if (p.kind == PartKind::Prefixed) {
      for (std::size_t i = p.begin; i < p.end; ++i) out.push(sys, r.steps()[i]);
      continue;
    }
    Configuration to = replaced(r.at(p.end), s, u);
    auto fill = shortest_fill(sys, out.back(), to, p.kind == PartKind::Return, budget);
    if (!fill) throw Error(ErrorCode::BudgetExhausted, "no replacement gap run within the budget");
    out = compose(out, *fill);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Length bounds

BigInt LengthBoundTable::lambda(const BigInt& h) const {
  if (h <= 0) return 0;
  std::size_t hs = sampled_height();
  if (h <= hs) return lambda_small(static_cast<std::size_t>(h));
  BigInt f = lambda_small(hs);
  BigInt d = h - hs;
  if (n_max == 0) return std::max<BigInt>(f, m_max);
  if (n_max == 1) return f + d * m_max;
  if (d > (1 << 22)) throw Error(ErrorCode::SizeLimit, "length bound extrapolation too large");
  unsigned steps = static_cast<unsigned>(d);
  BigInt p = boost::multiprecision::pow(BigInt(n_max), steps);
  return std::max<BigInt>(f, p * f + BigInt(m_max) * (p - 1) / (n_max - 1));
}

std::size_t LengthBoundTable::lambda_small(std::size_t h) const {
  std::size_t m = 0;
  for (std::size_t i = 0; i < h && i < sampled_height(); ++i)
    m = std::max({m, loop[i], high_loop[i], ret[i]});
  if (h > sampled_height()) {
    BigInt v = lambda(h);
    if (v > BigInt(std::numeric_limits<std::size_t>::max()))
      throw Error(ErrorCode::SizeLimit, "length bound exceeds machine range");
    return static_cast<std::size_t>(v);
  }
  return m;
}

LengthBoundTable LengthBoundTable::constant(unsigned z, std::size_t value, std::size_t m_max, std::size_t n_max) {
  LengthBoundTable t;
  t.z = z;
  t.loop = {value};
  t.high_loop = {value};
  t.ret = {value};
  t.m_max = m_max;
  t.n_max = n_max;
  return t;
}

namespace {

std::vector<Word> words_of_height(const Alphabet& a, std::size_t h, std::size_t cap) {
  std::vector<Word> out;
  if (h == 0) return out;
  std::size_t k = a.size() - 1;
  if (k == 0) {
    if (h == 1) out.push_back(Word{kBottom});
    return out;
  }
  std::vector<std::size_t> digits(h - 1, 0);
  while (out.size() < cap) {
    Word w{kBottom};
    for (auto d : digits) w.push_back(static_cast<Symbol>(d + 1));
    out.push_back(std::move(w));
    std::size_t i = digits.size();
    while (i > 0) {
      --i;
      if (++digits[i] < k) break;
      digits[i] = 0;
      if (i == 0) return out;
    }
    if (digits.empty()) break;
  }
  return out;
}

}  // namespace

LengthBoundTable loop_length_table(const PushdownSystem& sys, unsigned z, std::size_t max_height,
                                   std::size_t budget, std::size_t max_words_per_height) {
  require_level2(sys);
  LengthBoundTable t;
  t.z = z;
  for (std::size_t h = 1; h <= max_height; ++h) {
    std::size_t lp = 0, hl = 0, rt = 0;
    for (const Word& w : words_of_height(sys.alphabet(), h, max_words_per_height)) {
      auto a = shortest_run_lengths(sys, w, RunKind::Loop, z, budget);
      auto b = shortest_run_lengths(sys, w, RunKind::HighLoop, z, budget);
      auto c = shortest_run_lengths(sys, w, RunKind::Return, z, budget);
      lp = std::max(lp, a.max_length());
      hl = std::max(hl, b.max_length());
      rt = std::max(rt, c.max_length());
      t.complete = t.complete && a.complete && b.complete && c.complete;
      if (h < 2) continue;
      Stack ctx = generic_context(w);
      for (RunKind k : {RunKind::Loop, RunKind::Return}) {
        RunFilter f = kind_filter(w, k);
        for (StateId q = 0; q < sys.num_states(); ++q) {
          RunStream stream(sys, Configuration{q, ctx}, budget, f);
          std::vector<std::size_t> per_target(sys.num_states(), 0);
          while (auto r = stream.next()) {
            auto& seen = per_target[r->back().state];
            if (seen >= z) continue;
            ++seen;
            auto parts = gap_decompose(*r, std::nullopt, k == RunKind::Loop ? GapMode::Loop : GapMode::Return);
            std::size_t m = 0, n = 0;
            for (const auto& p : parts) {
              if (p.kind == PartKind::Prefixed) m += p.end - p.begin + 1;
              else if (p.kind == PartKind::Return || p.kind == PartKind::LoopThenPush) ++n;
            }
            t.m_max = std::max(t.m_max, m);
            t.n_max = std::max(t.n_max, n);
            if (std::all_of(per_target.begin(), per_target.end(), [&](std::size_t x) { return x >= z; })) break;
            if (stream.generated() > 20000) break;
          }
        }
      }
    }
    t.loop.push_back(lp);
    t.high_loop.push_back(hl);
    t.ret.push_back(rt);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Shrinking

BigInt shrink_bound(const Stack& s, const LengthBoundTable& table, ShrinkMode mode) {
  BigInt h = s.height();
  BigInt lam = table.lambda(h);
  if (mode == ShrinkMode::FromInitial) return 2 * BigInt(s.width()) * h * (1 + lam);
  return 2 * h * (1 + lam);
}

Run shrink_run(const PushdownSystem& sys, const Run& r, const std::vector<Run>& avoid, unsigned z,
               const LengthBoundTable& table, ShrinkMode mode, std::size_t budget) {
  if (avoid.size() >= z) throw Error(ErrorCode::PreconditionViolated, "avoid set must be smaller than z");
  const Stack& end = r.back().stack;
  CarayolDecomposition d;
  std::optional<Stack> base;
  if (mode == ShrinkMode::FromInitial) {
    d = carayol_decompose(r);
  } else {
    base = pop2_times(end, 1);
    if (!base || !(r.front().stack == *base))
      throw Error(ErrorCode::PreconditionViolated, "extension must run from s to s:w");
    for (std::size_t i = 0; i <= r.length(); ++i) {
      const Stack& x = r.at(i).stack;
      if (!(x == *base) && is_substack(x, *base))
        throw Error(ErrorCode::PreconditionViolated, "extension visits a proper substack of its base");
    }
    d = milestone_decompose(r, extension_milestones(*base, end.top_word()));
  }
  std::size_t lam = table.lambda_small(end.height());

  const std::size_t m = d.loops.size();
  // Candidate loops per milestone; index 0 is the original loop.
  std::vector<std::vector<Run>> options(m);
  std::vector<std::size_t> choice(m, 0);
  std::vector<std::size_t> replaceable;
  auto candidates_for = [&](std::size_t i) {
    auto [a, t] = d.loops[i];
    Configuration from = r.at(a);
    Configuration to = r.at(t);
    std::size_t w = d.milestones[i].width();
    RunFilter f;
    if (mode == ShrinkMode::Extension && i == 0) {
      Stack b = *base;
      f.keep = [w, b](const Configuration& c) {
        return c.stack.width() >= w && (c.stack == b || !is_substack(c.stack, b));
      };
    } else {
      f.keep = [w](const Configuration& c) { return c.stack.width() >= w; };
    }
    auto res = shortest_runs(sys, from, [&](const Configuration& c) { return c == to; }, avoid.size() + 1,
                             std::max(budget, lam), f);
    return res.runs;
  };
  for (std::size_t i = 0; i < m; ++i) {
    auto [a, t] = d.loops[i];
    options[i].push_back(r.slice(a, t));
    if (t - a > lam) {
      auto c = candidates_for(i);
      if (c.empty()) throw Error(ErrorCode::BudgetExhausted, "no short loop found for a milestone");
      options[i] = std::move(c);
      replaceable.push_back(i);
    }
  }

  auto assemble = [&] {
    Run out = options[0][choice[0]];
    for (std::size_t i = 1; i < m; ++i) {
      std::size_t step = d.loops[i - 1].second;
      out.push(sys, r.steps()[step]);
      out = compose(out, options[i][choice[i]]);
    }
    return out;
  };
  auto avoided = [&](const Run& x) { return std::find(avoid.begin(), avoid.end(), x) != avoid.end(); };

  Run out = assemble();
  if (!avoided(out)) return out;
  // Vary one loop; distinct loops there give distinct runs.
  std::size_t pick;
  if (!replaceable.empty()) {
    pick = replaceable.back();
  } else {
    pick = m - 1;
    for (std::size_t i = m; i-- > 0;) {
      auto c = candidates_for(i);
      if (c.size() > avoid.size()) {
        pick = i;
        options[i] = std::move(c);
        break;
      }
    }
  }
  for (std::size_t k = 0; k < options[pick].size(); ++k) {
    choice[pick] = k;
    out = assemble();
    if (!avoided(out)) return out;
  }
  throw Error(ErrorCode::BudgetExhausted, "not enough distinct short loops to avoid the given runs");
}

}  // namespace hont
