#include "hont/system.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "hont/error.hpp"

namespace hont {

PushdownSystem::PushdownSystem(int level, Alphabet alphabet, std::vector<std::string> states,
                               StateId initial, std::vector<Transition> delta)
    : level_(level),
      alphabet_(std::move(alphabet)),
      states_(std::move(states)),
      initial_(initial),
      delta_(std::move(delta)) {
  if (level_ < 1 || level_ > 2) throw Error(ErrorCode::LevelUnsupported, "only levels 1 and 2 are supported");
  if (states_.empty() || states_.size() > 65535) throw Error(ErrorCode::InvalidArgument, "bad state count");
  if (initial_ >= states_.size()) throw Error(ErrorCode::InvalidArgument, "initial state out of range");
  if (delta_.size() > 0xFFFFFFFEu) throw Error(ErrorCode::InvalidArgument, "too many transitions");
  by_state_symbol_.assign(states_.size() * alphabet_.size(), {});
  for (TransitionId i = 0; i < delta_.size(); ++i) {
    const auto& t = delta_[i];
    if (t.from >= states_.size() || t.to >= states_.size() || t.symbol >= alphabet_.size())
      throw Error(ErrorCode::InvalidArgument, "transition out of range");
    if (t.op.level > level_) throw Error(ErrorCode::InvalidArgument, "operation level exceeds system level");
    if (t.op.kind == StackOp::Kind::Push && (t.op.symbol == kBottom || t.op.symbol >= alphabet_.size()))
      throw Error(ErrorCode::InvalidArgument, "bad push symbol");
    if (t.op.kind == StackOp::Kind::Clone && t.op.level < 2)
      throw Error(ErrorCode::InvalidArgument, "clone needs level >= 2");
    by_state_symbol_[t.from * alphabet_.size() + t.symbol].push_back(i);
  }
}

StateId PushdownSystem::state_id(std::string_view name) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i] == name) return static_cast<StateId>(i);
  throw Error(ErrorCode::InvalidArgument, "unknown state '" + std::string(name) + "'");
}

Configuration PushdownSystem::initial_configuration() const {
  return {initial_, Stack::initial(level_)};
}

const std::vector<TransitionId>& PushdownSystem::candidates(StateId q, Symbol top) const {
  return by_state_symbol_.at(q * alphabet_.size() + top);
}

std::optional<Configuration> PushdownSystem::step(const Configuration& c, TransitionId t) const {
  if (t >= delta_.size()) return std::nullopt;
  const auto& tr = delta_[t];
  if (tr.from != c.state || tr.symbol != c.stack.top_symbol()) return std::nullopt;
  auto s = try_apply(c.stack, tr.op);
  if (!s) return std::nullopt;
  return Configuration{tr.to, std::move(*s)};
}

std::string PushdownSystem::format_configuration(const Configuration& c) const {
  return "(" + states_.at(c.state) + ", " + format_stack(alphabet_, c.stack) + ")";
}

Run::Run(Configuration start) { configs_.push_back(std::move(start)); }

Run Run::replay(const PushdownSystem& sys, Configuration start, std::span<const TransitionId> steps) {
  Run r(std::move(start));
  r.steps_.reserve(steps.size());
  r.configs_.reserve(steps.size() + 1);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    auto next = sys.step(r.configs_.back(), steps[i]);
    if (!next)
      throw Error(ErrorCode::Inapplicable, "transition " + std::to_string(steps[i]) +
                                               " inapplicable at step " + std::to_string(i));
    r.steps_.push_back(steps[i]);
    r.configs_.push_back(std::move(*next));
  }
  return r;
}

std::optional<Run> Run::extended(const PushdownSystem& sys, TransitionId t) const {
  auto next = sys.step(configs_.back(), t);
  if (!next) return std::nullopt;
  Run r = *this;
  r.steps_.push_back(t);
  r.configs_.push_back(std::move(*next));
  return r;
}

void Run::push(const PushdownSystem& sys, TransitionId t) {
  auto next = sys.step(configs_.back(), t);
  if (!next)
    throw Error(ErrorCode::Inapplicable, "transition " + std::to_string(t) + " inapplicable at step " +
                                             std::to_string(steps_.size()));
  steps_.push_back(t);
  configs_.push_back(std::move(*next));
}

void Run::pop_step() {
  if (steps_.empty()) throw Error(ErrorCode::InvalidArgument, "pop_step on an empty run");
  steps_.pop_back();
  configs_.pop_back();
}

Run Run::prefix(std::size_t len) const { return slice(0, len); }

Run Run::slice(std::size_t begin, std::size_t end) const {
  if (begin > end || end > steps_.size()) throw Error(ErrorCode::InvalidArgument, "slice out of range");
  Run r(configs_[begin]);
  r.steps_.assign(steps_.begin() + static_cast<std::ptrdiff_t>(begin), steps_.begin() + static_cast<std::ptrdiff_t>(end));
  r.configs_.assign(configs_.begin() + static_cast<std::ptrdiff_t>(begin),
                    configs_.begin() + static_cast<std::ptrdiff_t>(end) + 1);
  return r;
}

bool Run::is_prefix_of(const Run& other) const {
  return steps_.size() <= other.steps_.size() && configs_.front() == other.configs_.front() &&
         std::equal(steps_.begin(), steps_.end(), other.steps_.begin());
}

bool length_lex_less(const std::vector<TransitionId>& a, const std::vector<TransitionId>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

bool length_lex_less(const Run& a, const Run& b) { return length_lex_less(a.steps(), b.steps()); }

Run compose(const Run& a, const Run& b) {
  if (!(a.back() == b.front())) throw Error(ErrorCode::EndpointMismatch, "compose: endpoints differ");
  Run r = a;
  for (std::size_t i = 0; i < b.length(); ++i) {
    // b is already valid from this configuration, so replaying cannot fail.
    r.steps_.push_back(b.steps()[i]);
    r.configs_.push_back(b.at(i + 1));
  }
  return r;
}

RunStream::RunStream(const PushdownSystem& sys, Configuration from, std::size_t max_len, RunFilter filter)
    : sys_(sys), max_len_(max_len), filter_(std::move(filter)) {
  layer_.emplace_back(std::move(from));
  generated_ = 1;
}

bool RunStream::advance_layer() {
  if (depth_ >= max_len_) {
    for (const auto& r : layer_) {
      if (filter_.extend && !filter_.extend(r)) continue;
      for (TransitionId t : sys_.candidates(r.back().state, r.back().stack.top_symbol())) {
        auto next = sys_.step(r.back(), t);
        if (next && (!filter_.keep || filter_.keep(*next))) {
          truncated_ = true;
          break;
        }
      }
      if (truncated_) break;
    }
    layer_.clear();
    return false;
  }
  next_layer_.clear();
  for (const auto& r : layer_) {
    if (filter_.extend && !filter_.extend(r)) continue;
    for (TransitionId t : sys_.candidates(r.back().state, r.back().stack.top_symbol())) {
      auto next = sys_.step(r.back(), t);
      if (!next) continue;
      if (filter_.keep && !filter_.keep(*next)) continue;
      Run e = r;
      e.push(sys_, t);
      next_layer_.push_back(std::move(e));
      ++generated_;
    }
  }
  layer_.swap(next_layer_);
  next_layer_.clear();
  ++depth_;
  pos_ = 0;
  return !layer_.empty();
}

std::optional<Run> RunStream::next() {
  while (true) {
    while (pos_ < layer_.size()) {
      const Run& r = layer_[pos_++];
      if (!filter_.accept || filter_.accept(r)) return r;
    }
    if (layer_.empty() || !advance_layer()) return std::nullopt;
  }
}

std::vector<Run> enumerate_runs(const PushdownSystem& sys, const Configuration& from, std::size_t max_len,
                                const RunFilter& filter) {
  RunStream stream(sys, from, max_len, filter);
  std::vector<Run> out;
  while (auto r = stream.next()) out.push_back(std::move(*r));
  return out;
}

ShortestRuns shortest_runs(const PushdownSystem& sys, const Configuration& from,
                           const std::function<bool(const Configuration&)>& target, std::size_t k,
                           std::size_t budget, RunFilter filter) {
  auto prev = filter.accept;
  filter.accept = [&, prev](const Run& r) { return target(r.back()) && (!prev || prev(r)); };
  RunStream stream(sys, from, budget, filter);
  ShortestRuns out;
  while (out.runs.size() < k) {
    auto r = stream.next();
    if (!r) break;
    out.runs.push_back(std::move(*r));
  }
  if (out.runs.size() < k && stream.truncated()) out.budget_exhausted = true;
  return out;
}

// ---------------------------------------------------------------------------
// .nps text format

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ParseError(ErrorCode::Parse, line, "line " + std::to_string(line) + ": " + msg);
}

std::optional<int> op_level(std::string_view word, std::string_view prefix) {
  if (word.substr(0, prefix.size()) != prefix) return std::nullopt;
  auto digits = word.substr(prefix.size());
  int v = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc() || p != digits.data() + digits.size() || digits.empty()) return std::nullopt;
  return v;
}

}  // namespace

PushdownSystem parse_system(std::string_view text) {
  std::map<std::string, std::pair<std::string, std::size_t>> keys;
  struct RawTransition {
    std::vector<std::string> tokens;
    std::size_t line;
  };
  std::vector<RawTransition> raw;
  bool in_delta = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto colon = line.find(':');
    bool is_key = colon != std::string_view::npos && line.find("->") == std::string_view::npos;
    if (is_key) {
      std::string key(trim(line.substr(0, colon)));
      std::string value(trim(line.substr(colon + 1)));
      if (key == "delta") {
        if (in_delta || keys.count("delta")) fail(line_no, "duplicate delta block");
        if (!value.empty()) fail(line_no, "delta: must be followed by transitions on separate lines");
        keys["delta"] = {"", line_no};
        in_delta = true;
        continue;
      }
      if (key != "level" && key != "bottom" && key != "alphabet" && key != "states" && key != "initial")
        fail(line_no, "unknown key '" + key + "'");
      if (keys.count(key)) fail(line_no, "duplicate key '" + key + "'");
      keys[key] = {value, line_no};
      in_delta = false;
      continue;
    }
    if (!in_delta) fail(line_no, "transition outside the delta block");
    raw.push_back({split_ws(line), line_no});
  }

  for (const char* k : {"level", "bottom", "alphabet", "states", "initial", "delta"})
    if (!keys.count(k)) fail(line_no, std::string("missing key '") + k + "'");

  const auto& [level_text, level_line] = keys["level"];
  int level = 0;
  {
    auto [p, ec] = std::from_chars(level_text.data(), level_text.data() + level_text.size(), level);
    if (ec != std::errc() || p != level_text.data() + level_text.size()) fail(level_line, "bad level");
  }
  if (level < 1 || level > 2)
    throw ParseError(ErrorCode::LevelUnsupported, level_line,
                     "line " + std::to_string(level_line) + ": only levels 1 and 2 are supported");

  auto bottom_tokens = split_ws(keys["bottom"].first);
  if (bottom_tokens.size() != 1) fail(keys["bottom"].second, "bottom needs exactly one symbol");
  std::vector<std::string> names{bottom_tokens[0]};
  for (auto& s : split_ws(keys["alphabet"].first)) {
    if (s == names[0]) continue;
    if (std::find(names.begin(), names.end(), s) != names.end())
      fail(keys["alphabet"].second, "duplicate symbol '" + s + "'");
    names.push_back(s);
  }
  Alphabet alphabet;
  try {
    alphabet = Alphabet(names);
  } catch (const Error& e) {
    fail(keys["alphabet"].second, e.what());
  }

  auto states = split_ws(keys["states"].first);
  if (states.empty()) fail(keys["states"].second, "no states");
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (states[i] == states[j]) fail(keys["states"].second, "duplicate state '" + states[i] + "'");
  auto state_of = [&](const std::string& n, std::size_t line) -> StateId {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i] == n) return static_cast<StateId>(i);
    fail(line, "unknown state '" + n + "'");
  };
  auto symbol_of = [&](const std::string& n, std::size_t line) -> Symbol {
    auto s = alphabet.find(n);
    if (!s) fail(line, "unknown symbol '" + n + "'");
    return *s;
  };
  auto init_tokens = split_ws(keys["initial"].first);
  if (init_tokens.size() != 1) fail(keys["initial"].second, "initial needs exactly one state");
  StateId initial = state_of(init_tokens[0], keys["initial"].second);

  std::vector<Transition> delta;
  for (const auto& r : raw) {
    const auto& t = r.tokens;
    if (t.size() < 5 || t[2] != "->") fail(r.line, "expected 'STATE SYMBOL -> STATE OP'");
    Transition tr;
    tr.from = state_of(t[0], r.line);
    tr.symbol = symbol_of(t[1], r.line);
    tr.to = state_of(t[3], r.line);
    if (t[4] == "push") {
      if (t.size() != 6) fail(r.line, "push needs exactly one symbol");
      tr.op = StackOp::push(symbol_of(t[5], r.line));
      if (tr.op.symbol == kBottom) fail(r.line, "cannot push the bottom symbol");
    } else if (auto k = op_level(t[4], "pop")) {
      if (t.size() != 5) fail(r.line, "trailing tokens after pop");
      if (*k < 1 || *k > level) fail(r.line, "pop level out of range");
      tr.op = StackOp::pop(*k);
    } else if (auto k2 = op_level(t[4], "clone")) {
      if (t.size() != 5) fail(r.line, "trailing tokens after clone");
      if (*k2 < 2 || *k2 > level) fail(r.line, "clone level out of range");
      tr.op = StackOp::clone(*k2);
    } else {
      fail(r.line, "unknown operation '" + t[4] + "'");
    }
    delta.push_back(tr);
  }
  return PushdownSystem(level, std::move(alphabet), std::move(states), initial, std::move(delta));
}

PushdownSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(ErrorCode::Parse, 0, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

std::string serialize_system(const PushdownSystem& sys) {
  const auto& a = sys.alphabet();
  std::ostringstream out;
  out << "level: " << sys.level() << "\n";
  out << "bottom: " << a.name(kBottom) << "\n";
  out << "alphabet:";
  for (const auto& n : a.names()) out << ' ' << n;
  out << "\nstates:";
  for (const auto& s : sys.states()) out << ' ' << s;
  out << "\ninitial: " << sys.states()[sys.initial_state()] << "\n";
  out << "delta:\n";
  for (const auto& t : sys.transitions())
    out << "  " << sys.states()[t.from] << ' ' << a.name(t.symbol) << " -> " << sys.states()[t.to] << ' '
        << format_op(a, t.op) << "\n";
  return out.str();
}

std::vector<TransitionId> parse_steps(std::string_view text) {
  std::vector<TransitionId> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    auto piece = trim(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    TransitionId v = 0;
    auto [p, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), v);
    if (ec != std::errc() || p != piece.data() + piece.size() || piece.empty())
      throw ParseError(ErrorCode::Parse, start, "bad transition index '" + std::string(piece) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_steps(std::span<const TransitionId> steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(steps[i]);
  }
  return out;
}

}  // namespace hont
