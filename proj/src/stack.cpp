#include "hont/stack.hpp"

#include <algorithm>
#include <sstream>

#include "hont/error.hpp"

namespace hont {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Undefined: return "Undefined";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotAPrefix: return "NotAPrefix";
    case ErrorCode::Inapplicable: return "Inapplicable";
    case ErrorCode::EndpointMismatch: return "EndpointMismatch";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::LevelUnsupported: return "LevelUnsupported";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::SignatureMismatch: return "SignatureMismatch";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::Syntax: return "SyntaxError";
  }
  return "Unknown";
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw Error(ErrorCode::InvalidArgument, "alphabet needs a bottom symbol");
  if (names_.size() > 65535) throw Error(ErrorCode::InvalidArgument, "alphabet too large");
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const auto& n = names_[i];
    if (n.empty() || n.find_first_of(".: \t,") != std::string::npos)
      throw Error(ErrorCode::InvalidArgument, "bad symbol name '" + n + "'");
    if (!index_.emplace(n, static_cast<Symbol>(i)).second)
      throw Error(ErrorCode::InvalidArgument, "duplicate symbol '" + n + "'");
    if (n.size() != 1) single_char_ = false;
  }
}

std::optional<Symbol> Alphabet::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Symbol Alphabet::lookup(std::string_view name) const {
  auto s = find(name);
  if (!s) throw Error(ErrorCode::InvalidArgument, "unknown symbol '" + std::string(name) + "'");
  return *s;
}

std::strong_ordering word_compare(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

bool is_word_prefix(const Word& prefix, const Word& w) {
  return prefix.size() <= w.size() && std::equal(prefix.begin(), prefix.end(), w.begin());
}

Word common_prefix(const Word& a, const Word& b) {
  std::size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return Word(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n));
}

std::size_t hash_word(const Word& w) {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (Symbol s : w) {
    h ^= s + 1;
    h *= 0x100000001b3ULL;
  }
  return h ^ w.size();
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

void Stack::rehash() {
  if (level_ == 1) {
    hash_ = hash_word(*word_);
    return;
  }
  std::size_t h = static_cast<std::size_t>(level_) * 7919;
  for (const auto& e : entries_) h = mix(h, e.hash_);
  hash_ = h;
}

Stack Stack::initial(int level) {
  if (level < 1) throw Error(ErrorCode::InvalidArgument, "stack level must be positive");
  if (level == 1) return from_word(Word{kBottom});
  return from_entries({initial(level - 1)});
}

Stack Stack::from_word(Word w) {
  if (w.empty()) throw Error(ErrorCode::InvalidArgument, "empty word");
  Stack s;
  s.level_ = 1;
  s.word_ = std::make_shared<const Word>(std::move(w));
  s.rehash();
  return s;
}

Stack Stack::from_entries(std::vector<Stack> entries) {
  if (entries.empty()) throw Error(ErrorCode::InvalidArgument, "empty stack");
  int lvl = entries.front().level_;
  for (const auto& e : entries)
    if (e.level_ != lvl) throw Error(ErrorCode::InvalidArgument, "mixed entry levels");
  Stack s;
  s.level_ = lvl + 1;
  s.entries_ = std::move(entries);
  s.rehash();
  return s;
}

std::size_t Stack::width() const { return level_ == 1 ? word_->size() : entries_.size(); }

std::size_t Stack::height() const {
  if (level_ == 1) return 1;
  std::size_t h = 0;
  for (const auto& e : entries_) h = std::max(h, e.width());
  return h;
}

const Word& Stack::word() const {
  if (level_ != 1) throw Error(ErrorCode::InvalidArgument, "word() on a higher-level stack");
  return *word_;
}

const std::vector<Stack>& Stack::entries() const {
  if (level_ == 1) throw Error(ErrorCode::InvalidArgument, "entries() on a level-1 stack");
  return entries_;
}

const Word& Stack::top_word() const {
  const Stack* s = this;
  while (s->level_ > 1) s = &s->entries_.back();
  return *s->word_;
}

Stack Stack::top(int k) const {
  if (k < 2 || k > level_) throw Error(ErrorCode::InvalidArgument, "TOP level out of range");
  const Stack* s = this;
  while (s->level_ > k) s = &s->entries_.back();
  return s->entries_.back();
}

std::size_t Stack::hash() const { return hash_; }

bool operator==(const Stack& a, const Stack& b) {
  if (a.level_ != b.level_ || a.hash_ != b.hash_) return false;
  if (a.level_ == 1) return a.word_ == b.word_ || *a.word_ == *b.word_;
  return a.entries_ == b.entries_;
}

std::strong_ordering operator<=>(const Stack& a, const Stack& b) {
  if (a.level_ != b.level_) return a.level_ <=> b.level_;
  if (a.level_ == 1) return word_compare(*a.word_, *b.word_);
  if (a.entries_.size() != b.entries_.size()) return a.entries_.size() <=> b.entries_.size();
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    auto c = a.entries_[i] <=> b.entries_[i];
    if (c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::optional<Stack> try_apply(const Stack& s, const StackOp& op) {
  if (op.level < 1 || op.level > s.level_)
    throw Error(ErrorCode::InvalidArgument, "operation level exceeds stack level");
  if (op.kind == StackOp::Kind::Push && op.symbol == kBottom)
    throw Error(ErrorCode::InvalidArgument, "cannot push the bottom symbol");
  if (op.kind == StackOp::Kind::Clone && op.level < 2)
    throw Error(ErrorCode::InvalidArgument, "clone needs level >= 2");

  if (s.level_ == 1) {
    Word w = *s.word_;
    if (op.kind == StackOp::Kind::Push) {
      w.push_back(op.symbol);
    } else {  // Pop_1
      if (w.size() <= 1) return std::nullopt;
      w.pop_back();
    }
    return Stack::from_word(std::move(w));
  }

  if (op.level == s.level_ && op.kind != StackOp::Kind::Push) {
    std::vector<Stack> e = s.entries_;
    if (op.kind == StackOp::Kind::Clone) {
      e.push_back(e.back());
    } else {
      if (e.size() <= 1) return std::nullopt;
      e.pop_back();
    }
    Stack r;
    r.level_ = s.level_;
    r.entries_ = std::move(e);
    r.rehash();
    return r;
  }

  auto inner = try_apply(s.entries_.back(), op);
  if (!inner) return std::nullopt;
  Stack r;
  r.level_ = s.level_;
  r.entries_ = s.entries_;
  r.entries_.back() = std::move(*inner);
  r.rehash();
  return r;
}

Stack apply_op(const Stack& s, const StackOp& op) {
  auto r = try_apply(s, op);
  if (!r) throw Error(ErrorCode::Undefined, "operation undefined on this stack");
  return *r;
}

bool is_substack(const Stack& s, const Stack& t) {
  if (s.level() != t.level()) return false;
  if (s.level() == 1) return is_word_prefix(s.word(), t.word());
  const auto& a = s.entries();
  const auto& b = t.entries();
  if (a.size() > b.size()) return false;
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return is_substack(a.back(), b[a.size() - 1]);
}

namespace {

void require_level2(const Stack& s) {
  if (s.level() != 2) throw Error(ErrorCode::InvalidArgument, "level-2 stack expected");
}

}  // namespace

bool is_prefix(const Stack& s, const Stack& t) {
  require_level2(s);
  require_level2(t);
  const auto& a = s.entries();
  const auto& b = t.entries();
  if (a.size() > b.size()) return false;
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  const Word& last = a.back().word();
  for (std::size_t j = a.size() - 1; j < b.size(); ++j)
    if (!is_word_prefix(last, b[j].word())) return false;
  return true;
}

Stack replace_prefix(const Stack& t, const Stack& s, const Stack& u) {
  if (!is_prefix(s, t)) throw Error(ErrorCode::NotAPrefix, "replace_prefix: s is not a prefix of t");
  require_level2(u);
  const auto& te = t.entries();
  const auto& ue = u.entries();
  std::size_t n = s.width();
  std::size_t cut = s.entries().back().width();
  std::vector<Stack> out(ue.begin(), ue.end() - 1);
  const Word& xp = ue.back().word();
  for (std::size_t j = n - 1; j < te.size(); ++j) {
    const Word& v = te[j].word();
    Word w = xp;
    w.insert(w.end(), v.begin() + static_cast<std::ptrdiff_t>(cut), v.end());
    out.push_back(Stack::from_word(std::move(w)));
  }
  return Stack::from_entries(std::move(out));
}

std::optional<Stack> pop2_times(const Stack& s, std::size_t i) {
  require_level2(s);
  if (i >= s.width()) return std::nullopt;
  if (i == 0) return s;
  std::vector<Stack> e(s.entries().begin(), s.entries().end() - static_cast<std::ptrdiff_t>(i));
  return Stack::from_entries(std::move(e));
}

Stack make_stack2(std::vector<Word> words) {
  std::vector<Stack> e;
  e.reserve(words.size());
  for (auto& w : words) e.push_back(Stack::from_word(std::move(w)));
  return Stack::from_entries(std::move(e));
}

std::string format_word(const Alphabet& a, const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += a.name(w[i]);
  }
  return out;
}

std::string format_stack(const Alphabet& a, const Stack& s) {
  if (s.level() == 1) return format_word(a, s.word());
  std::string out;
  const char* sep = s.level() == 2 ? ":" : ",";
  for (std::size_t i = 0; i < s.entries().size(); ++i) {
    if (i) out += sep;
    if (s.level() > 2) out += '[';
    out += format_stack(a, s.entries()[i]);
    if (s.level() > 2) out += ']';
  }
  return out;
}

std::string format_op(const Alphabet& a, const StackOp& op) {
  switch (op.kind) {
    case StackOp::Kind::Push: return "push " + a.name(op.symbol);
    case StackOp::Kind::Pop: return "pop" + std::to_string(op.level);
    case StackOp::Kind::Clone: return "clone" + std::to_string(op.level);
  }
  return "?";
}

Word parse_word(const Alphabet& a, std::string_view text) {
  Word w;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t dot = text.find('.', start);
    std::string_view piece = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (piece.empty()) throw Error(ErrorCode::InvalidArgument, "empty symbol in word '" + std::string(text) + "'");
    if (auto s = a.find(piece)) {
      w.push_back(*s);
    } else if (a.single_char_names()) {
      for (char c : piece) w.push_back(a.lookup(std::string_view(&c, 1)));
    } else {
      a.lookup(piece);  // throws
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  if (w.empty() || w.front() != kBottom)
    throw Error(ErrorCode::InvalidArgument, "word must start with the bottom symbol: '" + std::string(text) + "'");
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == kBottom) throw Error(ErrorCode::InvalidArgument, "bottom symbol inside word");
  return w;
}

Stack parse_stack(const Alphabet& a, int level, std::string_view text) {
  if (level == 1) {
    if (text.find(':') != std::string_view::npos)
      throw Error(ErrorCode::InvalidArgument, "':' in a level-1 stack");
    return Stack::from_word(parse_word(a, text));
  }
  if (level != 2) throw Error(ErrorCode::LevelUnsupported, "stack text supports levels 1 and 2");
  std::vector<Word> words;
  std::size_t start = 0;
  while (true) {
    std::size_t colon = text.find(':', start);
    words.push_back(parse_word(a, text.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start)));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  return make_stack2(std::move(words));
}

}  // namespace hont
