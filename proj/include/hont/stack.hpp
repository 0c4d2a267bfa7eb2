#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hont {

using Symbol = std::uint16_t;

// Symbol 0 is always the bottom-of-stack marker.
inline constexpr Symbol kBottom = 0;

// Index 0 is the bottom of the word.
using Word = std::vector<Symbol>;

class Alphabet {
 public:
  Alphabet() = default;
  // names[0] is the bottom symbol.
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Symbol s) const { return names_.at(s); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Symbol> find(std::string_view name) const;
  Symbol lookup(std::string_view name) const;  // throws InvalidArgument
  bool single_char_names() const { return single_char_; }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Symbol> index_;
  bool single_char_ = true;
};

// Length first, then lexicographic.
std::strong_ordering word_compare(const Word& a, const Word& b);
bool is_word_prefix(const Word& prefix, const Word& w);
Word common_prefix(const Word& a, const Word& b);
std::size_t hash_word(const Word& w);

class Stack;

struct StackOp {
  enum class Kind : std::uint8_t { Push, Pop, Clone };
  Kind kind = Kind::Push;
  int level = 1;  // Push is always level 1
  Symbol symbol = kBottom;

  static StackOp push(Symbol s) { return {Kind::Push, 1, s}; }
  static StackOp pop(int k) { return {Kind::Pop, k, kBottom}; }
  static StackOp clone(int k) { return {Kind::Clone, k, kBottom}; }

  friend bool operator==(const StackOp&, const StackOp&) = default;
};

// Immutable level-n stack. Words are shared between copies, so Clone is cheap.
class Stack {
 public:
  // ⊥ at level 1, [⊥] at level 2, and so on.
  static Stack initial(int level);
  static Stack from_word(Word w);
  static Stack from_entries(std::vector<Stack> entries);

  int level() const { return level_; }
  // Number of top-level entries. For a level-1 stack this is the word length.
  std::size_t width() const;
  // Maximal width of the top-level entries; 1 for level 1.
  std::size_t height() const;

  const Word& word() const;                      // level 1 only
  const std::vector<Stack>& entries() const;     // level >= 2 only
  const Word& top_word() const;
  Symbol top_symbol() const { return top_word().back(); }
  // TOP_k for k >= 2: the topmost level-(k-1) stack.
  Stack top(int k) const;

  std::size_t hash() const;
  friend bool operator==(const Stack& a, const Stack& b);
  // Canonical order: width first, then entrywise in the same order.
  friend std::strong_ordering operator<=>(const Stack& a, const Stack& b);

 private:
  int level_ = 1;
  std::shared_ptr<const Word> word_;
  std::vector<Stack> entries_;
  std::size_t hash_ = 0;

  void rehash();
  friend std::optional<Stack> try_apply(const Stack&, const StackOp&);
};

struct StackHash {
  std::size_t operator()(const Stack& s) const { return s.hash(); }
};

// Returns nullopt when the operation is undefined on s (Pop_k on a width-1
// top level-k stack, Pop_1 removing the bottom). Throws InvalidArgument for
// Push(⊥) or an operation level above the stack level.
std::optional<Stack> try_apply(const Stack& s, const StackOp& op);
Stack apply_op(const Stack& s, const StackOp& op);  // throws Undefined

// s ≤ t: s is reachable from t by pops only.
bool is_substack(const Stack& s, const Stack& t);
// s ⊑ t for level-2 stacks.
bool is_prefix(const Stack& s, const Stack& t);
// t[s/u] for level-2 stacks; throws NotAPrefix unless s ⊑ t.
Stack replace_prefix(const Stack& t, const Stack& s, const Stack& u);

// Pop_2 applied i times; nullopt when the width is not large enough.
std::optional<Stack> pop2_times(const Stack& s, std::size_t i);
// The level-2 stack with the given words.
Stack make_stack2(std::vector<Word> words);

std::string format_word(const Alphabet& a, const Word& w);
std::string format_stack(const Alphabet& a, const Stack& s);
std::string format_op(const Alphabet& a, const StackOp& op);
Word parse_word(const Alphabet& a, std::string_view text);
Stack parse_stack(const Alphabet& a, int level, std::string_view text);

}  // namespace hont

template <>
struct std::hash<hont::Stack> {
  std::size_t operator()(const hont::Stack& s) const { return s.hash(); }
};
