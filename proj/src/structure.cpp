#include "hont/structure.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "hont/error.hpp"

namespace hont {

namespace {

bool check_tuples(const std::vector<Element>& a, const std::vector<Element>& b, const Relation& ra, const Relation& rb) {
  const std::size_t m = a.size();
  const unsigned r = ra.arity;
  std::vector<std::size_t> idx(r, 0);
  std::vector<Element> ta(r), tb(r);
  if (m == 0) return true;
  while (true) {
    for (unsigned i = 0; i < r; ++i) {
      ta[i] = a[idx[i]];
      tb[i] = b[idx[i]];
    }
    if (ra.contains(ta) != rb.contains(tb)) return false;
    unsigned p = 0;
    while (p < r && ++idx[p] == m) idx[p++] = 0;
    if (p == r) break;
  }
  return true;
}

bool partial_iso_vec(const Structure& A, const std::vector<Element>& a, const Structure& B,
                     const std::vector<Element>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (A.label(a[i]) != B.label(b[i])) return false;
    for (std::size_t j = 0; j < i; ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  }
  if (A.relations.size() != B.relations.size()) return false;
  for (std::size_t k = 0; k < A.relations.size(); ++k) {
    if (A.relations[k].arity != B.relations[k].arity) return false;
    if (!check_tuples(a, b, A.relations[k], B.relations[k])) return false;
  }
  return true;
}

class Game {
 public:
  Game(const Structure& A, const Structure& B) : A_(A), B_(B) {}

  bool wins(std::vector<std::pair<Element, Element>> pos, unsigned k) {
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    if (k == 0) return true;
    auto key = std::make_pair(pos, k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool result = spoiler_fails(pos, k, true) && spoiler_fails(pos, k, false);
    memo_.emplace(std::move(key), result);
    return result;
  }

  bool legal(const std::vector<std::pair<Element, Element>>& pos) const {
    std::vector<Element> a, b;
    for (auto [x, y] : pos) {
      a.push_back(x);
      b.push_back(y);
    }
    return partial_iso_vec(A_, a, B_, b);
  }

 private:
  const Structure& A_;
  const Structure& B_;
  std::map<std::pair<std::vector<std::pair<Element, Element>>, unsigned>, bool> memo_;

  bool spoiler_fails(const std::vector<std::pair<Element, Element>>& pos, unsigned k, bool in_a) {
    const Structure& S = in_a ? A_ : B_;
    const Structure& D = in_a ? B_ : A_;
    for (Element x = 0; x < S.size; ++x) {
      bool chosen = std::any_of(pos.begin(), pos.end(), [&](const auto& p) { return (in_a ? p.first : p.second) == x; });
      if (chosen) continue;
      bool answered = false;
      for (Element y = 0; y < D.size && !answered; ++y) {
        auto next = pos;
        next.push_back(in_a ? std::make_pair(x, y) : std::make_pair(y, x));
        if (!legal(next)) continue;
        if (wins(next, k - 1)) answered = true;
      }
      if (!answered) return false;
    }
    return true;
  }
};

}  // namespace

bool partial_iso(const Structure& A, std::span<const Element> a, const Structure& B, std::span<const Element> b) {
  return partial_iso_vec(A, std::vector<Element>(a.begin(), a.end()), B, std::vector<Element>(b.begin(), b.end()));
}

bool fo_equiv(const Structure& A, std::span<const Element> a, const Structure& B, std::span<const Element> b,
              unsigned k) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "parameter tuples differ in length");
  for (auto x : a)
    if (x >= A.size) throw Error(ErrorCode::InvalidArgument, "parameter outside the structure");
  for (auto y : b)
    if (y >= B.size) throw Error(ErrorCode::InvalidArgument, "parameter outside the structure");
  if (!partial_iso(A, a, B, b)) return false;
  // Beyond max(|A|,|B|) rounds the game already decides isomorphism.
  std::size_t cap = std::max<std::size_t>({A.size, B.size, 1});
  unsigned rounds = static_cast<unsigned>(std::min<std::size_t>(k, cap));
  std::vector<std::pair<Element, Element>> pos;
  for (std::size_t i = 0; i < a.size(); ++i) pos.emplace_back(a[i], b[i]);
  Game g(A, B);
  return g.wins(pos, rounds);
}

Structure chain_structure(const std::vector<std::uint64_t>& labels) {
  Structure s;
  s.size = labels.size();
  s.labels = labels;
  Relation succ;
  succ.arity = 2;
  for (Element i = 0; i + 1 < labels.size(); ++i) succ.tuples.insert({i, i + 1});
  s.relations.push_back(std::move(succ));
  return s;
}

}  // namespace hont
