#include "hont/wordtypes.hpp"

#include <algorithm>

#include "hont/error.hpp"

namespace hont {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return "equivalent";
    case Verdict::Distinct: return "distinct";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

WordTyper::WordTyper(const PushdownSystem& sys, unsigned z, std::size_t budget, unsigned k)
    : sys_(sys), z_(z), budget_(budget), k_(k == 0 ? z : k) {
  if (sys.level() != 2) throw Error(ErrorCode::LevelUnsupported, "word types need a level-2 system");
  if (z == 0) throw Error(ErrorCode::InvalidArgument, "threshold must be positive");
}

const WordTyper::WordCounts& WordTyper::counts(const Word& w) {
  auto it = counts_.find(w);
  if (it != counts_.end()) return it->second;
  WordCounts c;
  auto r = count_runs(sys_, w, RunKind::Return, z_, budget_);
  auto l = count_runs(sys_, w, RunKind::Loop, z_, budget_);
  auto h = count_runs(sys_, w, RunKind::HighLoop, z_, budget_);
  auto p = count_to_prefixes(sys_, w, z_, budget_);
  c.ret = r.counts;
  c.loop = l.counts;
  c.high_loop = h.counts;
  c.exact = r.exact && l.exact && h.exact;
  for (auto& x : p) {
    c.runs_to.push_back(x.counts);
    c.exact = c.exact && x.exact;
  }
  return counts_.emplace(w, std::move(c)).first->second;
}

std::uint64_t WordTyper::intern(const std::vector<std::uint64_t>& label) {
  auto it = label_ids_.find(label);
  if (it != label_ids_.end()) return it->second;
  std::uint64_t id = label_ids_.size();
  label_ids_.emplace(label, id);
  return id;
}

const WordModel& WordTyper::model(const Word& w, unsigned n) {
  auto key = std::make_pair(w, n);
  if (auto it = models_.find(key); it != models_.end()) return *it->second;
  if (w.empty()) throw Error(ErrorCode::InvalidArgument, "empty word");

  auto m = std::make_unique<WordModel>();
  m->word = w;
  m->n = n;
  m->k = k_;
  m->z = z_;
  const WordCounts& own = counts(w);
  m->exact = own.exact;
  const std::size_t len = w.size();
  std::vector<std::uint64_t> labels(len);
  m->types.assign(n, std::vector<TypeId>(len, 0));
  for (std::size_t i = 0; i < len; ++i) {
    Word v(w.begin(), w.end() - static_cast<std::ptrdiff_t>(i));
    const WordCounts& cv = counts(v);
    m->exact = m->exact && cv.exact;
    m->top.push_back(v.back());
    m->runs_to.push_back(own.runs_to[i]);
    m->ret.push_back(cv.ret);
    m->loop.push_back(cv.loop);
    m->high_loop.push_back(cv.high_loop);
    for (unsigned j = 0; j < n; ++j) {
      m->types[j][i] = type_of(v, j);
      m->exact = m->exact && exact(v, j);
    }
    std::vector<std::uint64_t> lab;
    lab.push_back(v.back());
    for (const CountFunction* f : {&own.runs_to[i], &cv.ret, &cv.loop, &cv.high_loop})
      lab.insert(lab.end(), f->values().begin(), f->values().end());
    for (unsigned j = 0; j < n; ++j) lab.push_back(m->types[j][i]);
    labels[i] = intern(lab);
  }
  m->structure = chain_structure(labels);
  return *models_.emplace(key, std::move(m)).first->second;
}

bool WordTyper::same_type(const WordModel& a, const WordModel& b) const {
  std::size_t big = std::max(a.structure.size, b.structure.size);
  if (k_ >= big) return a.structure.labels == b.structure.labels;
  return fo_equiv(a.structure, {}, b.structure, {}, k_);
}

TypeId WordTyper::type_of(const Word& w, unsigned n) {
  auto key = std::make_pair(w, n);
  if (auto it = type_cache_.find(key); it != type_cache_.end()) return it->second;
  const WordModel& m = model(w, n);
  auto& reps = representatives_[n];
  TypeId id = static_cast<TypeId>(reps.size());
  for (TypeId i = 0; i < reps.size(); ++i)
    if (same_type(*reps[i], m)) {
      id = i;
      break;
    }
  if (id == reps.size()) reps.push_back(&m);
  type_cache_.emplace(key, id);
  return id;
}

bool WordTyper::exact(const Word& w, unsigned n) { return model(w, n).exact; }

std::size_t WordTyper::observed_classes(unsigned n) const {
  auto it = representatives_.find(n);
  return it == representatives_.end() ? 0 : it->second.size();
}

Verdict WordTyper::word_equiv(const Word& a, const Word& b, unsigned n) {
  bool same = type_of(a, n) == type_of(b, n);
  if (!exact(a, n) || !exact(b, n)) return Verdict::Indeterminate;
  return same ? Verdict::Equivalent : Verdict::Distinct;
}

Verdict WordTyper::stack_equiv(const Stack& a, const Stack& b, unsigned n, unsigned m) {
  if (a.level() != 2 || b.level() != 2) throw Error(ErrorCode::LevelUnsupported, "level-2 stacks expected");
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::size_t compare;
  if (ea.size() > m && eb.size() > m) compare = m + 1;
  else if (ea.size() == eb.size()) compare = ea.size();
  else return Verdict::Distinct;
  bool unsure = false;
  for (std::size_t i = 0; i < compare; ++i) {
    Verdict v = word_equiv(ea[ea.size() - 1 - i].word(), eb[eb.size() - 1 - i].word(), n);
    if (v == Verdict::Distinct) return v;
    if (v == Verdict::Indeterminate) unsure = true;
  }
  return unsure ? Verdict::Indeterminate : Verdict::Equivalent;
}

std::vector<std::uint32_t> WordTyper::stack_class(const Stack& s, unsigned n, unsigned m) {
  if (s.level() == 1) return {0xFFFF0000u | s.top_symbol()};
  const auto& e = s.entries();
  std::vector<std::uint32_t> out;
  std::size_t compare = e.size() > m ? m + 1 : e.size();
  out.push_back(e.size() > m ? (0x80000000u | static_cast<std::uint32_t>(m + 1)) : static_cast<std::uint32_t>(e.size()));
  for (std::size_t i = 0; i < compare; ++i) out.push_back(type_of(e[e.size() - 1 - i].word(), n));
  return out;
}

WordModel build_lin(const PushdownSystem& sys, const Word& w, unsigned n, unsigned k, unsigned z,
                    std::size_t budget) {
  WordTyper t(sys, z, budget, k);
  return t.model(w, n);
}

Verdict word_equiv(const PushdownSystem& sys, const Word& a, const Word& b, unsigned n, unsigned z,
                   std::size_t budget) {
  WordTyper t(sys, z, budget);
  return t.word_equiv(a, b, n);
}

}  // namespace hont
