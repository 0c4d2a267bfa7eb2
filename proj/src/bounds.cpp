#include "hont/bounds.hpp"

#include <boost/multiprecision/integer.hpp>

#include "hont/error.hpp"
#include "hont/wordtypes.hpp"

namespace hont {

namespace {

Bound checked(BigInt v) {
  if (v != 0 && boost::multiprecision::msb(abs(v)) >= Bound::kMaxBits) return Bound::huge();
  return Bound(std::move(v));
}

BigInt pow4(const BigInt& e) {
  if (e < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent");
  if (e > BigInt(Bound::kMaxBits / 2)) throw Error(ErrorCode::SizeLimit, "parameter too large");
  return BigInt(1) << static_cast<unsigned>(2 * e);
}

BigInt clamp0(const BigInt& x) { return x < 0 ? BigInt(0) : x; }

// Σ_{i=1}^{k} at(max(0, base - i))
BigInt clamped_class_sum(const ClassCounts& c, const BigInt& base, const BigInt& k) {
  if (k <= 0) return 0;
  BigInt pos = base > 0 ? std::min(k, base) : BigInt(0);
  BigInt sum = 0;
  if (pos > 0) sum = c.prefix_sum(base - 1) - c.prefix_sum(base - pos - 1);
  return sum + (k - pos) * c.at(0);
}

}  // namespace

std::string Bound::str() const {
  if (overflow) return ">2^" + std::to_string(kMaxBits);
  return value.str();
}

Bound operator+(const Bound& a, const Bound& b) {
  if (a.overflow || b.overflow) return Bound::huge();
  return checked(a.value + b.value);
}

Bound operator*(const Bound& a, const Bound& b) {
  if ((!a.overflow && a.value == 0) || (!b.overflow && b.value == 0)) return Bound(0);
  if (a.overflow || b.overflow) return Bound::huge();
  if (boost::multiprecision::msb(a.value) + boost::multiprecision::msb(b.value) + 2 > Bound::kMaxBits)
    return Bound::huge();
  return checked(a.value * b.value);
}

Bound max(const Bound& a, const Bound& b) {
  if (a.overflow || b.overflow) return Bound::huge();
  return a.value < b.value ? b : a;
}

bool operator==(const Bound& a, const Bound& b) {
  if (a.overflow || b.overflow) return a.overflow == b.overflow;
  return a.value == b.value;
}

BigInt ClassCounts::at(const BigInt& level) const {
  if (by_level.empty()) throw Error(ErrorCode::InvalidArgument, "no class counts");
  if (level < 0) return by_level.front();
  if (level >= by_level.size()) return by_level.back();
  return by_level[static_cast<std::size_t>(level)];
}

BigInt ClassCounts::prefix_sum(const BigInt& x) const {
  if (x < 0) return 0;
  BigInt sum = 0;
  std::size_t listed = by_level.size() - 1;  // entries before the repeating tail
  for (std::size_t i = 0; i < listed && i <= x; ++i) sum += by_level[i];
  if (x >= listed) sum += (x - listed + 1) * by_level.back();
  return sum;
}

ClassCounts ClassCounts::constant(BigInt c) {
  ClassCounts out;
  out.by_level = {c};
  out.level0_z2 = c;
  out.source = "constant " + c.str();
  return out;
}

ClassCounts ClassCounts::observed(const PushdownSystem& sys, unsigned z, unsigned max_level,
                                  std::size_t max_word_len, std::size_t budget) {
  WordTyper typer(sys, z, budget);
  WordTyper typer2(sys, 2, budget);
  std::size_t letters = sys.alphabet().size() - 1;
  std::vector<Word> words{Word{kBottom}};
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (words[i].size() >= max_word_len) continue;
    for (std::size_t a = 1; a <= letters; ++a) {
      Word w = words[i];
      w.push_back(static_cast<Symbol>(a));
      words.push_back(std::move(w));
    }
  }
  ClassCounts out;
  out.by_level.clear();
  for (unsigned n = 0; n <= max_level; ++n) {
    for (const auto& w : words) typer.type_of(w, n);
    out.by_level.push_back(typer.observed_classes(n));
  }
  for (const auto& w : words) typer2.type_of(w, 0);
  out.level0_z2 = typer2.observed_classes(0);
  out.source = "observed on words up to length " + std::to_string(max_word_len) + ", levels 0.." +
               std::to_string(max_level);
  return out;
}

BigInt top_word_bound(const PushdownSystem& sys, const BoundInputs& in, const BigInt& level) {
  return BigInt(sys.num_states()) * in.classes.at(clamp0(level)) + 1;
}

BigInt word_height_constant(const PushdownSystem& sys, const BoundInputs& in) {
  BigInt q = sys.num_states();
  return in.classes.level0_z2 * q * q;
}

Bound width_word_bound(const PushdownSystem& sys, const Bound& height) {
  BigInt q = sys.num_states();
  unsigned base = static_cast<unsigned>(sys.alphabet().size());  // letters plus one
  if (base == 1) return Bound(q);
  if (height.overflow) return Bound::huge();
  double bits = static_cast<double>(height.value) * std::log2(static_cast<double>(base));
  if (bits + 64 > static_cast<double>(Bound::kMaxBits)) return Bound::huge();
  return checked(q * boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(height.value)));
}

Bound one_step_height(const PushdownSystem& sys, const BoundInputs& in, const Bound& a, const Bound& b,
                      const BigInt& level) {
  Bound per = Bound(BigInt(sys.num_states()) * in.classes.at(clamp0(level)));
  return Bound(1) + b + a * per;
}

bool BoundTables::exact() const {
  for (const auto& lv : levels)
    if (lv.height.overflow || lv.width.overflow || lv.length.overflow) return false;
  return true;
}

namespace {

void fill(const PushdownSystem& sys, const BoundInputs& in, unsigned n, const BigInt& l, const BigInt& n1,
          const BigInt& n2, std::vector<BoundLevel>& out) {
  BoundLevel lv;
  lv.n = n;
  lv.l = l;
  lv.n1 = n1;
  lv.n2 = n2;
  if (n == 0) {
    out.push_back(lv);
    return;
  }
  BigInt ll = 4 * l + 5;
  BigInt nn1 = n1 + 2 * (l + 1) + 1;
  BigInt nn2 = n2 + pow4(l + 1) + 1;
  fill(sys, in, n - 1, ll, nn1, nn2, out);
  const BoundLevel& prev = out.back();
  const BigInt q = sys.num_states();

  lv.loc_len = pow4(l + 1);
  lv.loc_first = one_step_height(sys, in, Bound(BigInt(n - 1) * pow4(4 * l + 3)), prev.height, nn2 - 1);
  // Each later step adds 1 + |Q|·classes(nn1 - (i+1)).
  lv.loc_last = lv.loc_first + Bound(lv.loc_len - 1) +
                Bound(q * clamped_class_sum(in.classes, nn1 - 1, lv.loc_len - 1));

  BigInt glob_base = n2 + n1 + pow4(l + 1);
  lv.top_word = Bound(top_word_bound(sys, in, glob_base - 1));
  lv.glob_len = n1 + pow4(l);
  lv.glob_first = prev.height + Bound(word_height_constant(sys, in)) + lv.top_word;
  lv.glob_last = lv.glob_first + Bound(lv.glob_len - 1) +
                 Bound(q * clamped_class_sum(in.classes, glob_base, lv.glob_len - 1));

  lv.height = max(lv.loc_last, lv.glob_last);
  lv.width_word = width_word_bound(sys, lv.glob_first);
  lv.width = prev.width + lv.width_word + Bound(n1 + 2 * (l + 1));
  if (lv.height.overflow) {
    lv.loop_length = Bound::huge();
  } else {
    try {
      lv.loop_length = checked(in.lambda.lambda(lv.height.value));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SizeLimit) throw;
      lv.loop_length = Bound::huge();
    }
  }
  lv.length = prev.length + Bound(pow4(l + 1) + 1) * lv.height * lv.width * (Bound(1) + lv.loop_length);
  out.push_back(lv);
}

}  // namespace

BoundTables bound_tables(const PushdownSystem& sys, unsigned n, const BigInt& l, const BigInt& n1, const BigInt& n2,
                         const BoundInputs& in) {
  if (l < 0 || n1 < 0 || n2 < 0) throw Error(ErrorCode::InvalidArgument, "negative bound parameter");
  BoundTables t;
  t.z = in.z;
  fill(sys, in, n, l, n1, n2, t.levels);
  t.height_word = word_height_constant(sys, in);
  t.class_source = in.classes.source;
  t.lambda_source = in.lambda_source;
  t.lambda_complete = in.lambda.complete;
  return t;
}

}  // namespace hont
