#include "multiegs/word.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace multiegs {

// ---------------------------------------------------------------- GroupWord

GroupWord GroupWord::a(int p, int exponent) {
  GroupWord w(p);
  w.push(APower{exponent});
  return w;
}

GroupWord GroupWord::b(const NumericalDatum& d, int j, int i, int exponent) {
  if (j < 1 || j > d.p || i < 1 || i > d.family_size(j))
    throw std::invalid_argument("generator b[" + std::to_string(j) + "," + std::to_string(i) +
                                "] does not exist in this datum");
  FamilyPower s{j, std::vector<int>(d.family_size(j), 0)};
  s.exponents[i - 1] = exponent;
  GroupWord w(d.p);
  w.push(std::move(s));
  return w;
}

GroupWord GroupWord::family(int p, FamilyPower syllable) {
  GroupWord w(p);
  w.push(std::move(syllable));
  return w;
}

void GroupWord::push(Syllable s) {
  if (auto* ap = std::get_if<APower>(&s)) {
    ap->exponent = mod(ap->exponent, p_);
    if (ap->exponent == 0) return;
    if (!syllables_.empty())
      if (auto* last = std::get_if<APower>(&syllables_.back())) {
        last->exponent = mod(last->exponent + ap->exponent, p_);
        if (last->exponent == 0) syllables_.pop_back();
        return;
      }
    syllables_.push_back(s);
    return;
  }
  auto& fp = std::get<FamilyPower>(s);
  bool zero = true;
  for (auto& x : fp.exponents) {
    x = mod(x, p_);
    zero = zero && x == 0;
  }
  if (zero) return;
  if (!syllables_.empty())
    if (auto* last = std::get_if<FamilyPower>(&syllables_.back()); last && last->family == fp.family) {
      if (last->exponents.size() != fp.exponents.size())
        throw std::invalid_argument("family syllables of different ranks");
      bool all_zero = true;
      for (std::size_t i = 0; i < fp.exponents.size(); ++i) {
        last->exponents[i] = mod(last->exponents[i] + fp.exponents[i], p_);
        all_zero = all_zero && last->exponents[i] == 0;
      }
      if (all_zero) syllables_.pop_back();
      return;
    }
  syllables_.push_back(std::move(s));
}

GroupWord GroupWord::operator*(const GroupWord& other) const {
  if (p_ != other.p_) throw std::invalid_argument("words over different primes");
  GroupWord r = *this;
  for (const auto& s : other.syllables_) r.push(s);
  return r;
}

GroupWord GroupWord::inverse() const {
  GroupWord r(p_);
  for (auto it = syllables_.rbegin(); it != syllables_.rend(); ++it) {
    if (const auto* ap = std::get_if<APower>(&*it)) {
      r.push(APower{-ap->exponent});
    } else {
      FamilyPower f = std::get<FamilyPower>(*it);
      for (auto& x : f.exponents) x = -x;
      r.push(std::move(f));
    }
  }
  return r;
}

GroupWord GroupWord::pow(long long e) const {
  GroupWord base = e < 0 ? inverse() : *this;
  unsigned long long n = e < 0 ? -static_cast<unsigned long long>(e) : static_cast<unsigned long long>(e);
  GroupWord r(p_);
  while (n) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return r;
}

GroupWord GroupWord::conjugate(const GroupWord& g) const { return g.inverse() * *this * g; }

int GroupWord::length() const {
  return static_cast<int>(std::count_if(syllables_.begin(), syllables_.end(), [](const Syllable& s) {
    return std::holds_alternative<FamilyPower>(s);
  }));
}

int GroupWord::a_exponent() const {
  long long s = 0;
  for (const auto& syl : syllables_)
    if (const auto* ap = std::get_if<APower>(&syl)) s += ap->exponent;
  return mod(s, p_);
}

GroupWord commutator(const GroupWord& x, const GroupWord& y) {
  return x.inverse() * y.inverse() * x * y;
}

GroupWord reduce(const GroupWord& w) {
  GroupWord r(w.prime());
  for (const auto& s : w.syllables()) r.push(s);
  return r;
}

// ---------------------------------------------------------------- syntax

namespace {

class WordParser {
 public:
  WordParser(const std::string& text, const NumericalDatum& d) : s_(text), d_(d) {}

  GroupWord parse() {
    GroupWord w = word();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("word syntax, column " + std::to_string(pos_ + 1) + ": " + msg);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  long long integer() {
    skip();
    bool neg = false;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
      neg = s_[pos_] == '-';
      ++pos_;
      skip();
    }
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected an integer");
    long long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_++] - '0');
      if (v > 1000000000) fail("integer too large");
    }
    return neg ? -v : v;
  }

  GroupWord word() {
    GroupWord w(d_.p);
    for (;;) {
      skip();
      if (pos_ >= s_.size()) break;
      const char c = s_[pos_];
      if (c == ')' || c == ']' || c == ',') break;
      if (c == '*') {
        ++pos_;
        continue;
      }
      w = w * factor();
    }
    return w;
  }

  GroupWord factor() {
    GroupWord x = atom();
    if (peek('^')) {
      ++pos_;
      x = x.pow(integer());
    }
    return x;
  }

  GroupWord atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of word");
    const char c = s_[pos_];
    if (c == 'a') {
      ++pos_;
      return GroupWord::a(d_.p);
    }
    if (c == '1') {
      ++pos_;
      return GroupWord(d_.p);
    }
    if (c == 'b') {
      ++pos_;
      expect('[');
      const long long j = integer();
      long long i = 1;
      if (peek(',')) {
        ++pos_;
        i = integer();
      }
      expect(']');
      if (j < 1 || j > d_.p || d_.family_size(static_cast<int>(j)) == 0)
        fail("family " + std::to_string(j) + " is empty or out of range");
      if (i < 1 || i > d_.family_size(static_cast<int>(j)))
        fail("index " + std::to_string(i) + " out of range for family " + std::to_string(j));
      return GroupWord::b(d_, static_cast<int>(j), static_cast<int>(i));
    }
    if (c == '(') {
      ++pos_;
      GroupWord w = word();
      expect(')');
      return w;
    }
    if (c == '[') {
      ++pos_;
      GroupWord w = word();
      int terms = 1;
      while (peek(',')) {
        ++pos_;
        w = commutator(w, word());
        ++terms;
      }
      if (terms < 2) fail("commutator needs at least two entries");
      expect(']');
      return w;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  std::string s_;
  const NumericalDatum& d_;
  std::size_t pos_ = 0;
};

}  // namespace

GroupWord parse_word(const std::string& text, const NumericalDatum& datum) {
  return WordParser(text, datum).parse();
}

std::string format_word(const GroupWord& w) {
  std::string out;
  auto add = [&](const std::string& t) {
    if (!out.empty()) out += ' ';
    out += t;
  };
  for (const auto& syl : w.syllables()) {
    if (const auto* ap = std::get_if<APower>(&syl)) {
      add(ap->exponent == 1 ? "a" : "a^" + std::to_string(ap->exponent));
      continue;
    }
    const auto& f = std::get<FamilyPower>(syl);
    for (std::size_t i = 0; i < f.exponents.size(); ++i) {
      if (f.exponents[i] == 0) continue;
      std::string t = "b[" + std::to_string(f.family) + "," + std::to_string(i + 1) + "]";
      if (f.exponents[i] != 1) t += "^" + std::to_string(f.exponents[i]);
      add(t);
    }
  }
  return out.empty() ? "1" : out;
}

// ---------------------------------------------------------------- evaluation

namespace {

void require_family(const NumericalDatum& d, const FamilyPower& f) {
  if (f.family < 1 || f.family > d.p || d.family_size(f.family) == 0)
    throw std::invalid_argument("syllable references empty family " + std::to_string(f.family));
  if (static_cast<int>(f.exponents.size()) != d.family_size(f.family))
    throw std::invalid_argument("syllable rank does not match family " + std::to_string(f.family));
}

}  // namespace

Portrait evaluate(const GroupWord& w, const NumericalDatum& d, int depth) {
  Portrait r(d.p, depth);
  for (const auto& syl : w.syllables()) {
    if (const auto* ap = std::get_if<APower>(&syl)) {
      r = compose(r, Portrait::rooted(d.p, depth, ap->exponent));
    } else {
      const auto& f = std::get<FamilyPower>(syl);
      require_family(d, f);
      const auto v = combined_vector(d, FamilyElement{f.family, f.exponents});
      r = compose(r, directed_portrait(d.p, f.family, v, depth));
    }
  }
  return r;
}

FirstLevel first_level(const GroupWord& w, const NumericalDatum& d) {
  const int p = d.p;
  FirstLevel out;
  out.sections.assign(p, GroupWord(p));
  int s = 0;
  for (const auto& syl : w.syllables()) {
    if (const auto* ap = std::get_if<APower>(&syl)) {
      s = mod(s + ap->exponent, p);
      continue;
    }
    const auto& f = std::get<FamilyPower>(syl);
    require_family(d, f);
    const auto v = combined_vector(d, FamilyElement{f.family, f.exponents});
    for (int x = 1; x <= p; ++x) {
      const int c = mod(x - 1 + s, p) + 1;  // x^prefix
      const auto idx = defining_vector_index(p, f.family, c);
      auto& sec = out.sections[x - 1];
      if (idx)
        sec.push(APower{v[*idx]});
      else
        sec.push(f);
    }
  }
  out.root = s;
  return out;
}

std::vector<GroupWord> first_level_sections(const GroupWord& w, const NumericalDatum& d) {
  auto fl = first_level(w, d);
  if (fl.root != 0) throw std::invalid_argument("word does not stabilize the first level");
  return std::move(fl.sections);
}

std::string to_string(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    case Tri::GuardExceeded: return "GuardExceeded";
  }
  return "?";
}

Tri is_trivial(const GroupWord& w, const NumericalDatum& d, const RecursionGuard& guard) {
  // w is trivial iff every word reachable by taking sections stabilizes level 1.
  // Sections never lengthen a word, so the reachable set is finite.
  std::set<GroupWord> seen{w};
  std::vector<GroupWord> layer{w};
  for (int depth = 0; !layer.empty(); ++depth) {
    if (depth > guard.depth) return Tri::GuardExceeded;
    std::vector<GroupWord> next;
    for (const auto& x : layer) {
      if (x.syllables().size() > guard.length) return Tri::GuardExceeded;
      auto fl = first_level(x, d);
      if (fl.root != 0) return Tri::False;
      for (auto& s : fl.sections) {
        if (s.empty() || seen.contains(s)) continue;
        if (seen.size() >= guard.nodes) return Tri::GuardExceeded;
        seen.insert(s);
        next.push_back(std::move(s));
      }
    }
    layer = std::move(next);
  }
  return Tri::True;
}

OrderResult order(const GroupWord& w, const NumericalDatum& d, std::uint64_t cap,
                  const RecursionGuard& guard) {
  // log_p |x| = [x moves level 1] + max over the sections of x (or of x^p).
  // The least solution of these equations on the finite reachable graph is
  // the true order; a cycle through a p-th power makes it unbounded.
  int cap_log = 0;
  for (std::uint64_t c = cap; c >= static_cast<std::uint64_t>(d.p); c /= d.p) ++cap_log;

  std::map<GroupWord, int> index;
  std::vector<std::vector<int>> succ;
  std::vector<int> weight;
  std::deque<GroupWord> todo;
  auto intern = [&](const GroupWord& x) -> std::optional<int> {
    if (auto it = index.find(x); it != index.end()) return it->second;
    if (index.size() >= guard.nodes) return std::nullopt;
    const int id = static_cast<int>(index.size());
    index.emplace(x, id);
    succ.emplace_back();
    weight.push_back(0);
    todo.push_back(x);
    return id;
  };
  intern(w);
  while (!todo.empty()) {
    GroupWord x = std::move(todo.front());
    todo.pop_front();
    const int id = index.at(x);
    if (x.syllables().size() > guard.length) return {OrderResult::Kind::GuardExceeded, 0};
    auto fl = first_level(x, d);
    if (fl.root != 0) {
      weight[id] = 1;
      fl = first_level(x.pow(d.p), d);
    }
    for (const auto& s : fl.sections) {
      if (s.empty()) continue;
      const auto t = intern(s);
      if (!t) return {OrderResult::Kind::GuardExceeded, 0};
      succ[id].push_back(*t);
    }
  }

  std::vector<int> f(succ.size(), 0);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = succ.size(); v-- > 0;) {
      int best = 0;
      for (int t : succ[v]) best = std::max(best, f[t]);
      const int nv = best + weight[v];
      if (nv != f[v]) {
        f[v] = nv;
        changed = true;
        if (nv > cap_log) return {OrderResult::Kind::ExceedsCap, 0};
      }
    }
  }
  return {OrderResult::Kind::Finite, f[0]};
}

std::vector<int> abelianization(const GroupWord& w, const NumericalDatum& d) {
  std::vector<int> offset(d.p + 1, 1);
  for (int j = 1; j <= d.p; ++j) offset[j] = offset[j - 1] + (j > 1 ? d.family_size(j - 1) : 0);
  std::vector<int> v(1 + d.total_rank(), 0);
  for (const auto& syl : w.syllables()) {
    if (const auto* ap = std::get_if<APower>(&syl)) {
      v[0] = mod(v[0] + ap->exponent, d.p);
      continue;
    }
    const auto& f = std::get<FamilyPower>(syl);
    require_family(d, f);
    for (std::size_t i = 0; i < f.exponents.size(); ++i)
      v[offset[f.family] + i] = mod(v[offset[f.family] + i] + f.exponents[i], d.p);
  }
  return v;
}

// ---------------------------------------------------------------- BranchElement

BranchElement::BranchElement(GroupWord leaf) : leaf_(std::move(leaf)) {}

BranchElement::BranchElement(int label, std::vector<BranchElement> children)
    : label_(label), children_(std::move(children)) {
  if (children_.empty()) throw std::invalid_argument("branch node needs p children");
}

int BranchElement::depth() const {
  if (is_leaf()) return 0;
  int m = 0;
  for (const auto& c : children_) m = std::max(m, c.depth());
  return m + 1;
}

Portrait evaluate(const BranchElement& e, const NumericalDatum& d, int depth) {
  if (e.is_leaf()) return evaluate(e.word(), d, depth);
  if (static_cast<int>(e.children().size()) != d.p)
    throw std::invalid_argument("branch node needs exactly p children");
  if (depth == 0) return Portrait(d.p, 0);
  std::vector<Portrait> kids;
  kids.reserve(d.p);
  for (const auto& c : e.children()) kids.push_back(evaluate(c, d, depth - 1));
  return Portrait::assemble(e.label(), kids);
}

std::vector<int> abelianization(const BranchElement& e, const NumericalDatum& d) {
  if (e.is_leaf()) return abelianization(e.word(), d);
  std::vector<int> v(1 + d.total_rank(), 0);
  for (const auto& c : e.children()) {
    const auto cv = abelianization(c, d);
    for (std::size_t i = 1; i < v.size(); ++i) v[i] = mod(v[i] + cv[i], d.p);
  }
  v[0] = mod(e.label(), d.p);
  return v;
}

std::string format_branch(const BranchElement& e) {
  if (e.is_leaf()) return format_word(e.word());
  std::string s = "psi^-1(";
  for (std::size_t i = 0; i < e.children().size(); ++i) {
    if (i) s += ", ";
    s += format_branch(e.children()[i]);
  }
  s += ")";
  if (e.label() != 0) s += e.label() == 1 ? " a" : " a^" + std::to_string(e.label());
  return s;
}

}  // namespace multiegs
