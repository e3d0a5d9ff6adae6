#include "psp/words.hpp"

#include <algorithm>
#include <array>

#include "psp/errors.hpp"

namespace psp {

namespace {

struct Span {
  int lo;
  int hi;
};

constexpr std::array<Span, 6> kSpans = {{
    {0, 0},  // L0
    {1, 1},  // L1
    {2, 2},  // L2
    {0, 1},  // L01
    {1, 2},  // L12
    {0, 2},  // L02
}};

const Span& span_of(Letter s) { return kSpans[static_cast<std::size_t>(s)]; }

bool is_zero_or_two(Letter s) { return s == Letter::L0 || s == Letter::L2; }

bool swap_pair(Letter a, Letter b) {
  return (a == Letter::L0 && b == Letter::L2) || (a == Letter::L2 && b == Letter::L0);
}

}  // namespace

int letter_lo(Letter s) { return span_of(s).lo; }
int letter_hi(Letter s) { return span_of(s).hi; }
int letter_width(Letter s) { return span_of(s).hi - span_of(s).lo + 1; }

bool letter_has_level(Letter s, int level) {
  return span_of(s).lo <= level && level <= span_of(s).hi;
}

bool letter_contains(Letter outer, Letter inner) {
  return span_of(outer).lo <= span_of(inner).lo && span_of(inner).hi <= span_of(outer).hi;
}

bool letters_comparable(Letter s, Letter t) {
  return letter_contains(s, t) || letter_contains(t, s);
}

std::vector<Letter> proper_subletters(Letter s) {
  std::vector<Letter> out;
  for (Letter t : kAllLetters) {
    if (t != s && letter_contains(s, t)) out.push_back(t);
  }
  return out;
}

std::optional<Letter> letter_from_span(int lo, int hi) {
  for (Letter t : kAllLetters) {
    if (letter_lo(t) == lo && letter_hi(t) == hi) return t;
  }
  return std::nullopt;
}

std::string to_string(Letter s) {
  switch (s) {
    case Letter::L0: return "0";
    case Letter::L1: return "1";
    case Letter::L2: return "2";
    case Letter::L01: return "01";
    case Letter::L12: return "12";
    case Letter::L02: return "02";
  }
  return "?";
}

Letter parse_letter(std::string_view text) {
  for (Letter t : kAllLetters) {
    if (to_string(t) == text) return t;
  }
  throw ParseError("not a letter: '" + std::string(text) + "'");
}

Word permute_step(const Word& w, std::size_t i) {
  if (i + 1 >= w.size()) {
    throw InvariantError("permute_step: position " + std::to_string(i) + " out of range");
  }
  if (!swap_pair(w[i], w[i + 1])) {
    throw InvariantError("permute_step: letters at position " + std::to_string(i) +
                         " are " + to_string(w[i]) + "," + to_string(w[i + 1]) +
                         "; only 0 and 2 commute");
  }
  Word out = w;
  std::swap(out[i], out[i + 1]);
  return out;
}

Word canonical_commuting_order(Word w) {
  std::size_t i = 0;
  while (i < w.size()) {
    if (!is_zero_or_two(w[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    std::size_t zeros = 0;
    while (j < w.size() && is_zero_or_two(w[j])) {
      if (w[j] == Letter::L0) ++zeros;
      ++j;
    }
    for (std::size_t m = i; m < j; ++m) {
      w[m] = (m - i < zeros) ? Letter::L0 : Letter::L2;
    }
    i = j;
  }
  return w;
}

bool equal_up_to_permutation(const Word& u, const Word& v) {
  return canonical_commuting_order(u) == canonical_commuting_order(v);
}

namespace {

// Positions i < j can be made adjacent by permutations iff every letter
// strictly between them is 0 or 2 and can cross either endpoint.
bool can_be_adjacent(const Word& w, std::size_t i, std::size_t j) {
  for (std::size_t m = i + 1; m < j; ++m) {
    if (!is_zero_or_two(w[m])) return false;
    if (!swap_pair(w[m], w[i]) && !swap_pair(w[m], w[j])) return false;
  }
  return true;
}

struct Cancellation {
  std::size_t erase_pos;
};

std::optional<Cancellation> find_cancellation(const Word& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      if (!letters_comparable(w[i], w[j])) continue;
      if (!can_be_adjacent(w, i, j)) continue;
      if (w[i] == w[j]) return Cancellation{j};
      if (letter_contains(w[j], w[i])) return Cancellation{i};
      return Cancellation{j};
    }
  }
  return std::nullopt;
}

}  // namespace

bool is_reduced(const Word& w) { return !find_cancellation(w).has_value(); }

bool reduced_after_append(const Word& w, Letter s) {
  const std::size_t n = w.size();
  for (std::size_t i = n; i-- > 0;) {
    bool reachable = true;
    for (std::size_t m = i + 1; m < n; ++m) {
      if (!is_zero_or_two(w[m]) || (!swap_pair(w[m], w[i]) && !swap_pair(w[m], s))) {
        reachable = false;
        break;
      }
    }
    if (reachable && letters_comparable(w[i], s)) return false;
  }
  return true;
}

Word nonsplitting_reduce_counted(const Word& w, std::size_t* steps) {
  Word cur = canonical_commuting_order(w);
  std::size_t count = 0;
  while (auto c = find_cancellation(cur)) {
    cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(c->erase_pos));
    cur = canonical_commuting_order(cur);
    ++count;
  }
  if (steps) *steps = count;
  return cur;
}

Word nonsplitting_reduce(const Word& w) { return nonsplitting_reduce_counted(w, nullptr); }

Word concat_reduce(const Word& u, const Word& v) {
  Word joined = u;
  joined.insert(joined.end(), v.begin(), v.end());
  return nonsplitting_reduce(joined);
}

Word reversed(Word w) {
  std::reverse(w.begin(), w.end());
  return w;
}

std::string word_to_string(const Word& w) {
  if (w.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '.';
    out += to_string(w[i]);
  }
  return out;
}

Word parse_word(std::string_view text) {
  Word out;
  if (text.empty() || text == "-") return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t dot = text.find('.', start);
    std::string_view tok = text.substr(start, dot == std::string_view::npos ? dot : dot - start);
    out.push_back(parse_letter(tok));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
    if (start == text.size()) throw ParseError("trailing '.' in word '" + std::string(text) + "'");
  }
  return out;
}

}  // namespace psp
