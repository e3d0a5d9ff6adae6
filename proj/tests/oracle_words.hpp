#pragma once

// Exhaustive-rewrite oracle for the word calculus.  Explores the closure of
// a word under all single permutation and cancellation moves, in every
// possible order, and reports the set of minimal-length results.  Kept
// independent of the production rewriting strategy on purpose.

#include <algorithm>
#include <optional>
#include <queue>
#include <set>
#include <vector>

#include "psp/words.hpp"

namespace psp::testing {

inline std::vector<Word> one_step_moves(const Word& w) {
  std::vector<Word> out;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const bool swap02 = (w[i] == Letter::L0 && w[i + 1] == Letter::L2) ||
                        (w[i] == Letter::L2 && w[i + 1] == Letter::L0);
    if (swap02) {
      Word u = w;
      std::swap(u[i], u[i + 1]);
      out.push_back(u);
    }
    if (letters_comparable(w[i], w[i + 1])) {
      // cancel the smaller letter; for equal letters either erase works
      std::size_t erase_pos = letter_contains(w[i + 1], w[i]) ? i : i + 1;
      Word u = w;
      u.erase(u.begin() + static_cast<std::ptrdiff_t>(erase_pos));
      out.push_back(u);
      if (w[i] == w[i + 1]) {
        Word v = w;
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i + 1));
        out.push_back(v);
      }
    }
  }
  return out;
}

struct RewriteClosure {
  std::set<Word> all;
  std::set<Word> shortest;           // minimal-length elements of the closure
  std::set<Word> shortest_canonical; // same, mapped to canonical commuting order
};

inline RewriteClosure rewrite_closure(const Word& start) {
  RewriteClosure rc;
  std::queue<Word> queue;
  queue.push(start);
  rc.all.insert(start);
  while (!queue.empty()) {
    Word w = queue.front();
    queue.pop();
    for (Word& u : one_step_moves(w)) {
      if (rc.all.insert(u).second) queue.push(std::move(u));
    }
  }
  std::size_t best = start.size();
  for (const Word& w : rc.all) best = std::min(best, w.size());
  for (const Word& w : rc.all) {
    if (w.size() == best) {
      rc.shortest.insert(w);
      rc.shortest_canonical.insert(canonical_commuting_order(w));
    }
  }
  return rc;
}

// The oracle's notion of "reduced": no cancellation applies to any word in
// the permutation closure of w.
inline bool oracle_is_reduced(const Word& w) {
  std::set<Word> seen;
  std::queue<Word> queue;
  queue.push(w);
  seen.insert(w);
  while (!queue.empty()) {
    Word u = queue.front();
    queue.pop();
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
      if (letters_comparable(u[i], u[i + 1])) return false;
    }
    for (std::size_t i = 0; i + 1 < u.size(); ++i) {
      const bool swap02 = (u[i] == Letter::L0 && u[i + 1] == Letter::L2) ||
                          (u[i] == Letter::L2 && u[i + 1] == Letter::L0);
      if (!swap02) continue;
      Word v = u;
      std::swap(v[i], v[i + 1]);
      if (seen.insert(v).second) queue.push(std::move(v));
    }
  }
  return true;
}

// Unique normal form according to the oracle, or nullopt if the closure has
// more than one permutation class of minimal length.
inline std::optional<Word> oracle_normal_form(const Word& w) {
  RewriteClosure rc = rewrite_closure(w);
  if (rc.shortest_canonical.size() != 1) return std::nullopt;
  return *rc.shortest_canonical.begin();
}

}  // namespace psp::testing
