#include "psp/paths.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "psp/errors.hpp"

namespace psp {

namespace {

constexpr Letter kPathLetters[] = {Letter::L0, Letter::L1, Letter::L2, Letter::L01,
                                   Letter::L12};

bool levels_differ_exactly(const Flag& f, const Flag& g, Letter s) {
  for (int lvl = 0; lvl <= 2; ++lvl) {
    bool differs = f.at_level(lvl) != g.at_level(lvl);
    if (differs != letter_has_level(s, lvl)) return false;
  }
  return true;
}

}  // namespace

std::vector<Flag> flag_neighbors(const Geometry& g, const Flag& f, Letter s) {
  if (!g.is_flag(f)) throw InvariantError("flag_neighbors: " + to_string(f) + " is not a flag");
  std::vector<Flag> out;
  switch (s) {
    case Letter::L0:
      for (VertexId c : g.down(f.line)) {
        if (c != f.point) out.push_back(Flag{f.plane, f.line, c});
      }
      break;
    case Letter::L1: {
      for (VertexId b : g.up(f.point)) {
        if (b != f.line && g.has_edge(f.plane, b)) out.push_back(Flag{f.plane, b, f.point});
      }
      break;
    }
    case Letter::L2:
      for (VertexId a : g.up(f.line)) {
        if (a != f.plane) out.push_back(Flag{a, f.line, f.point});
      }
      break;
    case Letter::L01:
      for (VertexId b : g.down(f.plane)) {
        if (b == f.line) continue;
        for (VertexId c : g.down(b)) {
          if (c != f.point) out.push_back(Flag{f.plane, b, c});
        }
      }
      break;
    case Letter::L12:
      for (VertexId b : g.up(f.point)) {
        if (b == f.line) continue;
        for (VertexId a : g.up(b)) {
          if (a != f.plane) out.push_back(Flag{a, b, f.point});
        }
      }
      break;
    case Letter::L02:
      for (const Flag& h : g.all_flags()) {
        if (h.plane != f.plane && h.line != f.line && h.point != f.point) out.push_back(h);
      }
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool has_splitting(const Geometry& g, const Flag& f1, const Flag& f2, Letter s, int bound) {
  if (!levels_differ_exactly(f1, f2, s)) {
    throw InvariantError("has_splitting: flags are not " + to_string(s) + "-neighbors");
  }
  std::vector<Letter> subs = proper_subletters(s);
  if (subs.empty()) return false;
  // plain BFS over flag paths built from proper subletters
  std::vector<Flag> frontier{f1};
  std::vector<Flag> seen{f1};
  for (int depth = 0; depth < bound; ++depth) {
    std::vector<Flag> next;
    for (const Flag& f : frontier) {
      for (Letter t : subs) {
        for (const Flag& h : flag_neighbors(g, f, t)) {
          if (h == f2) return true;
          auto it = std::lower_bound(seen.begin(), seen.end(), h);
          if (it != seen.end() && *it == h) continue;
          seen.insert(it, h);
          next.push_back(h);
        }
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  return false;
}

FlagGraph::FlagGraph(const Geometry& g) : g_(g), flags_(g.all_flags()) {}

std::optional<std::size_t> FlagGraph::index_of(const Flag& f) const {
  auto it = std::lower_bound(flags_.begin(), flags_.end(), f);
  if (it == flags_.end() || *it != f) return std::nullopt;
  return static_cast<std::size_t>(it - flags_.begin());
}

const std::vector<std::size_t>& FlagGraph::neighbors(std::size_t flag_index, Letter s) {
  std::uint64_t key = flag_index * 6 + static_cast<std::uint64_t>(s);
  auto it = neighbor_cache_.find(key);
  if (it != neighbor_cache_.end()) return it->second;
  std::vector<std::size_t> idxs;
  for (const Flag& h : flag_neighbors(g_, flags_[flag_index], s)) {
    auto idx = index_of(h);
    if (idx) idxs.push_back(*idx);
  }
  return neighbor_cache_.emplace(key, std::move(idxs)).first->second;
}

bool FlagGraph::step_has_splitting(std::size_t from, std::size_t to, Letter s, int bound) {
  if (letter_width(s) == 1) return false;
  std::uint64_t key = (static_cast<std::uint64_t>(from) * flags_.size() + to) * 6 +
                      static_cast<std::uint64_t>(s);
  auto it = splitting_cache_.find(key);
  if (it != splitting_cache_.end()) return it->second;
  bool result = has_splitting(g_, flags_[from], flags_[to], s, bound);
  splitting_cache_.emplace(key, result);
  return result;
}

namespace {

// Whether a letter may be appended to a reduced word depends only on the
// last letter outside the trailing 0/2 run and on which of 0, 2 that run
// contains.  Collapsing the search state to this tail keeps the number of
// states per flag constant.
struct Tail {
  std::uint8_t barrier = 0;  // 0 none, 1 = L1, 2 = L01, 3 = L12, 4 = L02
  bool run0 = false;
  bool run2 = false;

  std::size_t code() const {
    return (static_cast<std::size_t>(barrier) << 2) | (run0 ? 2u : 0u) | (run2 ? 1u : 0u);
  }
  static constexpr std::size_t kCodes = 20;

  Word as_word() const {
    Word w;
    switch (barrier) {
      case 1: w.push_back(Letter::L1); break;
      case 2: w.push_back(Letter::L01); break;
      case 3: w.push_back(Letter::L12); break;
      case 4: w.push_back(Letter::L02); break;
      default: break;
    }
    if (run0) w.push_back(Letter::L0);
    if (run2) w.push_back(Letter::L2);
    return w;
  }

  bool allows(Letter s) const { return reduced_after_append(as_word(), s); }

  Tail append(Letter s) const {
    Tail t = *this;
    if (s == Letter::L0) {
      t.run0 = true;
    } else if (s == Letter::L2) {
      t.run2 = true;
    } else {
      t.run0 = t.run2 = false;
      t.barrier = s == Letter::L1 ? 1 : (s == Letter::L01 ? 2 : (s == Letter::L12 ? 3 : 4));
    }
    return t;
  }
};

struct SearchState {
  std::size_t flag;
  Tail tail;
  int parent;
  Letter via;
};

FlagPath reconstruct(const std::vector<SearchState>& states, std::size_t goal,
                     const std::vector<Flag>& flags) {
  std::vector<Flag> path_flags;
  Word letters;
  int cur = static_cast<int>(goal);
  while (true) {
    path_flags.push_back(flags[states[static_cast<std::size_t>(cur)].flag]);
    if (states[static_cast<std::size_t>(cur)].parent < 0) break;
    letters.push_back(states[static_cast<std::size_t>(cur)].via);
    cur = states[static_cast<std::size_t>(cur)].parent;
  }
  std::reverse(path_flags.begin(), path_flags.end());
  std::reverse(letters.begin(), letters.end());
  return FlagPath{std::move(path_flags), std::move(letters)};
}

bool flag_has_banned_vertex(const Flag& f, const std::vector<VertexId>& banned) {
  return std::binary_search(banned.begin(), banned.end(), f.plane) ||
         std::binary_search(banned.begin(), banned.end(), f.line) ||
         std::binary_search(banned.begin(), banned.end(), f.point);
}

}  // namespace

std::optional<FlagPath> find_reduced_path(FlagGraph& fg, const Flag& from, const Flag& to,
                                          const ReducedPathOptions& opt) {
  auto ifrom = fg.index_of(from);
  auto ito = fg.index_of(to);
  if (!ifrom || !ito) throw InvariantError("find_reduced_path: input is not a flag");
  if (*ifrom == *ito) return FlagPath{{from}, {}};

  // a word containing [0,2] is reduced only when it is the whole word, so a
  // splitting-free [0,2] step is the only reduced path through that letter
  if (levels_differ_exactly(from, to, Letter::L02) &&
      !fg.step_has_splitting(*ifrom, *ito, Letter::L02, opt.splitting_bound)) {
    return FlagPath{{from, to}, {Letter::L02}};
  }

  std::vector<SearchState> states;
  states.push_back(SearchState{*ifrom, Tail{}, -1, Letter::L0});
  std::vector<bool> visited(fg.size() * Tail::kCodes, false);
  visited[*ifrom * Tail::kCodes + Tail{}.code()] = true;
  std::deque<std::size_t> frontier{0};
  std::vector<std::size_t> goals;
  int depth = 0;

  while (!frontier.empty() && depth < opt.max_length && goals.empty()) {
    std::deque<std::size_t> next;
    for (std::size_t si : frontier) {
      const SearchState state = states[si];
      for (Letter s : kPathLetters) {
        if (!state.tail.allows(s)) continue;
        for (std::size_t ni : fg.neighbors(state.flag, s)) {
          Tail t = state.tail.append(s);
          if (visited[ni * Tail::kCodes + t.code()]) continue;
          if (fg.step_has_splitting(state.flag, ni, s, opt.splitting_bound)) continue;
          visited[ni * Tail::kCodes + t.code()] = true;
          if (states.size() >= opt.max_states) {
            throw StageError("find_reduced_path: state budget exceeded");
          }
          states.push_back(SearchState{ni, t, static_cast<int>(si), s});
          if (ni == *ito) {
            goals.push_back(states.size() - 1);
          } else {
            next.push_back(states.size() - 1);
          }
        }
      }
    }
    frontier = std::move(next);
    ++depth;
  }

  if (goals.empty()) return std::nullopt;
  // minimal reduced paths must carry the same word up to permutation
  FlagPath result = reconstruct(states, goals.front(), fg.flags());
  Word expect = canonical_commuting_order(result.word);
  std::size_t checked = 0;
  for (std::size_t gidx : goals) {
    if (++checked > opt.crosscheck_paths) break;
    Word w = canonical_commuting_order(reconstruct(states, gidx, fg.flags()).word);
    if (w != expect) {
      throw InvariantError("distance word between " + to_string(from) + " and " +
                           to_string(to) + " is not unique: " + word_to_string(w) + " vs " +
                           word_to_string(expect));
    }
  }
  return result;
}

bool reduced_path_exists(FlagGraph& fg, std::size_t from, std::size_t to,
                         const std::vector<std::size_t>* allowed_flags,
                         const std::vector<VertexId>* banned_vertices, int splitting_bound) {
  auto allowed = [&](std::size_t idx) {
    if (allowed_flags &&
        !std::binary_search(allowed_flags->begin(), allowed_flags->end(), idx)) {
      return false;
    }
    return !banned_vertices || !flag_has_banned_vertex(fg.flags()[idx], *banned_vertices);
  };
  if (!allowed(from) || !allowed(to)) return false;
  if (from == to) return true;

  const Flag& f = fg.flags()[from];
  const Flag& t = fg.flags()[to];
  if (f.plane != t.plane && f.line != t.line && f.point != t.point &&
      !fg.step_has_splitting(from, to, Letter::L02, splitting_bound)) {
    return true;
  }

  struct State {
    std::size_t flag;
    Tail tail;
  };
  std::vector<bool> visited(fg.size() * Tail::kCodes, false);
  visited[from * Tail::kCodes + Tail{}.code()] = true;
  std::deque<State> queue{State{from, Tail{}}};
  while (!queue.empty()) {
    State state = queue.front();
    queue.pop_front();
    for (Letter s : kPathLetters) {
      if (!state.tail.allows(s)) continue;
      for (std::size_t ni : fg.neighbors(state.flag, s)) {
        if (!allowed(ni)) continue;
        Tail tl = state.tail.append(s);
        if (visited[ni * Tail::kCodes + tl.code()]) continue;
        if (fg.step_has_splitting(state.flag, ni, s, splitting_bound)) continue;
        if (ni == to) return true;
        visited[ni * Tail::kCodes + tl.code()] = true;
        queue.push_back(State{ni, tl});
      }
    }
  }
  return false;
}

std::optional<FlagPath> find_reduced_path(const Geometry& g, const Flag& from, const Flag& to,
                                          const ReducedPathOptions& opt) {
  FlagGraph fg(g);
  return find_reduced_path(fg, from, to, opt);
}

Word distance_word(FlagGraph& fg, const Flag& from, const Flag& to,
                   const ReducedPathOptions& opt) {
  auto path = find_reduced_path(fg, from, to, opt);
  if (!path) {
    throw StageError("flags " + to_string(from) + " and " + to_string(to) +
                     " lie in different components");
  }
  return canonical_commuting_order(path->word);
}

Word distance_word(const Geometry& g, const Flag& from, const Flag& to,
                   const ReducedPathOptions& opt) {
  FlagGraph fg(g);
  return distance_word(fg, from, to, opt);
}

std::vector<Flag> flags_inside_set(const Geometry& g, const std::vector<VertexId>& set) {
  std::vector<VertexId> sorted = set;
  std::sort(sorted.begin(), sorted.end());
  auto in_set = [&](VertexId v) { return std::binary_search(sorted.begin(), sorted.end(), v); };
  std::vector<Flag> out;
  for (VertexId v : sorted) {
    if (!g.has_vertex(v) || g.level(v) != Level::line) continue;
    for (VertexId a : g.up(v)) {
      if (!in_set(a)) continue;
      for (VertexId c : g.down(v)) {
        if (in_set(c)) out.push_back(Flag{a, v, c});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

struct PathEnum {
  FlagGraph& fg;
  std::size_t target;
  std::size_t want_len;
  std::size_t max_paths;
  int splitting_bound;
  std::size_t budget;
  std::size_t visits = 0;

  std::vector<std::size_t> path;
  Word word;
  std::vector<bool> on_path;
  std::vector<FlagPath> found;

  void dfs(std::size_t current) {
    if (++visits > budget) {
      throw StageError("all_minimal_reduced_paths: visit budget exceeded");
    }
    if (word.size() == want_len) {
      if (current == target) {
        FlagPath fp;
        for (std::size_t idx : path) fp.flags.push_back(fg.flags()[idx]);
        fp.word = word;
        found.push_back(std::move(fp));
      }
      return;
    }
    for (Letter s : kPathLetters) {
      if (found.size() >= max_paths) return;
      if (!reduced_after_append(word, s)) continue;
      for (std::size_t ni : fg.neighbors(current, s)) {
        if (on_path[ni]) continue;
        if (fg.step_has_splitting(current, ni, s, splitting_bound)) continue;
        path.push_back(ni);
        word.push_back(s);
        on_path[ni] = true;
        dfs(ni);
        on_path[ni] = false;
        word.pop_back();
        path.pop_back();
      }
    }
  }
};

}  // namespace

std::vector<FlagPath> all_minimal_reduced_paths(FlagGraph& fg, const Flag& from,
                                                const Flag& to, const ReducedPathOptions& opt,
                                                std::size_t max_paths) {
  auto base = find_reduced_path(fg, from, to, opt);
  if (!base) return {};
  if (base->word.empty()) return {*base};
  if (base->word.size() == 1 && base->word[0] == Letter::L02) return {*base};
  PathEnum en{fg,
              *fg.index_of(to),
              base->word.size(),
              max_paths,
              opt.splitting_bound,
              opt.max_states,
              0,
              {*fg.index_of(from)},
              {},
              {},
              {}};
  en.on_path.assign(fg.size(), false);
  en.on_path[*fg.index_of(from)] = true;
  en.dfs(*fg.index_of(from));
  return en.found;
}

Flag base_point(FlagGraph& fg, const Flag& f, const std::vector<VertexId>& nice_set,
                const ReducedPathOptions& opt) {
  std::vector<Flag> inside = flags_inside_set(fg.geometry(), nice_set);
  if (inside.empty()) {
    throw InvariantError("base_point: the set contains no flag");
  }
  std::vector<Word> d_from_f(inside.size());
  for (std::size_t i = 0; i < inside.size(); ++i) {
    d_from_f[i] = distance_word(fg, f, inside[i], opt);
  }
  std::vector<std::vector<Word>> d_inner(inside.size(),
                                         std::vector<Word>(inside.size()));
  for (std::size_t i = 0; i < inside.size(); ++i) {
    for (std::size_t j = 0; j < inside.size(); ++j) {
      if (i != j) d_inner[i][j] = distance_word(fg, inside[i], inside[j], opt);
    }
  }
  for (std::size_t gi = 0; gi < inside.size(); ++gi) {
    bool ok = true;
    for (std::size_t gj = 0; gj < inside.size() && ok; ++gj) {
      Word expect = concat_reduce(d_from_f[gi], d_inner[gi][gj]);
      if (expect != d_from_f[gj]) ok = false;
    }
    if (ok) return inside[gi];
  }
  throw StageError("no base point of " + to_string(f) + " exists in the set at this stage");
}

Flag base_point(const Geometry& g, const Flag& f, const std::vector<VertexId>& nice_set,
                const ReducedPathOptions& opt) {
  FlagGraph fg(g);
  return base_point(fg, f, nice_set, opt);
}

namespace {

struct CycleSearch {
  FlagGraph& fg;
  int max_len;
  int splitting_bound;
  AuditReport& report;
  std::size_t budget;
  std::size_t visits = 0;

  std::vector<std::size_t> path;  // flag indexes, path[0] = start
  Word word;
  std::vector<bool> on_path;

  void dfs(std::size_t current) {
    if (++visits > budget) {
      throw StageError("closed_reduced_path_audit: search budget exceeded");
    }
    const std::size_t start = path.front();
    const int len = static_cast<int>(word.size());
    for (Letter s : kPathLetters) {
      if (!reduced_after_append(word, s)) continue;
      for (std::size_t ni : fg.neighbors(current, s)) {
        if (ni == start && len + 1 >= 2) {
          if (fg.step_has_splitting(current, ni, s, splitting_bound)) continue;
          if (path.size() >= 2 && path[1] > current) continue;  // one direction only
          if (report.violations.size() < 32) {
            Word w = word;
            w.push_back(s);
            std::string flags_str;
            for (std::size_t idx : path) flags_str += to_string(fg.flags()[idx]) + " ";
            flags_str += to_string(fg.flags()[start]);
            report.violations.push_back("closed reduced path length " +
                                        std::to_string(w.size()) + " word " +
                                        word_to_string(w) + " flags " + flags_str);
          }
          continue;
        }
        if (ni <= start || on_path[ni]) continue;
        if (len + 1 >= max_len) continue;  // closing needs one more letter
        if (fg.step_has_splitting(current, ni, s, splitting_bound)) continue;
        path.push_back(ni);
        word.push_back(s);
        on_path[ni] = true;
        dfs(ni);
        on_path[ni] = false;
        word.pop_back();
        path.pop_back();
      }
    }
  }
};

}  // namespace

AuditReport closed_reduced_path_audit(const Geometry& g, int max_len) {
  if (max_len < 2) throw InvariantError("closed_reduced_path_audit needs max_len >= 2");
  AuditReport report;
  report.name = "closed-reduced-paths";
  FlagGraph fg(g);
  report.notes.push_back("flags: " + std::to_string(fg.size()));
  report.notes.push_back("max-length: " + std::to_string(max_len));
  CycleSearch search{fg, max_len, 6, report, 600'000'000, 0, {}, {}, {}};
  search.on_path.assign(fg.size(), false);
  for (std::size_t s0 = 0; s0 < fg.size(); ++s0) {
    search.path.assign(1, s0);
    search.word.clear();
    search.on_path[s0] = true;
    search.dfs(s0);
    search.on_path[s0] = false;
    if (report.violations.size() >= 32) {
      report.notes.push_back("violation list truncated");
      break;
    }
  }
  return report;
}

}  // namespace psp
