#include "psp/closure.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "psp/errors.hpp"

namespace psp {

bool ClosedSet::contains(VertexId v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

ClosedSet ClosedSet::of(std::vector<VertexId> ids, ClosureKind kind) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ClosedSet{std::move(ids), kind, {}};
}

namespace {

std::vector<VertexId> sorted_unique(std::vector<VertexId> xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

// Reduced path between two flags with every flag of the path inside the
// allowed set; splittings are judged against the ambient geometry.
bool reduced_path_within(FlagGraph& fg, std::size_t from, std::size_t to,
                         const std::vector<std::size_t>& allowed) {
  return reduced_path_exists(fg, from, to, &allowed, nullptr);
}

std::vector<std::size_t> internal_flag_indexes(FlagGraph& fg, const std::vector<VertexId>& set) {
  std::vector<std::size_t> idxs;
  for (const Flag& f : flags_inside_set(fg.geometry(), set)) {
    auto idx = fg.index_of(f);
    if (idx) idxs.push_back(*idx);
  }
  std::sort(idxs.begin(), idxs.end());
  return idxs;
}

bool set_is_nice(FlagGraph& fg, const std::vector<VertexId>& sorted_set) {
  const Geometry& g = fg.geometry();
  std::vector<std::size_t> internal = internal_flag_indexes(fg, sorted_set);
  for (VertexId v : sorted_set) {
    bool covered = false;
    for (std::size_t idx : internal) {
      const Flag& f = fg.flags()[idx];
      if (f.plane == v || f.line == v || f.point == v) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  (void)g;
  for (std::size_t i = 0; i < internal.size(); ++i) {
    for (std::size_t j = i + 1; j < internal.size(); ++j) {
      if (!reduced_path_within(fg, internal[i], internal[j], internal)) return false;
    }
  }
  return true;
}

}  // namespace

bool is_nice(FlagGraph& fg, const std::vector<VertexId>& X) {
  if (X.empty()) throw InvariantError("is_nice: empty set");
  std::vector<VertexId> sorted = sorted_unique(X);
  for (VertexId v : sorted) (void)fg.geometry().level(v);  // id validation
  return set_is_nice(fg, sorted);
}

bool is_nice(const Geometry& g, const std::vector<VertexId>& X) {
  FlagGraph fg(g);
  return is_nice(fg, X);
}

namespace {

void intersect_into(std::vector<VertexId>& acc, const std::set<VertexId>& s, bool& first) {
  if (first) {
    acc.assign(s.begin(), s.end());
    first = false;
    return;
  }
  std::vector<VertexId> merged;
  std::set_intersection(acc.begin(), acc.end(), s.begin(), s.end(), std::back_inserter(merged));
  acc = std::move(merged);
}

// Vertices common to every reduced path between two flags.  Every nice
// superset containing both flags contains one of these paths, so the
// shared vertices are pinned.  Empty when the flags are disconnected.
// A vertex of one witness path is shared iff no reduced path avoids it;
// reduced paths between a fixed pair all have the same length, so the
// avoidance search needs no length bound.
std::set<VertexId> shared_reduced_path_vertices(FlagGraph& fg, const Flag& from,
                                                const Flag& to) {
  std::set<VertexId> shared;
  auto witness = find_reduced_path(fg, from, to);
  if (!witness) return shared;
  std::set<VertexId> candidates;
  for (const Flag& f : witness->flags) {
    candidates.insert(f.plane);
    candidates.insert(f.line);
    candidates.insert(f.point);
  }
  std::set<VertexId> endpoints{from.plane, from.line, from.point,
                               to.plane,   to.line,   to.point};
  auto ifrom = fg.index_of(from);
  auto ito = fg.index_of(to);
  for (VertexId v : candidates) {
    if (endpoints.count(v)) {
      shared.insert(v);
      continue;
    }
    std::vector<VertexId> banned{v};
    if (!reduced_path_exists(fg, *ifrom, *ito, nullptr, &banned)) shared.insert(v);
  }
  return shared;
}

class SharedPathMemo {
 public:
  explicit SharedPathMemo(FlagGraph& fg) : fg_(fg) {}

  const std::set<VertexId>& get(const Flag& from, const Flag& to) {
    Flag lo = std::min(from, to);
    Flag hi = std::max(from, to);
    auto key = std::make_pair(lo, hi);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    return memo_.emplace(key, shared_reduced_path_vertices(fg_, lo, hi)).first->second;
  }

 private:
  FlagGraph& fg_;
  std::map<std::pair<Flag, Flag>, std::set<VertexId>> memo_;
};

}  // namespace

ClosedSet fcl(FlagGraph& fg, std::vector<VertexId> X) {
  const Geometry& g = fg.geometry();
  std::set<VertexId> C(X.begin(), X.end());
  for (VertexId v : C) (void)g.level(v);  // id validation
  if (C.empty()) return ClosedSet{{}, ClosureKind::fcl_closed, {}};

  SharedPathMemo shared(fg);
  bool changed = true;
  while (changed) {
    changed = false;
    auto add = [&](VertexId v) {
      if (C.insert(v).second) changed = true;
    };
    std::vector<VertexId> members(C.begin(), C.end());

    // incidences pinned by two members
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        VertexId x = members[i], y = members[j];
        if (g.level(x) != g.level(y)) continue;
        switch (g.level(x)) {
          case Level::point: {
            std::vector<VertexId> common;
            std::set_intersection(g.up(x).begin(), g.up(x).end(), g.up(y).begin(),
                                  g.up(y).end(), std::back_inserter(common));
            for (VertexId b : common) add(b);
            break;
          }
          case Level::line: {
            std::vector<VertexId> common;
            std::set_intersection(g.down(x).begin(), g.down(x).end(), g.down(y).begin(),
                                  g.down(y).end(), std::back_inserter(common));
            for (VertexId c : common) add(c);
            common.clear();
            std::set_intersection(g.up(x).begin(), g.up(x).end(), g.up(y).begin(),
                                  g.up(y).end(), std::back_inserter(common));
            for (VertexId a : common) add(a);
            break;
          }
          case Level::plane: {
            std::vector<VertexId> common;
            std::set_intersection(g.down(x).begin(), g.down(x).end(), g.down(y).begin(),
                                  g.down(y).end(), std::back_inserter(common));
            for (VertexId b : common) add(b);
            if (common.empty()) {
              // plane intersection without a shared line: a pinned point
              for (VertexId b : g.down(x)) {
                for (VertexId c : g.down(b)) {
                  if (g.point_in_plane(y, c)) add(c);
                }
              }
            }
            break;
          }
        }
      }
    }

    // the common part of every flag through a member
    for (VertexId v : members) {
      auto flags = g.flags_containing(v);
      if (flags.empty()) continue;
      bool first = true;
      std::vector<VertexId> acc;
      for (const Flag& f : flags) {
        std::set<VertexId> verts{f.plane, f.line, f.point};
        intersect_into(acc, verts, first);
      }
      for (VertexId w : acc) add(w);
    }

    std::vector<VertexId> member_vec(C.begin(), C.end());
    std::vector<std::size_t> internal = internal_flag_indexes(fg, member_vec);

    // what every reduced path between member flags shares
    for (std::size_t i = 0; i < internal.size(); ++i) {
      for (std::size_t j = i + 1; j < internal.size(); ++j) {
        for (VertexId v : shared.get(fg.flags()[internal[i]], fg.flags()[internal[j]])) {
          add(v);
        }
      }
    }

    // members in no internal flag: whatever every completion route shares
    std::vector<VertexId> uncovered;
    for (VertexId v : member_vec) {
      bool covered = false;
      for (std::size_t idx : internal) {
        const Flag& f = fg.flags()[idx];
        if (f.plane == v || f.line == v || f.point == v) covered = true;
      }
      if (!covered) uncovered.push_back(v);
    }
    for (VertexId v : uncovered) {
      auto candidates = g.flags_containing(v);
      if (candidates.empty()) continue;
      for (std::size_t fidx : internal) {
        bool first = true;
        std::vector<VertexId> acc;
        for (const Flag& h : candidates) {
          intersect_into(acc, shared.get(fg.flags()[fidx], h), first);
          if (acc.empty()) break;
        }
        for (VertexId w : acc) add(w);
      }
      for (VertexId w : uncovered) {
        if (w <= v) continue;
        auto candidates_w = g.flags_containing(w);
        if (candidates_w.empty()) continue;
        bool first = true;
        std::vector<VertexId> acc;
        for (const Flag& h : candidates) {
          for (const Flag& k : candidates_w) {
            intersect_into(acc, shared.get(h, k), first);
            if (acc.empty()) break;
          }
          if (acc.empty()) break;
        }
        for (VertexId u : acc) add(u);
      }
    }
  }
  return ClosedSet{std::vector<VertexId>(C.begin(), C.end()), ClosureKind::fcl_closed, {}};
}

ClosedSet fcl(const Geometry& g, std::vector<VertexId> X) {
  FlagGraph fg(g);
  return fcl(fg, std::move(X));
}

namespace {

struct NiceIntersection {
  FlagGraph& fg;
  const NiceSearchLimits& limits;
  std::set<std::vector<VertexId>> visited;
  std::vector<VertexId> result;
  bool any_nice = false;
  std::size_t states = 0;

  void run(std::vector<VertexId> C) {
    if (!visited.insert(C).second) return;
    if (++states > limits.max_states) {
      throw StageError("nice-superset enumeration budget exceeded");
    }
    if (any_nice && std::includes(C.begin(), C.end(), result.begin(), result.end())) {
      return;  // a superset cannot shrink the intersection further
    }
    const Geometry& g = fg.geometry();
    std::vector<std::size_t> internal = internal_flag_indexes(fg, C);

    for (VertexId v : C) {
      bool covered = false;
      for (std::size_t idx : internal) {
        const Flag& f = fg.flags()[idx];
        if (f.plane == v || f.line == v || f.point == v) covered = true;
      }
      if (covered) continue;
      auto candidates = g.flags_containing(v);
      for (const Flag& h : candidates) {
        std::vector<VertexId> next = C;
        next.push_back(h.plane);
        next.push_back(h.line);
        next.push_back(h.point);
        run(sorted_unique(std::move(next)));
      }
      return;  // branched on the first uncovered vertex
    }

    for (std::size_t i = 0; i < internal.size(); ++i) {
      for (std::size_t j = i + 1; j < internal.size(); ++j) {
        if (reduced_path_within(fg, internal[i], internal[j], internal)) continue;
        auto paths = all_minimal_reduced_paths(fg, fg.flags()[internal[i]],
                                               fg.flags()[internal[j]], {}, limits.max_paths);
        for (const FlagPath& p : paths) {
          std::vector<VertexId> next = C;
          for (const Flag& f : p.flags) {
            next.push_back(f.plane);
            next.push_back(f.line);
            next.push_back(f.point);
          }
          run(sorted_unique(std::move(next)));
        }
        return;  // branched on the first unconnected pair
      }
    }

    // C is nice
    if (!any_nice) {
      result = C;
      any_nice = true;
    } else {
      std::vector<VertexId> merged;
      std::set_intersection(result.begin(), result.end(), C.begin(), C.end(),
                            std::back_inserter(merged));
      result = std::move(merged);
    }
  }
};

}  // namespace

ClosedSet fcl_by_nice_intersection(FlagGraph& fg, const std::vector<VertexId>& X,
                                   const NiceSearchLimits& limits) {
  std::vector<VertexId> start = sorted_unique(X);
  for (VertexId v : start) (void)fg.geometry().level(v);
  if (start.empty()) return ClosedSet{{}, ClosureKind::fcl_closed, {}};
  NiceIntersection search{fg, limits, {}, {}, false, 0};
  search.run(start);
  if (!search.any_nice) {
    throw StageError("no nice superset exists inside this stage");
  }
  return ClosedSet{search.result, ClosureKind::fcl_closed, {}};
}

ClosedSet fcl_by_nice_intersection(const Geometry& g, const std::vector<VertexId>& X,
                                   const NiceSearchLimits& limits) {
  FlagGraph fg(g);
  return fcl_by_nice_intersection(fg, X, limits);
}

namespace {

struct NiceCollector {
  FlagGraph& fg;
  const NiceSearchLimits& limits;
  std::size_t max_sets;
  std::set<std::vector<VertexId>> visited;
  std::vector<std::vector<VertexId>> found;
  std::size_t states = 0;

  void run(std::vector<VertexId> C) {
    if (found.size() >= max_sets) return;
    if (!visited.insert(C).second) return;
    if (++states > limits.max_states) {
      throw StageError("nice-superset enumeration budget exceeded");
    }
    const Geometry& g = fg.geometry();
    std::vector<std::size_t> internal = internal_flag_indexes(fg, C);
    for (VertexId v : C) {
      bool covered = false;
      for (std::size_t idx : internal) {
        const Flag& f = fg.flags()[idx];
        if (f.plane == v || f.line == v || f.point == v) covered = true;
      }
      if (covered) continue;
      for (const Flag& h : g.flags_containing(v)) {
        std::vector<VertexId> next = C;
        next.push_back(h.plane);
        next.push_back(h.line);
        next.push_back(h.point);
        run(sorted_unique(std::move(next)));
      }
      return;
    }
    for (std::size_t i = 0; i < internal.size(); ++i) {
      for (std::size_t j = i + 1; j < internal.size(); ++j) {
        if (reduced_path_within(fg, internal[i], internal[j], internal)) continue;
        for (const FlagPath& p : all_minimal_reduced_paths(fg, fg.flags()[internal[i]],
                                                           fg.flags()[internal[j]], {},
                                                           limits.max_paths)) {
          std::vector<VertexId> next = C;
          for (const Flag& f : p.flags) {
            next.push_back(f.plane);
            next.push_back(f.line);
            next.push_back(f.point);
          }
          run(sorted_unique(std::move(next)));
        }
        return;
      }
    }
    found.push_back(C);
  }
};

}  // namespace

std::vector<std::vector<VertexId>> minimal_nice_supersets(FlagGraph& fg,
                                                          const std::vector<VertexId>& X,
                                                          const NiceSearchLimits& limits,
                                                          std::size_t max_sets) {
  std::vector<VertexId> start = sorted_unique(X);
  for (VertexId v : start) (void)fg.geometry().level(v);
  NiceCollector collector{fg, limits, max_sets, {}, {}, 0};
  if (start.empty()) {
    // every single flag is a minimal nice set; take the first few
    for (const Flag& f : fg.flags()) {
      if (collector.found.size() >= max_sets) break;
      collector.found.push_back(sorted_unique({f.plane, f.line, f.point}));
    }
    return collector.found;
  }
  collector.run(start);
  // keep only inclusion-minimal sets
  std::vector<std::vector<VertexId>> minimal;
  for (const auto& a : collector.found) {
    bool keep = true;
    for (const auto& b : collector.found) {
      if (&a != &b && a != b && std::includes(a.begin(), a.end(), b.begin(), b.end())) {
        keep = false;
        break;
      }
    }
    if (keep) minimal.push_back(a);
  }
  std::sort(minimal.begin(), minimal.end());
  minimal.erase(std::unique(minimal.begin(), minimal.end()), minimal.end());
  return minimal;
}

bool fcl_is_stage_stable(const Geometry& g, const std::vector<VertexId>& X) {
  ClosedSet base = fcl(g, X);
  Geometry grown = g;
  std::vector<Flag> touch;
  for (VertexId v : base.members) {
    auto fl = grown.flags_containing(v);
    if (!fl.empty()) touch.push_back(fl.front());
  }
  std::sort(touch.begin(), touch.end());
  touch.erase(std::unique(touch.begin(), touch.end()), touch.end());
  if (touch.size() > 40) touch.resize(40);
  for (const Flag& f : touch) {
    grown.apply_operation(f, Letter::L0);
    grown.apply_operation(f, Letter::L1);
    grown.apply_operation(f, Letter::L2);
  }
  ClosedSet again = fcl(grown, X);
  return again.members == base.members;
}

EpScan scan_exceptional_points(const Geometry& g, const std::vector<VertexId>& X) {
  if (!g.colored()) throw InvariantError("exceptional points need a colored geometry");
  EpScan scan;
  std::vector<VertexId> sorted = sorted_unique(X);
  for (VertexId b : sorted) {
    if (!g.has_vertex(b) || g.level(b) != Level::line) continue;
    for (VertexId a : g.up(b)) {
      if (!std::binary_search(sorted.begin(), sorted.end(), a)) continue;
      auto e = g.exceptional_point(a, b);
      if (e) {
        scan.points.push_back(*e);
      } else {
        scan.missing.emplace_back(a, b);
      }
    }
  }
  scan.points = sorted_unique(std::move(scan.points));
  return scan;
}

std::vector<VertexId> ep_set(const Geometry& g, const std::vector<VertexId>& X) {
  EpScan scan = scan_exceptional_points(g, X);
  if (!scan.missing.empty()) {
    std::string msg = "missing exceptional points at this stage:";
    for (auto [a, b] : scan.missing) {
      msg += " (" + std::to_string(a) + "," + std::to_string(b) + ")";
    }
    throw StageError(msg);
  }
  return scan.points;
}

ClosedSet acl_colored(const Geometry& g, std::vector<VertexId> X) {
  if (!g.colored()) throw InvariantError("acl_colored needs a colored geometry");
  FlagGraph fg(g);
  ClosedSet base = fcl(fg, std::move(X));
  std::vector<VertexId> eps = ep_set(g, base.members);
  std::vector<VertexId> all = base.members;
  all.insert(all.end(), eps.begin(), eps.end());
  all = sorted_unique(std::move(all));

  // the result must be closed again: colourlessly and under exceptional points
  ClosedSet recheck = fcl(fg, all);
  if (recheck.members != all) {
    throw InvariantError("closure not idempotent: adding exceptional points grew fcl");
  }
  std::vector<VertexId> eps2 = ep_set(g, all);
  for (VertexId v : eps2) {
    if (!std::binary_search(all.begin(), all.end(), v)) {
      throw InvariantError("closure not closed under exceptional points");
    }
  }
  std::vector<VertexId> cached;
  for (VertexId v : eps) {
    if (!base.contains(v)) cached.push_back(v);
  }
  return ClosedSet{std::move(all), ClosureKind::acl_closed, std::move(cached)};
}

ClosedSet closure_for(const Geometry& g, std::vector<VertexId> X) {
  if (g.colored()) return acl_colored(g, std::move(X));
  return fcl(g, std::move(X));
}

int defect(const Geometry& g, const std::vector<VertexId>& W) {
  ClosedSet base = fcl(g, W);
  ClosedSet full = acl_colored(g, W);
  return static_cast<int>(full.members.size() - base.members.size());
}

}  // namespace psp
