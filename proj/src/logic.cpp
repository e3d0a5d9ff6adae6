#include "psp/logic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "psp/errors.hpp"
#include "psp/paths.hpp"

namespace psp {

PartialMap PartialMap::of(const Geometry& g,
                          std::vector<std::pair<VertexId, VertexId>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  std::set<VertexId> sources, targets;
  for (const auto& [s, t] : pairs) {
    if (!sources.insert(s).second) {
      throw InvariantError("map defined twice at " + std::to_string(s));
    }
    if (!targets.insert(t).second) {
      throw InvariantError("map not injective at " + std::to_string(t));
    }
    if (g.level(s) != g.level(t)) {
      throw InvariantError("map does not preserve the level of " + std::to_string(s));
    }
  }
  PartialMap m;
  m.pairs_ = std::move(pairs);
  return m;
}

std::optional<VertexId> PartialMap::image(VertexId v) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), std::make_pair(v, VertexId{0}));
  if (it == pairs_.end() || it->first != v) return std::nullopt;
  return it->second;
}

std::vector<VertexId> PartialMap::domain() const {
  std::vector<VertexId> out;
  for (const auto& [s, t] : pairs_) out.push_back(s);
  return out;
}

std::vector<VertexId> PartialMap::range() const {
  std::vector<VertexId> out;
  for (const auto& [s, t] : pairs_) out.push_back(t);
  std::sort(out.begin(), out.end());
  return out;
}

void ElementaryReport::print(std::ostream& os) const {
  os << "qf-isomorphism: " << (qf_isomorphism ? "pass" : "fail") << "\n";
  os << "colors-preserved: " << (colors_preserved ? "pass" : "fail") << "\n";
  os << "exceptional-pattern: " << (expt_pattern ? "pass" : "fail") << "\n";
  for (const auto& d : details) os << "detail: " << d << "\n";
}

ElementaryReport check_elementary_map(const Geometry& g, const PartialMap& m,
                                      const ClosedSet& X, const ClosedSet& Y) {
  if (X.kind == ClosureKind::plain || Y.kind == ClosureKind::plain) {
    throw InvariantError("check_elementary_map needs closed sets");
  }
  ElementaryReport report;
  if (m.domain() != X.members || m.range() != Y.members) {
    throw InvariantError("map is not a bijection from X onto Y");
  }

  // (1) induced-subgraph isomorphism of the colourless reduct
  report.qf_isomorphism = true;
  for (VertexId u : X.members) {
    for (VertexId v : X.members) {
      if (u >= v) continue;
      bool e1 = g.has_edge(u, v);
      bool e2 = g.has_edge(*m.image(u), *m.image(v));
      if (e1 != e2) {
        report.qf_isomorphism = false;
        report.details.push_back("edge mismatch at (" + std::to_string(u) + "," +
                                 std::to_string(v) + ")");
      }
    }
  }

  // (2) colors of lines and sections
  report.colors_preserved = true;
  if (g.colored()) {
    for (VertexId u : X.members) {
      if (g.level(u) != Level::line) continue;
      if (g.line_color(u) != g.line_color(*m.image(u))) {
        report.colors_preserved = false;
        report.details.push_back("line color changes at " + std::to_string(u));
      }
    }
    for (VertexId a : X.members) {
      if (g.level(a) != Level::plane) continue;
      for (VertexId c : X.members) {
        if (g.level(c) != Level::point) continue;
        auto sc1 = g.section_color(a, c);
        auto sc2 = g.section_color(*m.image(a), *m.image(c));
        if (sc1.has_value() != sc2.has_value() || (sc1 && *sc1 != *sc2)) {
          report.colors_preserved = false;
          report.details.push_back("section color mismatch at (" + std::to_string(a) + "," +
                                   std::to_string(c) + ")");
        }
      }
    }
  }

  // (3) collisions of exceptional points across planes
  report.expt_pattern = true;
  if (g.colored()) {
    std::vector<VertexId> planes, lines;
    for (VertexId v : X.members) {
      if (g.level(v) == Level::plane) planes.push_back(v);
      if (g.level(v) == Level::line) lines.push_back(v);
    }
    for (VertexId b : lines) {
      for (VertexId a : planes) {
        if (!g.has_edge(a, b)) continue;
        for (VertexId a1 : planes) {
          if (a1 <= a || !g.has_edge(a1, b)) continue;
          auto e1 = g.exceptional_point(a, b);
          auto e2 = g.exceptional_point(a1, b);
          auto f1 = g.exceptional_point(*m.image(a), *m.image(b));
          auto f2 = g.exceptional_point(*m.image(a1), *m.image(b));
          bool src_known = e1 && e2;
          bool dst_known = f1 && f2;
          if (src_known && dst_known) {
            if ((*e1 == *e2) != (*f1 == *f2)) {
              report.expt_pattern = false;
              report.details.push_back("exceptional collision differs at planes " +
                                       std::to_string(a) + "," + std::to_string(a1) +
                                       " line " + std::to_string(b));
            }
          } else if (src_known != dst_known) {
            report.expt_pattern = false;
            report.details.push_back("exceptional points undetermined at this stage for line " +
                                     std::to_string(b));
          }
        }
      }
    }
  }
  return report;
}

namespace {

struct IsoSearch {
  const Geometry& g;
  const std::vector<VertexId>& domain;  // ordered: planes, lines, points
  const ClosedSet& A;
  const ClosedSet& B;
  std::map<VertexId, VertexId>& fwd;
  std::map<VertexId, VertexId>& bwd;

  bool consistent(VertexId u, VertexId v) const {
    if (g.level(u) != g.level(v)) return false;
    if (g.colored() && g.level(u) == Level::line && g.line_color(u) != g.line_color(v)) {
      return false;
    }
    for (const auto& [du, dv] : fwd) {
      if (g.has_edge(u, du) != g.has_edge(v, dv)) return false;
      if (!g.colored()) continue;
      VertexId pu = u, cu = du, pv = v, cv = dv;
      if (g.level(u) == Level::point && g.level(du) == Level::plane) {
        std::swap(pu, cu);
        std::swap(pv, cv);
      } else if (!(g.level(u) == Level::plane && g.level(du) == Level::point)) {
        continue;
      }
      auto s1 = g.section_color(pu, cu);
      auto s2 = g.section_color(pv, cv);
      if (s1.has_value() != s2.has_value() || (s1 && *s1 != *s2)) return false;
    }
    return true;
  }

  bool run(std::size_t pos) {
    if (pos == domain.size()) {
      // full candidate assignment: also the exceptional-point pattern must
      // transfer; keep searching otherwise
      std::vector<std::pair<VertexId, VertexId>> pairs(fwd.begin(), fwd.end());
      PartialMap m = PartialMap::of(g, pairs);
      return check_elementary_map(g, m, A, B).passed();
    }
    VertexId u = domain[pos];
    if (auto it = fwd.find(u); it != fwd.end()) return run(pos + 1);
    for (VertexId v : B.members) {
      if (bwd.count(v)) continue;
      if (!consistent(u, v)) continue;
      fwd[u] = v;
      bwd[v] = u;
      if (run(pos + 1)) return true;
      fwd.erase(u);
      bwd.erase(v);
    }
    return false;
  }
};

}  // namespace

bool types_equal(const Geometry& g, const std::vector<VertexId>& u,
                 const std::vector<VertexId>& v) {
  if (u.size() != v.size()) return false;
  // coordinatewise seed must be a well-defined injective map
  std::map<VertexId, VertexId> fwd, bwd;
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto it = fwd.find(u[i]);
    if (it != fwd.end()) {
      if (it->second != v[i]) return false;
      continue;
    }
    if (bwd.count(v[i])) return false;
    if (g.level(u[i]) != g.level(v[i])) return false;
    fwd[u[i]] = v[i];
    bwd[v[i]] = u[i];
  }

  ClosedSet A = closure_for(g, u);
  ClosedSet B = closure_for(g, v);
  if (A.members.size() != B.members.size()) return false;

  // planes first, then lines, then points
  std::vector<VertexId> order;
  for (Level lvl : {Level::plane, Level::line, Level::point}) {
    for (VertexId x : A.members) {
      if (g.level(x) == lvl) order.push_back(x);
    }
  }
  IsoSearch search{g, order, A, B, fwd, bwd};
  // seeded images must lie inside B
  for (const auto& [s, t] : fwd) {
    if (!A.contains(s) || !B.contains(t)) return false;
  }
  return search.run(0);
}

namespace {

std::vector<VertexId> union_of(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  std::vector<VertexId> out = a;
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string ids_to_string(const std::vector<VertexId>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(xs[i]);
  }
  return out.empty() ? "-" : out;
}

}  // namespace

std::string IndependenceCertificate::format() const {
  std::ostringstream os;
  os << "verdict: " << (verdict ? "independent" : "dependent") << "\n";
  for (const auto& base : checked_bases) os << "checked-base: " << base << "\n";
  for (const auto& n : notes) os << "note: " << n << "\n";
  for (const auto& c : ep_collisions) {
    os << "violation: ep-collision point=" << c.point << " planeA=" << c.plane_a
       << " lineA=" << c.line_a << " planeB=" << c.plane_b << " lineB=" << c.line_b << "\n";
  }
  for (const auto& d : word_defects) {
    os << "violation: word-defect from=" << to_string(d.from) << " base=" << to_string(d.base)
       << " to=" << to_string(d.to) << " expected=" << word_to_string(d.expected)
       << " actual=" << word_to_string(d.actual) << "\n";
  }
  return os.str();
}

IndependenceCertificate independent(const Geometry& g, const std::vector<VertexId>& X,
                                    const std::vector<VertexId>& Y, const ClosedSet& Z) {
  if (g.colored() && Z.kind != ClosureKind::acl_closed) {
    throw InvariantError("independence needs a colored-closed base");
  }
  if (!g.colored() && Z.kind == ClosureKind::plain) {
    throw InvariantError("independence needs a closed base");
  }
  IndependenceCertificate cert;
  FlagGraph fg(g);

  ClosedSet fx = fcl(fg, union_of(X, Z.members));
  ClosedSet fy = fcl(fg, union_of(Y, Z.members));
  for (VertexId z : Z.members) {
    if (!fx.contains(z) || !fy.contains(z)) {
      cert.notes.push_back("base not contained in both closures");
      break;
    }
  }
  {
    bool inside = true;
    ClosedSet fx_only = fcl(fg, X);
    ClosedSet fy_only = fcl(fg, Y);
    for (VertexId z : Z.members) {
      if (!fx_only.contains(z) || !fy_only.contains(z)) inside = false;
    }
    if (!inside) cert.notes.push_back("base exceeds fcl(X) and fcl(Y); results relative to it");
  }

  // exceptional points of the two sides may meet only inside the base
  if (g.colored()) {
    std::map<VertexId, std::pair<VertexId, VertexId>> from_x, from_y;
    for (const auto& side : {std::make_pair(&fx, &from_x), std::make_pair(&fy, &from_y)}) {
      for (VertexId b : side.first->members) {
        if (g.level(b) != Level::line) continue;
        for (VertexId a : g.up(b)) {
          if (!side.first->contains(a)) continue;
          auto e = g.exceptional_point(a, b);
          if (e) {
            side.second->emplace(*e, std::make_pair(a, b));
          } else {
            cert.notes.push_back("exceptional point of (" + std::to_string(a) + "," +
                                 std::to_string(b) + ") undetermined at this stage");
          }
        }
      }
    }
    for (const auto& [p, wx] : from_x) {
      auto it = from_y.find(p);
      if (it == from_y.end()) continue;
      if (Z.contains(p)) continue;
      cert.ep_collisions.push_back(
          EpCollision{p, wx.first, wx.second, it->second.first, it->second.second});
    }
  }

  // colourless clause: distances factor through base points over every
  // checked nice superset of the base
  std::vector<std::vector<VertexId>> bases;
  if (Z.members.empty()) {
    std::vector<Flag> near = flags_inside_set(g, fx.members);
    std::vector<Flag> near_y = flags_inside_set(g, fy.members);
    near.insert(near.end(), near_y.begin(), near_y.end());
    std::sort(near.begin(), near.end());
    near.erase(std::unique(near.begin(), near.end()), near.end());
    for (const Flag& f : near) {
      if (bases.size() >= 8) break;
      bases.push_back(union_of({f.plane, f.line}, {f.point}));
    }
  } else {
    bases = minimal_nice_supersets(fg, Z.members);
  }
  for (const auto& base : bases) cert.checked_bases.push_back(ids_to_string(base));

  std::vector<Flag> flags_x = flags_inside_set(g, fx.members);
  std::vector<Flag> flags_y = flags_inside_set(g, fy.members);
  if (flags_x.empty() || flags_y.empty()) {
    cert.notes.push_back("no flag pairs to check on the colourless side");
  }
  for (const auto& base : bases) {
    for (const Flag& f : flags_x) {
      Flag bp = base_point(fg, f, base);
      Word d_fb = distance_word(fg, f, bp);
      for (const Flag& h : flags_y) {
        Word expected = concat_reduce(d_fb, distance_word(fg, bp, h));
        Word actual = distance_word(fg, f, h);
        if (expected != actual) {
          cert.word_defects.push_back(WordDefect{f, bp, h, expected, actual});
        }
      }
    }
  }

  cert.verdict = cert.ep_collisions.empty() && cert.word_defects.empty();
  return cert;
}

AuditReport verify_independence_consequences(const Geometry& g,
                                             const std::vector<VertexId>& X,
                                             const std::vector<VertexId>& Y,
                                             const ClosedSet& Z) {
  AuditReport report;
  report.name = "independence-consequences";
  ClosedSet A = closure_for(g, union_of(X, Z.members));
  ClosedSet B = closure_for(g, union_of(Y, Z.members));
  std::vector<VertexId> common;
  std::set_intersection(A.members.begin(), A.members.end(), B.members.begin(),
                        B.members.end(), std::back_inserter(common));
  auto in_common = [&](VertexId v) {
    return std::binary_search(common.begin(), common.end(), v);
  };
  report.notes.push_back("A: " + ids_to_string(A.members));
  report.notes.push_back("B: " + ids_to_string(B.members));
  report.notes.push_back("common: " + ids_to_string(common));

  // (1) the union is closed
  std::vector<VertexId> both = union_of(A.members, B.members);
  try {
    ClosedSet closed = closure_for(g, both);
    if (closed.members != both) {
      report.violations.push_back("union of closures is not closed");
    }
  } catch (const StageError& e) {
    report.violations.push_back(std::string("union closedness undetermined: ") + e.what());
  }

  // (2) no direct edge between the sides away from the common part
  for (VertexId x : A.members) {
    if (in_common(x)) continue;
    for (VertexId y : B.members) {
      if (in_common(y)) continue;
      if (g.has_edge(x, y)) {
        report.violations.push_back("direct edge " + std::to_string(x) + "-" +
                                    std::to_string(y) + " between the sides");
      }
    }
  }

  // (3) a point of one side in a plane of the other connects inside the
  // common part
  auto check_point_plane = [&](const ClosedSet& P, const ClosedSet& Q, const char* tag) {
    for (VertexId c : P.members) {
      if (g.level(c) != Level::point) continue;
      for (VertexId a : Q.members) {
        if (g.level(a) != Level::plane) continue;
        if (!g.point_in_plane(a, c)) continue;
        bool connected = false;
        for (VertexId b : g.lines_connecting(a, c)) {
          if (in_common(b)) connected = true;
        }
        if (!connected) {
          report.violations.push_back(std::string(tag) + ": point " + std::to_string(c) +
                                      " in plane " + std::to_string(a) +
                                      " without a common-part line");
        }
      }
    }
  };
  check_point_plane(A, B, "A-point in B-plane");
  check_point_plane(B, A, "B-point in A-plane");

  // (4) a point on lines of both sides lies in the common part
  for (VertexId c : g.vertex_ids()) {
    if (g.level(c) != Level::point) continue;
    bool on_a = false, on_b = false;
    for (VertexId b : g.up(c)) {
      if (A.contains(b) && !in_common(b)) on_a = true;
      if (B.contains(b) && !in_common(b)) on_b = true;
    }
    if (on_a && on_b && !in_common(c)) {
      report.violations.push_back("point " + std::to_string(c) +
                                  " on lines of both sides is outside the common part");
    }
  }
  return report;
}

std::vector<VertexId> kernel_finite(const Geometry& g,
                                    const std::vector<std::vector<VertexId>>& seq) {
  if (seq.size() < 4) throw InvariantError("kernel needs a sequence of length at least 4");
  const std::size_t n = seq.size();
  std::map<std::pair<std::size_t, std::size_t>, std::vector<VertexId>> closures;
  auto closure_of = [&](std::size_t lo, std::size_t hi) -> const std::vector<VertexId>& {
    auto key = std::make_pair(lo, hi);
    auto it = closures.find(key);
    if (it != closures.end()) return it->second;
    std::vector<VertexId> xs;
    for (std::size_t i = lo; i < hi; ++i) {
      xs.insert(xs.end(), seq[i].begin(), seq[i].end());
    }
    return closures.emplace(key, closure_for(g, std::move(xs)).members).first->second;
  };
  std::set<VertexId> kernel;
  for (std::size_t b = 1; b < n; ++b) {
    for (std::size_t a = 0; a < b; ++a) {
      for (std::size_t c = b; c < n; ++c) {
        for (std::size_t d = c + 1; d <= n; ++d) {
          const auto& left = closure_of(a, b);
          const auto& right = closure_of(c, d);
          std::vector<VertexId> common;
          std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                                std::back_inserter(common));
          kernel.insert(common.begin(), common.end());
        }
      }
    }
  }
  return std::vector<VertexId>(kernel.begin(), kernel.end());
}

bool pf_witness_check(const Geometry& g, const ClosedSet& C, const std::vector<VertexId>& a,
                      const std::vector<VertexId>& a2, const std::vector<VertexId>& b) {
  if (g.colored() && C.kind != ClosureKind::acl_closed) {
    throw InvariantError("pf witness check needs a colored-closed base");
  }
  // strong types over a closed base: types of the base-augmented tuples
  std::vector<VertexId> au = a, a2u = a2;
  au.insert(au.end(), C.members.begin(), C.members.end());
  a2u.insert(a2u.end(), C.members.begin(), C.members.end());
  if (!types_equal(g, au, a2u)) return false;
  return independent(g, a, b, C).verdict;
}

bool eval_pattern_predicate(const Geometry& g, const PatternMatrix& mat,
                            const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  switch (mat.predicate) {
    case PatternPredicate::section_color: {
      if (a.size() != 1 || b.size() != 1) {
        throw InvariantError("section-color predicate wants (point) and (plane) entries");
      }
      auto sc = g.section_color(b[0], a[0]);
      return sc && *sc == mat.color;
    }
    case PatternPredicate::is_exceptional: {
      if (a.size() != 1 || b.size() != 2) {
        throw InvariantError("is-exceptional predicate wants (point) and (plane,line) entries");
      }
      auto e = g.exceptional_point(b[0], b[1]);
      return e && *e == a[0];
    }
    case PatternPredicate::incident: {
      if (a.size() != 1 || b.size() != 1) {
        throw InvariantError("incident predicate wants single-vertex entries");
      }
      return g.has_edge(a[0], b[0]);
    }
  }
  return false;
}

AuditReport ms_pattern_check(const Geometry& g, const PatternMatrix& mat) {
  AuditReport report;
  report.name = "ms-pattern";
  if (mat.entries.size() != mat.rows) throw InvariantError("matrix rows mismatch");
  for (const auto& row : mat.entries) {
    if (row.size() != mat.cols) throw InvariantError("matrix is not rectangular");
  }

  for (std::size_t i = 0; i < mat.rows; ++i) {
    for (std::size_t j = 0; j < mat.cols; ++j) {
      for (std::size_t l = 0; l < mat.cols; ++l) {
        bool holds = eval_pattern_predicate(g, mat, mat.entries[i][j].first,
                                            mat.entries[i][l].second);
        if (holds != (j == l)) {
          report.violations.push_back("predicate " + std::string(holds ? "holds" : "fails") +
                                      " at row " + std::to_string(i) + " cell (" +
                                      std::to_string(j) + "," + std::to_string(l) + ")");
        }
      }
    }
  }

  for (std::size_t i = 0; i < mat.rows; ++i) {
    for (std::size_t k = i + 1; k < mat.rows; ++k) {
      for (std::size_t j = 0; j < mat.cols; ++j) {
        for (std::size_t l = j + 1; l < mat.cols; ++l) {
          std::vector<VertexId> t1 = mat.entries[i][j].first;
          t1.insert(t1.end(), mat.entries[i][j].second.begin(), mat.entries[i][j].second.end());
          std::vector<VertexId> t2 = mat.entries[i][j].first;
          t2.insert(t2.end(), mat.entries[k][l].second.begin(), mat.entries[k][l].second.end());
          if (!types_equal(g, t1, t2)) {
            report.violations.push_back("type mismatch between (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") and cross pair (" +
                                        std::to_string(k) + "," + std::to_string(l) + ")");
          }
        }
      }
    }
  }
  return report;
}

bool pf_pattern_check(
    const Geometry& g,
    const std::vector<std::pair<std::vector<VertexId>, std::vector<VertexId>>>& pairs,
    const std::pair<std::vector<VertexId>, std::vector<VertexId>>& p_rep,
    const std::pair<std::vector<VertexId>, std::vector<VertexId>>& q_rep) {
  auto join = [](const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
    std::vector<VertexId> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  };
  std::vector<VertexId> p_tuple = join(p_rep.first, p_rep.second);
  std::vector<VertexId> q_tuple = join(q_rep.first, q_rep.second);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      if (!types_equal(g, join(pairs[i].first, pairs[j].second), p_tuple)) return false;
    }
    if (!types_equal(g, join(pairs[i].first, pairs[i].second), q_tuple)) return false;
  }
  return true;
}

}  // namespace psp
