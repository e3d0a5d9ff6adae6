#include "psp/geometry.hpp"

#include <algorithm>
#include <sstream>

#include "psp/errors.hpp"

namespace psp {

std::string to_string(const Flag& f) {
  std::ostringstream os;
  os << f.plane << "-" << f.line << "-" << f.point;
  return os.str();
}

ColorSpec ColorSpec::cyclic(int k) {
  if (k < 2) throw InvariantError("color spec needs k >= 2");
  ColorSpec spec;
  spec.k = k;
  spec.shift.resize(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) spec.shift[static_cast<std::size_t>(i)] = (i + 1) % k;
  return spec;
}

ColorSpec ColorSpec::with_shift(std::vector<int> pi) {
  ColorSpec spec;
  spec.k = static_cast<int>(pi.size());
  if (spec.k < 2) throw InvariantError("color spec needs k >= 2");
  for (int i = 0; i < spec.k; ++i) {
    int v = pi[static_cast<std::size_t>(i)];
    if (v < 0 || v >= spec.k) {
      throw InvariantError("shift value " + std::to_string(v) + " out of range");
    }
    if (v == i) {
      throw InvariantError("shift has a fixed point at " + std::to_string(i));
    }
  }
  spec.shift = std::move(pi);
  return spec;
}

bool ColorSpec::is_cyclic() const {
  for (int i = 0; i < k; ++i) {
    if (shift[static_cast<std::size_t>(i)] != (i + 1) % k) return false;
  }
  return true;
}

int ColorSpec::successor(int i) const {
  if (i < 0 || i >= k) throw InvariantError("color " + std::to_string(i) + " out of range");
  return shift[static_cast<std::size_t>(i)];
}

std::vector<int> ColorSpec::predecessors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < k; ++j) {
    if (shift[static_cast<std::size_t>(j)] == i) out.push_back(j);
  }
  return out;
}

void AuditReport::print(std::ostream& os) const {
  os << "audit: " << name << "\n";
  os << "status: " << (passed() ? "pass" : "fail") << "\n";
  for (const auto& n : notes) os << "note: " << n << "\n";
  for (const auto& v : violations) os << "violation: " << v << "\n";
}

std::size_t Geometry::index_of(VertexId v) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it == ids_.end() || *it != v) {
    throw InvariantError("unknown vertex id " + std::to_string(v));
  }
  return static_cast<std::size_t>(it - ids_.begin());
}

bool Geometry::has_vertex(VertexId v) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  return it != ids_.end() && *it == v;
}

VertexId Geometry::add_vertex(Level level) {
  VertexId id = ids_.empty() ? 0 : ids_.back() + 1;
  return add_vertex_with_id(id, level);
}

VertexId Geometry::add_vertex_with_id(VertexId id, Level level) {
  if (!ids_.empty() && id <= ids_.back()) {
    throw InvariantError("vertex ids must be added in ascending order (got " +
                         std::to_string(id) + ")");
  }
  ids_.push_back(id);
  levels_.push_back(level);
  up_.emplace_back();
  down_.emplace_back();
  return id;
}

Level Geometry::level(VertexId v) const { return levels_[index_of(v)]; }

std::size_t Geometry::vertex_rank(VertexId v) const { return index_of(v); }

namespace {
void insert_sorted(std::vector<VertexId>& xs, VertexId v) {
  auto it = std::lower_bound(xs.begin(), xs.end(), v);
  if (it != xs.end() && *it == v) {
    throw InvariantError("duplicate edge at vertex " + std::to_string(v));
  }
  xs.insert(it, v);
}
}  // namespace

void Geometry::add_edge(VertexId a, VertexId b) {
  int la = level_index(level(a));
  int lb = level_index(level(b));
  if (la == lb || std::abs(la - lb) != 1) {
    throw InvariantError("edge " + std::to_string(a) + "-" + std::to_string(b) +
                         " does not join consecutive levels");
  }
  add_edge_unchecked(a, b);
}

void Geometry::add_edge_unchecked(VertexId a, VertexId b) {
  if (a == b) throw InvariantError("self loop at vertex " + std::to_string(a));
  std::size_t ia = index_of(a);
  std::size_t ib = index_of(b);
  int la = level_index(levels_[ia]);
  int lb = level_index(levels_[ib]);
  // store in up/down by relative level; ill-leveled edges (from hand-made
  // files) go by id order so validate_geometry can still see them
  if (la < lb) {
    insert_sorted(up_[ia], b);
    insert_sorted(down_[ib], a);
  } else if (lb < la) {
    insert_sorted(up_[ib], a);
    insert_sorted(down_[ia], b);
  } else {
    insert_sorted(up_[ia], b);
    insert_sorted(down_[ib], a);
  }
  ++edge_count_;
}

bool Geometry::has_edge(VertexId a, VertexId b) const {
  std::size_t ia = index_of(a);
  const auto& u = up_[ia];
  const auto& d = down_[ia];
  return std::binary_search(u.begin(), u.end(), b) ||
         std::binary_search(d.begin(), d.end(), b);
}

const std::vector<VertexId>& Geometry::up(VertexId v) const { return up_[index_of(v)]; }
const std::vector<VertexId>& Geometry::down(VertexId v) const { return down_[index_of(v)]; }

std::vector<VertexId> Geometry::vertices_at_level(Level l) const {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (levels_[i] == l) out.push_back(ids_[i]);
  }
  return out;
}

bool Geometry::is_flag(const Flag& f) const {
  if (!has_vertex(f.plane) || !has_vertex(f.line) || !has_vertex(f.point)) return false;
  if (level(f.plane) != Level::plane || level(f.line) != Level::line ||
      level(f.point) != Level::point) {
    return false;
  }
  return has_edge(f.plane, f.line) && has_edge(f.line, f.point);
}

std::vector<Flag> Geometry::all_flags() const {
  std::vector<Flag> out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (levels_[i] != Level::line) continue;
    for (VertexId a : up_[i]) {
      for (VertexId c : down_[i]) {
        out.push_back(Flag{a, ids_[i], c});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Flag> Geometry::flags_containing(VertexId v) const {
  std::vector<Flag> out;
  switch (level(v)) {
    case Level::line:
      for (VertexId a : up(v))
        for (VertexId c : down(v)) out.push_back(Flag{a, v, c});
      break;
    case Level::point:
      for (VertexId b : up(v))
        for (VertexId a : up(b)) out.push_back(Flag{a, b, v});
      break;
    case Level::plane:
      for (VertexId b : down(v))
        for (VertexId c : down(b)) out.push_back(Flag{v, b, c});
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Geometry::point_in_plane(VertexId a, VertexId c) const {
  for (VertexId b : up(c)) {
    if (has_edge(a, b)) return true;
  }
  return false;
}

std::vector<VertexId> Geometry::lines_connecting(VertexId a, VertexId c) const {
  std::vector<VertexId> out;
  for (VertexId b : up(c)) {
    if (has_edge(a, b)) out.push_back(b);
  }
  return out;
}

void Geometry::set_color_spec(ColorSpec spec) {
  if (spec_.has_value()) throw InvariantError("color spec already set");
  spec_ = std::move(spec);
}

void Geometry::set_line_color(VertexId line, int color) {
  if (!spec_) throw InvariantError("geometry is uncolored");
  if (color < 0 || color >= spec_->k) {
    throw InvariantError("line color " + std::to_string(color) + " out of range");
  }
  line_color_[line] = color;
}

void Geometry::set_section_color(VertexId plane, VertexId point, int color) {
  if (!spec_) throw InvariantError("geometry is uncolored");
  if (color < 0 || color >= spec_->k) {
    throw InvariantError("section color " + std::to_string(color) + " out of range");
  }
  section_color_[{plane, point}] = color;
}

int Geometry::line_color(VertexId line) const {
  auto it = line_color_.find(line);
  if (it == line_color_.end()) {
    throw InvariantError("line " + std::to_string(line) + " has no color");
  }
  return it->second;
}

std::optional<int> Geometry::section_color(VertexId plane, VertexId point) const {
  auto it = section_color_.find({plane, point});
  if (it == section_color_.end()) return std::nullopt;
  return it->second;
}

std::optional<VertexId> Geometry::exceptional_point(VertexId a, VertexId b) const {
  if (!spec_) throw InvariantError("exceptional_point on uncolored geometry");
  if (level(a) != Level::plane || level(b) != Level::line || !has_edge(a, b)) {
    throw InvariantError("line " + std::to_string(b) + " does not lie in plane " +
                         std::to_string(a));
  }
  int want = spec_->successor(line_color(b));
  std::optional<VertexId> found;
  for (VertexId c : down(b)) {
    auto sc = section_color(a, c);
    if (sc && *sc == want) {
      if (found) {
        throw InvariantError("two exceptional candidates on line " + std::to_string(b) +
                             " in plane " + std::to_string(a));
      }
      found = c;
    }
  }
  return found;
}

Flag Geometry::apply_operation(const Flag& f, Letter s, const ColorChoice& choice) {
  if (!is_flag(f)) {
    throw InvariantError("apply_operation: " + to_string(f) + " is not a flag");
  }
  if (colored() && letter_width(s) != 1) {
    throw InvariantError("colored geometries support only operations [0], [1], [2]");
  }

  Flag g = f;
  for (int lvl = 0; lvl <= 2; ++lvl) {
    if (letter_has_level(s, lvl)) {
      g.set_level(lvl, add_vertex(static_cast<Level>(lvl)));
    }
  }
  // edges between two untouched levels already exist
  if (letter_has_level(s, 1) || letter_has_level(s, 2)) add_edge(g.plane, g.line);
  if (letter_has_level(s, 1) || letter_has_level(s, 0)) add_edge(g.line, g.point);

  if (!colored()) return g;

  const ColorSpec& spec = *spec_;
  if (s == Letter::L0) {
    // New point on f.line; in every plane over the line it is ordinary if
    // that plane already has an exceptional point, else it becomes one.
    int i = line_color(f.line);
    for (VertexId a : up(f.line)) {
      bool has_expt = exceptional_point(a, f.line).has_value();
      set_section_color(a, g.point, has_expt ? i : spec.successor(i));
    }
  } else if (s == Letter::L1) {
    // New line joining f.plane and f.point, colored off the section color.
    auto sc = section_color(f.plane, f.point);
    if (!sc) throw InvariantError("section (" + std::to_string(f.plane) + "," +
                                  std::to_string(f.point) + ") has no color");
    if (choice.line == LineColorChoice::same) {
      set_line_color(g.line, *sc);
    } else {
      auto preds = spec.predecessors(*sc);
      if (preds.empty()) {
        throw InvariantError("no color shifts to " + std::to_string(*sc) +
                             "; predecessor choice impossible");
      }
      int color = preds.front();
      if (choice.line_pred_color) {
        color = *choice.line_pred_color;
        if (std::find(preds.begin(), preds.end(), color) == preds.end()) {
          throw InvariantError("color " + std::to_string(color) + " does not shift to " +
                               std::to_string(*sc));
        }
      }
      set_line_color(g.line, color);
    }
  } else if (s == Letter::L2) {
    // New plane over f.line; every point of the line gets a section color,
    // at most one of them the exceptional one.
    int i = line_color(f.line);
    if (choice.exceptional) {
      if (level(*choice.exceptional) != Level::point ||
          !has_edge(f.line, *choice.exceptional)) {
        throw InvariantError("exceptional choice " + std::to_string(*choice.exceptional) +
                             " is not a point of line " + std::to_string(f.line));
      }
    }
    for (VertexId c : down(f.line)) {
      bool exc = choice.exceptional && *choice.exceptional == c;
      set_section_color(g.plane, c, exc ? spec.successor(i) : i);
    }
  }
  return g;
}

std::pair<Geometry, Flag> new_flag_geometry(const std::optional<ColorSpec>& spec,
                                            int line_color, int section_color) {
  Geometry g;
  if (spec) g.set_color_spec(*spec);
  VertexId c = g.add_vertex(Level::point);
  VertexId b = g.add_vertex(Level::line);
  VertexId a = g.add_vertex(Level::plane);
  g.add_edge(a, b);
  g.add_edge(b, c);
  if (spec) {
    g.set_line_color(b, line_color);
    g.set_section_color(a, c, section_color);
  }
  return {std::move(g), Flag{a, b, c}};
}

AuditReport validate_geometry(const Geometry& g) {
  AuditReport report;
  report.name = "validate";

  // edges join consecutive levels only
  for (VertexId v : g.vertex_ids()) {
    int lv = level_index(g.level(v));
    for (VertexId w : g.up(v)) {
      int lw = level_index(g.level(w));
      if (lw != lv + 1) {
        report.violations.push_back("edge " + std::to_string(v) + "-" + std::to_string(w) +
                                    " joins levels " + std::to_string(lv) + " and " +
                                    std::to_string(lw));
      }
    }
  }

  // every vertex lies in a flag
  for (VertexId v : g.vertex_ids()) {
    if (g.flags_containing(v).empty()) {
      report.violations.push_back("vertex " + std::to_string(v) + " lies in no flag");
    }
  }

  // two lines share at most one point and at most one plane
  std::vector<VertexId> lines = g.vertices_at_level(Level::line);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& pi = g.down(lines[i]);
      const auto& pj = g.down(lines[j]);
      std::vector<VertexId> common;
      std::set_intersection(pi.begin(), pi.end(), pj.begin(), pj.end(),
                            std::back_inserter(common));
      if (common.size() > 1) {
        report.violations.push_back("lines " + std::to_string(lines[i]) + " and " +
                                    std::to_string(lines[j]) + " share " +
                                    std::to_string(common.size()) + " points");
      }
      const auto& ai = g.up(lines[i]);
      const auto& aj = g.up(lines[j]);
      common.clear();
      std::set_intersection(ai.begin(), ai.end(), aj.begin(), aj.end(),
                            std::back_inserter(common));
      if (common.size() > 1) {
        report.violations.push_back("lines " + std::to_string(lines[i]) + " and " +
                                    std::to_string(lines[j]) + " lie in " +
                                    std::to_string(common.size()) + " common planes");
      }
    }
  }

  if (g.colored()) {
    const int k = g.color_spec()->k;
    for (VertexId b : lines) {
      auto it = g.line_colors().find(b);
      if (it == g.line_colors().end()) {
        report.violations.push_back("line " + std::to_string(b) + " has no color");
      } else if (it->second < 0 || it->second >= k) {
        report.violations.push_back("line " + std::to_string(b) + " color out of range");
      }
    }
    for (const auto& [key, color] : g.line_colors()) {
      if (!g.has_vertex(key) || g.level(key) != Level::line) {
        report.violations.push_back("line color on non-line " + std::to_string(key));
      }
    }
    // sections defined exactly for incident (plane, point) pairs
    for (const auto& [key, color] : g.section_colors()) {
      auto [a, c] = key;
      if (!g.has_vertex(a) || !g.has_vertex(c) || g.level(a) != Level::plane ||
          g.level(c) != Level::point || !g.point_in_plane(a, c)) {
        report.violations.push_back("section color on non-incident pair (" +
                                    std::to_string(a) + "," + std::to_string(c) + ")");
      } else if (color < 0 || color >= k) {
        report.violations.push_back("section (" + std::to_string(a) + "," +
                                    std::to_string(c) + ") color out of range");
      }
    }
    for (VertexId a : g.vertices_at_level(Level::plane)) {
      for (VertexId b : g.down(a)) {
        for (VertexId c : g.down(b)) {
          if (!g.section_color(a, c)) {
            report.violations.push_back("section (" + std::to_string(a) + "," +
                                        std::to_string(c) + ") has no color");
          }
        }
      }
    }
  }
  return report;
}

AuditReport audit_universal_axioms(const Geometry& g) {
  AuditReport report;
  report.name = "universal-axioms";
  if (!g.colored()) {
    report.notes.push_back("geometry is uncolored; nothing to check");
    return report;
  }
  const ColorSpec& spec = *g.color_spec();
  for (VertexId b : g.vertices_at_level(Level::line)) {
    auto it = g.line_colors().find(b);
    if (it == g.line_colors().end()) continue;  // validate reports this
    int i = it->second;
    int want = spec.successor(i);
    for (VertexId a : g.up(b)) {
      int exceptional = 0;
      for (VertexId c : g.down(b)) {
        auto sc = g.section_color(a, c);
        if (!sc) continue;  // validate reports this
        if (*sc == i) continue;
        if (*sc == want) {
          ++exceptional;
          continue;
        }
        report.violations.push_back("point " + std::to_string(c) + " on line " +
                                    std::to_string(b) + " (color " + std::to_string(i) +
                                    ") has section color " + std::to_string(*sc) +
                                    " in plane " + std::to_string(a));
      }
      if (exceptional > 1) {
        report.violations.push_back("line " + std::to_string(b) + " has " +
                                    std::to_string(exceptional) + " exceptional points in plane " +
                                    std::to_string(a));
      }
    }
  }
  return report;
}

}  // namespace psp
