#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "psp/words.hpp"

namespace psp {

using VertexId = std::uint32_t;

// Levels: 0 = point, 1 = line, 2 = plane.
enum class Level : std::uint8_t { point = 0, line = 1, plane = 2 };

inline int level_index(Level l) { return static_cast<int>(l); }

// An incident triple plane - line - point.
struct Flag {
  VertexId plane = 0;
  VertexId line = 0;
  VertexId point = 0;

  VertexId at_level(int level) const {
    return level == 0 ? point : (level == 1 ? line : plane);
  }
  void set_level(int level, VertexId v) {
    if (level == 0)
      point = v;
    else if (level == 1)
      line = v;
    else
      plane = v;
  }
  friend bool operator==(const Flag&, const Flag&) = default;
  friend auto operator<=>(const Flag& a, const Flag& b) {
    return std::tie(a.plane, a.line, a.point) <=> std::tie(b.plane, b.line, b.point);
  }
};

std::string to_string(const Flag& f);

// Coloring scheme: k colors for lines and sections, with a fixed-point-free
// shift that maps a line color to the color of its exceptional point.
struct ColorSpec {
  int k = 0;
  std::vector<int> shift;  // shift[i] = color of the exceptional point on an i-colored line

  static ColorSpec cyclic(int k);                     // shift = +1 mod k
  static ColorSpec with_shift(std::vector<int> pi);   // throws on fixed points

  bool is_cyclic() const;
  int successor(int i) const;
  std::vector<int> predecessors(int i) const;  // all j with shift[j] == i, ascending

  friend bool operator==(const ColorSpec&, const ColorSpec&) = default;
};

// Explicit per-operation color choices (the construction recipe leaves
// these free and asks that each occur infinitely often).
enum class LineColorChoice : std::uint8_t {
  same,         // new line gets the section's color; the point is ordinary on it
  predecessor,  // new line gets a color whose shift is the section's color;
                // the point becomes its exceptional point
};

struct ColorChoice {
  LineColorChoice line = LineColorChoice::same;   // operation [1]
  std::optional<int> line_pred_color;             // operation [1] with predecessor:
                                                  // exact color; default smallest
  std::optional<VertexId> exceptional;            // operation [2]: point of the
                                                  // new plane to mark exceptional
};

struct AuditReport {
  std::string name;
  std::vector<std::string> violations;
  std::vector<std::string> notes;

  bool passed() const { return violations.empty(); }
  void print(std::ostream& os) const;
};

// A 3-level incidence graph with optional coloring.  Edges join consecutive
// levels only.  Vertex ids are unique and ascending; builds allocate them
// sequentially.  Mutation happens through add_* and apply_operation; all
// queries are const, so a geometry that is no longer mutated can be shared
// freely between threads.
class Geometry {
 public:
  Geometry() = default;

  VertexId add_vertex(Level level);
  VertexId add_vertex_with_id(VertexId id, Level level);  // loader path; ids ascending
  void add_edge(VertexId a, VertexId b);                  // validates level adjacency
  void add_edge_unchecked(VertexId a, VertexId b);        // loader/test path

  std::size_t vertex_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  const std::vector<VertexId>& vertex_ids() const { return ids_; }
  bool has_vertex(VertexId v) const;
  Level level(VertexId v) const;
  // Position in creation order; stage-index proxy for builder output.
  std::size_t vertex_rank(VertexId v) const;

  bool has_edge(VertexId a, VertexId b) const;
  // Neighbors one level up / down, ascending ids.
  const std::vector<VertexId>& up(VertexId v) const;
  const std::vector<VertexId>& down(VertexId v) const;

  std::vector<VertexId> vertices_at_level(Level l) const;

  bool is_flag(const Flag& f) const;
  std::vector<Flag> all_flags() const;  // ascending (plane, line, point)
  std::vector<Flag> flags_containing(VertexId v) const;

  // True if some line of plane a passes through point c.
  bool point_in_plane(VertexId a, VertexId c) const;
  std::vector<VertexId> lines_connecting(VertexId a, VertexId c) const;

  // Coloring.
  bool colored() const { return spec_.has_value(); }
  const std::optional<ColorSpec>& color_spec() const { return spec_; }
  void set_color_spec(ColorSpec spec);
  void set_line_color(VertexId line, int color);
  void set_section_color(VertexId plane, VertexId point, int color);
  int line_color(VertexId line) const;  // throws when missing
  std::optional<int> section_color(VertexId plane, VertexId point) const;
  const std::map<VertexId, int>& line_colors() const { return line_color_; }
  const std::map<std::pair<VertexId, VertexId>, int>& section_colors() const {
    return section_color_;
  }

  // The unique point of line b whose section color in plane a is the shift
  // of b's line color, if it exists.  Throws if b is not in a, the geometry
  // is uncolored, or the coloring is invalid (two candidates).
  std::optional<VertexId> exceptional_point(VertexId a, VertexId b) const;

  // Applies operation s to flag f: adds a new flag that agrees with f
  // exactly on the levels outside s, with fresh vertices on the levels of
  // s.  On colored geometries only [0], [1], [2] are allowed and the
  // coloring is extended by the standard recipe.  Returns the new flag.
  Flag apply_operation(const Flag& f, Letter s, const ColorChoice& choice = {});

 private:
  std::size_t index_of(VertexId v) const;  // throws when absent

  std::vector<VertexId> ids_;          // ascending
  std::vector<Level> levels_;          // by index
  std::vector<std::vector<VertexId>> up_;    // neighbors one level above
  std::vector<std::vector<VertexId>> down_;  // neighbors one level below
  std::size_t edge_count_ = 0;

  std::optional<ColorSpec> spec_;
  std::map<VertexId, int> line_color_;
  std::map<std::pair<VertexId, VertexId>, int> section_color_;
};

// Fresh geometry consisting of a single flag a-b-c.  With a spec, the line
// gets line_color and the section (a, c) gets section_color.
std::pair<Geometry, Flag> new_flag_geometry(const std::optional<ColorSpec>& spec = std::nullopt,
                                            int line_color = 0, int section_color = 0);

// Structural checks: bipartite levels, every vertex in a flag, two lines
// share at most one point and at most one plane, coloring totality and
// range when colored.
AuditReport validate_geometry(const Geometry& g);

// On a line of color i inside a plane, every point has section color i
// except at most one, which has the shifted color.
AuditReport audit_universal_axioms(const Geometry& g);

}  // namespace psp
