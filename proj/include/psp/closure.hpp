#pragma once

#include <utility>
#include <vector>

#include "psp/geometry.hpp"
#include "psp/paths.hpp"

namespace psp {

enum class ClosureKind : std::uint8_t { plain, fcl_closed, acl_closed };

struct ClosedSet {
  std::vector<VertexId> members;  // ascending
  ClosureKind kind = ClosureKind::plain;
  std::vector<VertexId> exceptional;  // cached exceptional points (acl-closed)

  bool contains(VertexId v) const;
  static ClosedSet of(std::vector<VertexId> ids, ClosureKind kind = ClosureKind::plain);
};

// Every vertex lies in a flag inside X, and every two flags inside X are
// joined by a reduced path whose flags stay inside X.
bool is_nice(const Geometry& g, const std::vector<VertexId>& X);
bool is_nice(FlagGraph& fg, const std::vector<VertexId>& X);

struct NiceSearchLimits {
  std::size_t max_states = 50'000;
  std::size_t max_paths = 64;
};

// Colourless algebraic closure of X inside g, computed incrementally by
// closing under forced completions: shared incidences determined by two
// members, the common part of all flags through a member, and the
// non-wobbling vertices of reduced paths between member flags (also of the
// paths to each candidate completion of an uncovered member).
ClosedSet fcl(const Geometry& g, std::vector<VertexId> X);
ClosedSet fcl(FlagGraph& fg, std::vector<VertexId> X);

// Reference route: enumerate the minimal nice supersets of X inside g and
// intersect them.  Exact but slower; the incremental method is checked
// against it.
ClosedSet fcl_by_nice_intersection(const Geometry& g, const std::vector<VertexId>& X,
                                   const NiceSearchLimits& limits = {});
ClosedSet fcl_by_nice_intersection(FlagGraph& fg, const std::vector<VertexId>& X,
                                   const NiceSearchLimits& limits = {});

// The inclusion-minimal nice supersets of X inside g, up to max_sets of
// them, in a deterministic order.  Used as the family of base sets a
// forking check quantifies over.
std::vector<std::vector<VertexId>> minimal_nice_supersets(FlagGraph& fg,
                                                          const std::vector<VertexId>& X,
                                                          const NiceSearchLimits& limits = {},
                                                          std::size_t max_sets = 16);

// Re-runs the incremental closure after growing a copy of g by one round of
// generic operations near the closure; false when the result changes
// (the stage was too small to pin the closure down).
bool fcl_is_stage_stable(const Geometry& g, const std::vector<VertexId>& X);

struct EpScan {
  std::vector<VertexId> points;                          // ascending
  std::vector<std::pair<VertexId, VertexId>> missing;    // incident pairs without one
};

// Exceptional points over all incident (plane, line) pairs inside X.
EpScan scan_exceptional_points(const Geometry& g, const std::vector<VertexId>& X);
// Same, but a missing exceptional point is a StageError.
std::vector<VertexId> ep_set(const Geometry& g, const std::vector<VertexId>& X);

// Colored algebraic closure: fcl(X) plus the exceptional points of fcl(X).
// Verified closed before returning.
ClosedSet acl_colored(const Geometry& g, std::vector<VertexId> X);

// Closure of X under the color structure when g is colored, plain fcl
// otherwise.
ClosedSet closure_for(const Geometry& g, std::vector<VertexId> X);

// Number of exceptional points the colored closure adds over the
// colourless one.
int defect(const Geometry& g, const std::vector<VertexId>& W);

}  // namespace psp
