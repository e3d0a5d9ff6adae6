#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psp/closure.hpp"
#include "psp/geometry.hpp"

namespace psp {

// A finite injective, level-preserving correspondence between vertex sets.
class PartialMap {
 public:
  static PartialMap of(const Geometry& g,
                       std::vector<std::pair<VertexId, VertexId>> pairs);

  const std::vector<std::pair<VertexId, VertexId>>& pairs() const { return pairs_; }
  std::optional<VertexId> image(VertexId v) const;
  std::vector<VertexId> domain() const;
  std::vector<VertexId> range() const;

 private:
  std::vector<std::pair<VertexId, VertexId>> pairs_;  // sorted by source
};

struct ElementaryReport {
  bool qf_isomorphism = false;     // colourless induced-subgraph isomorphism
  bool colors_preserved = false;   // line colors and section colors
  bool expt_pattern = false;       // collisions of exceptional points match
  std::vector<std::string> details;

  bool passed() const { return qf_isomorphism && colors_preserved && expt_pattern; }
  void print(std::ostream& os) const;
};

// The three conditions under which a map between closed sets is elementary:
// colourless partial isomorphism, color preservation, and matching
// exceptional-point collisions.
ElementaryReport check_elementary_map(const Geometry& g, const PartialMap& m,
                                      const ClosedSet& X, const ClosedSet& Y);

// Whether some elementary map carries the closure of u onto the closure of
// v with u -> v coordinatewise.  The closures are acl on colored
// geometries, fcl otherwise.
bool types_equal(const Geometry& g, const std::vector<VertexId>& u,
                 const std::vector<VertexId>& v);

struct EpCollision {
  VertexId point;
  VertexId plane_a, line_a;  // witnessing pair on the X side
  VertexId plane_b, line_b;  // witnessing pair on the Y side
};

struct WordDefect {
  Flag from, base, to;
  Word expected;  // reduction of d(from, base) . d(base, to)
  Word actual;    // d(from, to)
};

struct IndependenceCertificate {
  bool verdict = false;
  std::vector<EpCollision> ep_collisions;
  std::vector<WordDefect> word_defects;
  std::vector<std::string> checked_bases;  // the nice base sets quantified over
  std::vector<std::string> notes;

  std::string format() const;  // stable key:value lines
};

// Forking check for X and Y over the closed base Z: every distance between
// member flags factors through a base point over each checked nice
// superset of Z, and the exceptional points of the two sides meet only
// inside Z.  The certificate lists every violation found.
IndependenceCertificate independent(const Geometry& g, const std::vector<VertexId>& X,
                                    const std::vector<VertexId>& Y, const ClosedSet& Z);

// Structural consequences of independence: the union of the closures is
// closed, no direct edges cross the sides away from the common part, a
// point of one side in a plane of the other connects through the common
// part, and a point on lines of both sides lies in it.
AuditReport verify_independence_consequences(const Geometry& g,
                                             const std::vector<VertexId>& X,
                                             const std::vector<VertexId>& Y,
                                             const ClosedSet& Z);

// Union over order-separated index blocks of the intersections of their
// closures.
std::vector<VertexId> kernel_finite(const Geometry& g,
                                    const std::vector<std::vector<VertexId>>& seq);

// Strong-type equality of a and a2 over C (as types over the enumerated
// base) together with independence of a from b over C.
bool pf_witness_check(const Geometry& g, const ClosedSet& C,
                      const std::vector<VertexId>& a, const std::vector<VertexId>& a2,
                      const std::vector<VertexId>& b);

enum class PatternPredicate : std::uint8_t { section_color, is_exceptional, incident };

struct PatternMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  // entries[i][j] = (a_ij, b_ij)
  std::vector<std::vector<std::pair<std::vector<VertexId>, std::vector<VertexId>>>> entries;
  PatternPredicate predicate = PatternPredicate::incident;
  int color = 0;  // for section_color
};

bool eval_pattern_predicate(const Geometry& g, const PatternMatrix& mat,
                            const std::vector<VertexId>& a, const std::vector<VertexId>& b);

// Checks that the predicate holds on a row's pairs exactly on the diagonal
// and that off-diagonal pairs all realize the diagonal's type.
AuditReport ms_pattern_check(const Geometry& g, const PatternMatrix& mat);

// Convergence pattern: above the diagonal every (a_i, b_j) realizes the
// p-representative's type, on the diagonal the q-representative's.
bool pf_pattern_check(
    const Geometry& g,
    const std::vector<std::pair<std::vector<VertexId>, std::vector<VertexId>>>& pairs,
    const std::pair<std::vector<VertexId>, std::vector<VertexId>>& p_rep,
    const std::pair<std::vector<VertexId>, std::vector<VertexId>>& q_rep);

}  // namespace psp
