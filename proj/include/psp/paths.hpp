#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <vector>

#include "psp/geometry.hpp"
#include "psp/words.hpp"

namespace psp {

// A flag path; consecutive flags differ exactly on the levels of the
// corresponding letter.  flags.size() == word.size() + 1.
struct FlagPath {
  std::vector<Flag> flags;
  Word word;
};

// All flags differing from f exactly on the levels of s.
std::vector<Flag> flag_neighbors(const Geometry& g, const Flag& f, Letter s);

// True iff f1 and f2 (which must be s-neighbors) are also connected by a
// flag path of length <= bound whose letters are proper subletters of s.
bool has_splitting(const Geometry& g, const Flag& f1, const Flag& f2, Letter s,
                   int bound = 6);

// Cached flag enumeration and adjacency over one geometry snapshot.
class FlagGraph {
 public:
  explicit FlagGraph(const Geometry& g);

  const Geometry& geometry() const { return g_; }
  const std::vector<Flag>& flags() const { return flags_; }
  std::size_t size() const { return flags_.size(); }
  std::optional<std::size_t> index_of(const Flag& f) const;

  const std::vector<std::size_t>& neighbors(std::size_t flag_index, Letter s);

  // Memoized has_splitting over this snapshot.
  bool step_has_splitting(std::size_t from, std::size_t to, Letter s, int bound = 6);

 private:
  const Geometry& g_;
  std::vector<Flag> flags_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> neighbor_cache_;
  std::unordered_map<std::uint64_t, bool> splitting_cache_;
};

struct ReducedPathOptions {
  int max_length = 32;
  int splitting_bound = 6;
  std::size_t max_states = 2'000'000;
  std::size_t crosscheck_paths = 16;  // reduced paths compared for word agreement
};

// A reduced flag path from `from` to `to`: reduced word, no splitting at
// any step.  Words of all minimal reduced paths found are cross-checked to
// agree up to permutation.  Returns nullopt when the flags lie in
// different components.
std::optional<FlagPath> find_reduced_path(FlagGraph& fg, const Flag& from, const Flag& to,
                                          const ReducedPathOptions& opt = {});
std::optional<FlagPath> find_reduced_path(const Geometry& g, const Flag& from, const Flag& to,
                                          const ReducedPathOptions& opt = {});

// The distance word d(from, to) in normal form.  Throws StageError when the
// flags are not connected.
Word distance_word(FlagGraph& fg, const Flag& from, const Flag& to,
                   const ReducedPathOptions& opt = {});
Word distance_word(const Geometry& g, const Flag& from, const Flag& to,
                   const ReducedPathOptions& opt = {});

// Flags whose plane, line and point all belong to the vertex set.
std::vector<Flag> flags_inside_set(const Geometry& g, const std::vector<VertexId>& set);

// Whether a reduced path exists from one flag to another, optionally
// restricted to an allowed set of flag indexes and/or avoiding flags that
// contain a banned vertex.
bool reduced_path_exists(FlagGraph& fg, std::size_t from, std::size_t to,
                         const std::vector<std::size_t>* allowed_flags = nullptr,
                         const std::vector<VertexId>* banned_vertices = nullptr,
                         int splitting_bound = 6);

// Every reduced path from `from` to `to` of minimal word length, up to
// max_paths of them.  Throws StageError past the visit budget.
std::vector<FlagPath> all_minimal_reduced_paths(FlagGraph& fg, const Flag& from,
                                                const Flag& to,
                                                const ReducedPathOptions& opt = {},
                                                std::size_t max_paths = 64);

// A flag G of the nice set A such that every flag G' in A satisfies
// d(f, G') = concat_reduce(d(f, G), d(G, G')).  The universal property is
// verified against every flag of A; throws StageError if no flag of A
// satisfies it at this stage.
Flag base_point(FlagGraph& fg, const Flag& f, const std::vector<VertexId>& nice_set,
                const ReducedPathOptions& opt = {});
Flag base_point(const Geometry& g, const Flag& f, const std::vector<VertexId>& nice_set,
                const ReducedPathOptions& opt = {});

// Exhaustive search for closed reduced flag paths of length 2..max_len.
// A correct build has none; any found are reported.
AuditReport closed_reduced_path_audit(const Geometry& g, int max_len);

}  // namespace psp
