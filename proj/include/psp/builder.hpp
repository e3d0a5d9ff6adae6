#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "psp/geometry.hpp"

namespace psp {

enum class SelectorKind : std::uint8_t { round_robin, random, index };

// How a schedule step picks its target flag among the existing flags
// (canonical order).  Resolution is deterministic given the seed.
struct FlagSelector {
  SelectorKind kind = SelectorKind::random;
  std::uint32_t index = 0;  // explicit index, mod flag count
};

struct ChoiceSpec {
  LineColorChoice line = LineColorChoice::same;
  std::optional<int> pred_color;                   // exact predecessor color
  std::optional<std::uint32_t> exceptional_index;  // i-th point of the line
};

struct ScheduleStep {
  Letter op = Letter::L0;
  FlagSelector selector;
  ChoiceSpec choice;
};

// A build is fully determined by (steps, seed) or, with empty steps, by
// (stages, seed): steps are then generated procedurally.
struct BuildSchedule {
  std::vector<ScheduleStep> steps;
  std::uint64_t seed = 0;
  int stages = 0;

  static BuildSchedule procedural(int stages, std::uint64_t seed);
};

// One step per line: "<letter> <selector> <choice>", selector one of rr,
// rand, or an index; choice one of -, same, pred, pred:<color>, exc,
// exc:<index>.
std::string schedule_to_string(const BuildSchedule& schedule);
BuildSchedule parse_schedule(const std::string& text, std::uint64_t seed);  // throws ParseError

// Finite surrogate for the "infinitely many" axioms: every axiom instance
// whose defining vertices exist before stage `cutoff` must have at least
// `n` witnesses by the end of the build.
struct WitnessBudget {
  int n = 1;
  int cutoff = 0;
};

using StageHook = std::function<void(const Geometry&, int stage)>;

// Colourless build.  Procedural schedules cycle through all six letters
// with seeded flag selection.
Geometry build_free(const BuildSchedule& schedule, const StageHook& hook = {});

// Colored build restricted to the letters [0], [1], [2].  With explicit
// steps they are applied verbatim; the procedural builder grows cheaply
// until the cutoff, then seeds one cycle witness per color, then serves the
// witness budget, then grows pseudorandomly.  Throws StageError when the
// budget cannot be met within the schedule, with the deficit list.
Geometry build_colored(const ColorSpec& spec, const BuildSchedule& schedule,
                       const WitnessBudget& budget, const StageHook& hook = {});

// Witness counts and deficits for every inductive-axiom instance created
// before the cutoff: an exceptional point per incident (plane, line), n
// same-colored and n predecessor-colored lines per section membership, n
// planes per (point, line) in which the point is exceptional.  Stages are
// inferred from vertex creation order.
AuditReport audit_inductive_witnesses(const Geometry& g, const WitnessBudget& budget);

}  // namespace psp
