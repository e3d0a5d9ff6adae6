#include "psp/builder.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>
#include <sstream>

#include "psp/errors.hpp"

namespace psp {

BuildSchedule BuildSchedule::procedural(int stages, std::uint64_t seed) {
  BuildSchedule s;
  s.stages = stages;
  s.seed = seed;
  return s;
}

namespace {

std::string selector_to_string(const FlagSelector& sel) {
  switch (sel.kind) {
    case SelectorKind::round_robin: return "rr";
    case SelectorKind::random: return "rand";
    case SelectorKind::index: return std::to_string(sel.index);
  }
  return "?";
}

std::string choice_to_string(const ScheduleStep& st) {
  if (st.op == Letter::L1) {
    if (st.choice.line == LineColorChoice::same) return "same";
    if (st.choice.pred_color) return "pred:" + std::to_string(*st.choice.pred_color);
    return "pred";
  }
  if (st.op == Letter::L2 && st.choice.exceptional_index) {
    return "exc:" + std::to_string(*st.choice.exceptional_index);
  }
  return "-";
}

unsigned long parse_uint(const std::string& tok, const std::string& what) {
  try {
    std::size_t used = 0;
    unsigned long v = std::stoul(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad " + what + ": '" + tok + "'");
  }
}

}  // namespace

std::string schedule_to_string(const BuildSchedule& schedule) {
  std::ostringstream os;
  for (const auto& st : schedule.steps) {
    os << to_string(st.op) << ' ' << selector_to_string(st.selector) << ' '
       << choice_to_string(st) << '\n';
  }
  return os.str();
}

BuildSchedule parse_schedule(const std::string& text, std::uint64_t seed) {
  BuildSchedule out;
  out.seed = seed;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string ltok, stok, ctok;
    if (!(ls >> ltok >> stok >> ctok)) {
      throw ParseError("schedule line " + std::to_string(lineno) + ": expected three tokens");
    }
    ScheduleStep st;
    st.op = parse_letter(ltok);
    if (stok == "rr") {
      st.selector.kind = SelectorKind::round_robin;
    } else if (stok == "rand") {
      st.selector.kind = SelectorKind::random;
    } else {
      st.selector.kind = SelectorKind::index;
      st.selector.index = static_cast<std::uint32_t>(parse_uint(stok, "selector"));
    }
    if (ctok == "-") {
    } else if (ctok == "same") {
      st.choice.line = LineColorChoice::same;
    } else if (ctok == "pred") {
      st.choice.line = LineColorChoice::predecessor;
    } else if (ctok.rfind("pred:", 0) == 0) {
      st.choice.line = LineColorChoice::predecessor;
      st.choice.pred_color = static_cast<int>(parse_uint(ctok.substr(5), "predecessor color"));
    } else if (ctok == "exc") {
      st.choice.exceptional_index = 0;
    } else if (ctok.rfind("exc:", 0) == 0) {
      st.choice.exceptional_index =
          static_cast<std::uint32_t>(parse_uint(ctok.substr(4), "exceptional index"));
    } else {
      throw ParseError("schedule line " + std::to_string(lineno) + ": bad choice '" + ctok + "'");
    }
    out.steps.push_back(st);
  }
  out.stages = static_cast<int>(out.steps.size());
  return out;
}

namespace {

class FlagPicker {
 public:
  explicit FlagPicker(std::uint64_t seed) : rng_(seed) {}

  Flag pick(const Geometry& g, const FlagSelector& sel) {
    std::vector<Flag> flags = g.all_flags();
    if (flags.empty()) throw InvariantError("geometry has no flags");
    switch (sel.kind) {
      case SelectorKind::round_robin: return flags[rr_counter_++ % flags.size()];
      case SelectorKind::random: return flags[rng_() % flags.size()];
      case SelectorKind::index: return flags[sel.index % flags.size()];
    }
    return flags.front();
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::size_t rr_counter_ = 0;
};

ColorChoice resolve_choice(const Geometry& g, const Flag& target, Letter op,
                           const ChoiceSpec& cs) {
  ColorChoice c;
  c.line = cs.line;
  c.line_pred_color = cs.pred_color;
  if (op == Letter::L2 && cs.exceptional_index) {
    const auto& pts = g.down(target.line);
    c.exceptional = pts[*cs.exceptional_index % pts.size()];
  }
  return c;
}

// Stage at which a vertex appeared: the initial flag is stage 0, afterwards
// one vertex per stage on colored builds.
int vertex_stage(const Geometry& g, VertexId v) {
  std::size_t rank = g.vertex_rank(v);
  return rank < 3 ? 0 : static_cast<int>(rank - 2);
}

int pair_stage(const Geometry& g, VertexId x, VertexId y) {
  return std::max(vertex_stage(g, x), vertex_stage(g, y));
}

// A section exists from the first stage at which some line witnesses it.
int section_stage(const Geometry& g, VertexId a, VertexId c) {
  int best = -1;
  for (VertexId b : g.lines_connecting(a, c)) {
    int s = std::max({vertex_stage(g, a), vertex_stage(g, b), vertex_stage(g, c)});
    if (best < 0 || s < best) best = s;
  }
  return best;
}

int count_lines_with_color(const Geometry& g, VertexId a, VertexId c,
                           const std::vector<int>& colors) {
  int n = 0;
  for (VertexId b : g.lines_connecting(a, c)) {
    int lc = g.line_color(b);
    if (std::find(colors.begin(), colors.end(), lc) != colors.end()) ++n;
  }
  return n;
}

int count_exceptional_planes(const Geometry& g, VertexId c, VertexId b) {
  int n = 0;
  for (VertexId a : g.up(b)) {
    if (g.exceptional_point(a, b) == c) ++n;
  }
  return n;
}

struct DemandOp {
  Flag target;
  Letter op;
  ColorChoice choice;
  std::string why;
};

// First unsatisfied budget demand in a deterministic scan, with the
// operation that makes progress on it.
std::optional<DemandOp> first_unsatisfied_demand(const Geometry& g,
                                                 const WitnessBudget& budget) {
  const ColorSpec& spec = *g.color_spec();
  // exceptional point per incident (plane, line)
  for (VertexId b : g.vertices_at_level(Level::line)) {
    for (VertexId a : g.up(b)) {
      if (pair_stage(g, a, b) >= budget.cutoff) continue;
      if (g.exceptional_point(a, b).has_value()) continue;
      Flag f{a, b, g.down(b).front()};
      return DemandOp{f, Letter::L0, {}, "exceptional point for (" + std::to_string(a) +
                                             "," + std::to_string(b) + ")"};
    }
  }
  // same- and predecessor-colored lines per section
  for (const auto& [key, color] : g.section_colors()) {
    auto [a, c] = key;
    if (section_stage(g, a, c) >= budget.cutoff) continue;
    if (count_lines_with_color(g, a, c, {color}) < budget.n) {
      Flag f{a, g.lines_connecting(a, c).front(), c};
      return DemandOp{f, Letter::L1, ColorChoice{LineColorChoice::same, {}, {}},
                      "same-color line for (" + std::to_string(a) + "," + std::to_string(c) + ")"};
    }
    auto preds = spec.predecessors(color);
    if (!preds.empty() && count_lines_with_color(g, a, c, preds) < budget.n) {
      Flag f{a, g.lines_connecting(a, c).front(), c};
      return DemandOp{f, Letter::L1, ColorChoice{LineColorChoice::predecessor, {}, {}},
                      "predecessor-color line for (" + std::to_string(a) + "," +
                          std::to_string(c) + ")"};
    }
  }
  // planes in which a point is exceptional, per (point, line)
  for (VertexId b : g.vertices_at_level(Level::line)) {
    for (VertexId c : g.down(b)) {
      if (pair_stage(g, c, b) >= budget.cutoff) continue;
      if (count_exceptional_planes(g, c, b) >= budget.n) continue;
      Flag f{g.up(b).front(), b, c};
      return DemandOp{f, Letter::L2, ColorChoice{LineColorChoice::same, {}, c},
                      "exceptional plane for (" + std::to_string(c) + "," + std::to_string(b) +
                          ")"};
    }
  }
  return std::nullopt;
}

// ---- cycle-witness seeding -------------------------------------------------

bool witness_exists(const Geometry& g, int r) {
  for (const auto& [key, color] : g.section_colors()) {
    if (color != r) continue;
    auto [a, c] = key;
    for (VertexId b : g.lines_connecting(a, c)) {
      if (g.line_color(b) != r) continue;
      auto e = g.exceptional_point(a, b);
      if (e && *e != c) return true;
    }
  }
  return false;
}

std::optional<std::pair<VertexId, VertexId>> first_section_of_color(const Geometry& g, int r) {
  for (const auto& [key, color] : g.section_colors()) {
    if (color == r) return key;
  }
  return std::nullopt;
}

std::optional<VertexId> first_line_of_color(const Geometry& g, int r) {
  for (const auto& [b, color] : g.line_colors()) {
    if (color == r) return b;
  }
  return std::nullopt;
}

// One operation that materializes a new line or section color, following a
// shortest derivation in the color graph: a section of color j yields lines
// of color j or any predecessor of j; a line of color m yields sections of
// color m or its shift.
std::optional<DemandOp> color_materialization_op(const Geometry& g, int target_color,
                                                 bool target_is_section) {
  const ColorSpec& spec = *g.color_spec();
  const int k = spec.k;
  // nodes 0..k-1 are line colors, k..2k-1 section colors
  auto line_node = [&](int c) { return c; };
  auto section_node = [&](int c) { return k + c; };
  std::vector<int> dist(2 * static_cast<std::size_t>(k), -1);
  std::vector<int> parent(2 * static_cast<std::size_t>(k), -1);
  std::deque<int> queue;
  for (int c = 0; c < k; ++c) {
    if (first_line_of_color(g, c)) {
      dist[static_cast<std::size_t>(line_node(c))] = 0;
      queue.push_back(line_node(c));
    }
    if (first_section_of_color(g, c)) {
      dist[static_cast<std::size_t>(section_node(c))] = 0;
      queue.push_back(section_node(c));
    }
  }
  while (!queue.empty()) {
    int node = queue.front();
    queue.pop_front();
    std::vector<int> nexts;
    if (node < k) {
      nexts.push_back(section_node(node));                 // op [2], ordinary
      nexts.push_back(section_node(spec.successor(node))); // op [2], exceptional
    } else {
      int j = node - k;
      nexts.push_back(line_node(j));                       // op [1], same
      for (int p : spec.predecessors(j)) nexts.push_back(line_node(p));
    }
    for (int nx : nexts) {
      if (dist[static_cast<std::size_t>(nx)] >= 0) continue;
      dist[static_cast<std::size_t>(nx)] = dist[static_cast<std::size_t>(node)] + 1;
      parent[static_cast<std::size_t>(nx)] = node;
      queue.push_back(nx);
    }
  }
  int goal = target_is_section ? section_node(target_color) : line_node(target_color);
  if (dist[static_cast<std::size_t>(goal)] < 0) return std::nullopt;
  if (dist[static_cast<std::size_t>(goal)] == 0) return std::nullopt;  // already present
  // walk back to the first edge out of a present node
  int node = goal;
  while (dist[static_cast<std::size_t>(parent[static_cast<std::size_t>(node)])] > 0) {
    node = parent[static_cast<std::size_t>(node)];
  }
  int from = parent[static_cast<std::size_t>(node)];
  if (from < k) {
    // line color `from` produces a section: op [2]
    VertexId b = *first_line_of_color(g, from);
    Flag f{g.up(b).front(), b, g.down(b).front()};
    ColorChoice choice;
    int produced = node - k;
    if (produced == spec.successor(from)) choice.exceptional = g.down(b).front();
    return DemandOp{f, Letter::L2, choice, "materialize section color " + std::to_string(produced)};
  }
  // section color `from - k` produces a line: op [1]
  auto sec = *first_section_of_color(g, from - k);
  Flag f{sec.first, g.lines_connecting(sec.first, sec.second).front(), sec.second};
  ColorChoice choice;
  int produced = node;
  if (produced == from - k) {
    choice.line = LineColorChoice::same;
  } else {
    choice.line = LineColorChoice::predecessor;
    choice.line_pred_color = produced;
  }
  return DemandOp{f, Letter::L1, choice, "materialize line color " + std::to_string(produced)};
}

// Next operation toward a full cycle witness for color r: a section (a, c)
// of color r, a line of color r through c in a, and an exceptional point on
// that line distinct from c.
std::optional<DemandOp> next_witness_op(const Geometry& g, int r) {
  if (witness_exists(g, r)) return std::nullopt;
  const ColorSpec& spec = *g.color_spec();
  // same-colored triples: complete or refresh them
  for (const auto& [key, color] : g.section_colors()) {
    if (color != r) continue;
    auto [a, c] = key;
    for (VertexId b : g.lines_connecting(a, c)) {
      if (g.line_color(b) != r) continue;
      if (!g.exceptional_point(a, b).has_value()) {
        return DemandOp{Flag{a, b, c}, Letter::L0, {},
                        "witness " + std::to_string(r) + ": add exceptional point"};
      }
    }
  }
  if (auto sec = first_section_of_color(g, r)) {
    // a fresh same-colored line; the next stage adds its exceptional point
    auto [a, c] = *sec;
    Flag f{a, g.lines_connecting(a, c).front(), c};
    return DemandOp{f, Letter::L1, ColorChoice{LineColorChoice::same, {}, {}},
                    "witness " + std::to_string(r) + ": add same-color line"};
  }
  auto op = color_materialization_op(g, r, /*target_is_section=*/true);
  if (!op) {
    throw StageError("section color " + std::to_string(r) +
                     " is unreachable from the initial coloring under this shift (k=" +
                     std::to_string(spec.k) + ")");
  }
  return op;
}

}  // namespace

Geometry build_free(const BuildSchedule& schedule, const StageHook& hook) {
  auto [g, f0] = new_flag_geometry();
  (void)f0;
  FlagPicker picker(schedule.seed);
  const bool procedural = schedule.steps.empty();
  const int stages = procedural ? schedule.stages : static_cast<int>(schedule.steps.size());
  for (int stage = 1; stage <= stages; ++stage) {
    ScheduleStep st;
    if (!procedural) {
      st = schedule.steps[static_cast<std::size_t>(stage - 1)];
    } else {
      st.op = kAllLetters[static_cast<std::size_t>((stage - 1) % 6)];
      st.selector.kind = SelectorKind::random;
    }
    Flag target = picker.pick(g, st.selector);
    g.apply_operation(target, st.op, resolve_choice(g, target, st.op, st.choice));
    if (hook) hook(g, stage);
  }
  return g;
}

Geometry build_colored(const ColorSpec& spec, const BuildSchedule& schedule,
                       const WitnessBudget& budget, const StageHook& hook) {
  if (budget.n < 1) throw InvariantError("witness budget needs n >= 1");
  const bool procedural = schedule.steps.empty();
  const int stages = procedural ? schedule.stages : static_cast<int>(schedule.steps.size());
  if (budget.cutoff > stages) {
    throw InvariantError("budget cutoff " + std::to_string(budget.cutoff) +
                         " exceeds stage count " + std::to_string(stages));
  }

  auto [g, f0] = new_flag_geometry(spec, 0, 0);
  (void)f0;
  FlagPicker picker(schedule.seed);
  std::size_t line_choice_counter = 0;
  std::size_t growth_counter = 0;

  for (int stage = 1; stage <= stages; ++stage) {
    if (!procedural) {
      const ScheduleStep& st = schedule.steps[static_cast<std::size_t>(stage - 1)];
      Flag target = picker.pick(g, st.selector);
      g.apply_operation(target, st.op, resolve_choice(g, target, st.op, st.choice));
      if (hook) hook(g, stage);
      continue;
    }

    if (stage <= budget.cutoff) {
      // cheap growth before the cutoff: new lines only, fair choice split
      Flag target = picker.pick(g, FlagSelector{SelectorKind::random, 0});
      ColorChoice choice;
      choice.line = (line_choice_counter++ % 2) ? LineColorChoice::predecessor
                                                : LineColorChoice::same;
      g.apply_operation(target, Letter::L1, choice);
      if (hook) hook(g, stage);
      continue;
    }

    std::optional<DemandOp> op;
    for (int r = 0; r < spec.k && !op; ++r) op = next_witness_op(g, r);
    if (!op) op = first_unsatisfied_demand(g, budget);
    if (op) {
      g.apply_operation(op->target, op->op, op->choice);
    } else {
      // pseudorandom growth; every choice keeps recurring
      Letter s = kAllLetters[growth_counter % 3];
      Flag target = picker.pick(g, FlagSelector{SelectorKind::random, 0});
      ColorChoice choice;
      if (s == Letter::L1) {
        choice.line = (line_choice_counter++ % 2) ? LineColorChoice::predecessor
                                                  : LineColorChoice::same;
      } else if (s == Letter::L2 && (growth_counter % 2)) {
        const auto& pts = g.down(target.line);
        choice.exceptional = pts[(growth_counter / 2) % pts.size()];
      }
      ++growth_counter;
      g.apply_operation(target, s, choice);
    }
    if (hook) hook(g, stage);
  }

  AuditReport report = audit_inductive_witnesses(g, budget);
  if (!report.passed()) {
    std::string msg = "witness budget infeasible for this schedule:";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw StageError(msg);
  }
  return g;
}

AuditReport audit_inductive_witnesses(const Geometry& g, const WitnessBudget& budget) {
  if (!g.colored()) throw InvariantError("inductive audit needs a colored geometry");
  AuditReport report;
  report.name = "inductive-witnesses";
  report.notes.push_back("budget: n=" + std::to_string(budget.n) +
                         " cutoff=" + std::to_string(budget.cutoff));
  const ColorSpec& spec = *g.color_spec();
  std::size_t instances = 0;
  std::size_t checked = 0;

  for (VertexId b : g.vertices_at_level(Level::line)) {
    for (VertexId a : g.up(b)) {
      ++instances;
      if (pair_stage(g, a, b) >= budget.cutoff) continue;
      ++checked;
      try {
        if (!g.exceptional_point(a, b).has_value()) {
          report.violations.push_back("deficit: no exceptional point for plane " +
                                      std::to_string(a) + " line " + std::to_string(b) +
                                      " (stage " + std::to_string(pair_stage(g, a, b)) + ")");
        }
      } catch (const InvariantError& e) {
        report.violations.push_back(std::string("invalid coloring: ") + e.what());
      }
    }
  }

  for (const auto& [key, color] : g.section_colors()) {
    auto [a, c] = key;
    ++instances;
    if (section_stage(g, a, c) < 0 || section_stage(g, a, c) >= budget.cutoff) continue;
    ++checked;
    int same = count_lines_with_color(g, a, c, {color});
    if (same < budget.n) {
      report.violations.push_back("deficit: section (" + std::to_string(a) + "," +
                                  std::to_string(c) + ") has " + std::to_string(same) +
                                  " same-color lines, needs " + std::to_string(budget.n));
    }
    auto preds = spec.predecessors(color);
    if (!preds.empty()) {
      int pred = count_lines_with_color(g, a, c, preds);
      if (pred < budget.n) {
        report.violations.push_back("deficit: section (" + std::to_string(a) + "," +
                                    std::to_string(c) + ") has " + std::to_string(pred) +
                                    " predecessor-color lines, needs " +
                                    std::to_string(budget.n));
      }
    }
  }

  for (VertexId b : g.vertices_at_level(Level::line)) {
    for (VertexId c : g.down(b)) {
      ++instances;
      if (pair_stage(g, c, b) >= budget.cutoff) continue;
      ++checked;
      try {
        int planes = count_exceptional_planes(g, c, b);
        if (planes < budget.n) {
          report.violations.push_back("deficit: point " + std::to_string(c) + " on line " +
                                      std::to_string(b) + " is exceptional in " +
                                      std::to_string(planes) + " planes, needs " +
                                      std::to_string(budget.n));
        }
      } catch (const InvariantError& e) {
        report.violations.push_back(std::string("invalid coloring: ") + e.what());
      }
    }
  }

  report.notes.push_back("instances: " + std::to_string(instances) +
                         " checked: " + std::to_string(checked));
  return report;
}

}  // namespace psp
