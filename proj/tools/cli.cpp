#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "splitmc/abstraction.hpp"
#include "splitmc/error.hpp"
#include "splitmc/generators.hpp"
#include "splitmc/ground.hpp"
#include "splitmc/refine.hpp"
#include "splitmc/semantics.hpp"
#include "splitmc/splitfix.hpp"
#include "splitmc/symmetry.hpp"

namespace splitmc::cli {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

uint64_t default_state_cap() {
  if (const char* env = std::getenv("SPLITMC_STATE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultStateCap;
}

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Input, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Input, "cannot write '" + path + "'");
  out << text;
}

json model_summary(const ModelFile& m, const GroundModel& g) {
  return {{"nodes", m.network.nodes().size()},
          {"edges", m.network.edges().size()},
          {"auxiliaries", m.auxiliaries.size()},
          {"processes", m.processes.size()},
          {"variables", g.var_count()},
          {"commands", g.total_commands()}};
}

json theta_summary(const GroundModel& g, const SplitInvariant& theta) {
  json per = json::array();
  for (const auto& c : theta.components) per.push_back(c.size());
  return {{"per_node", per}, {"total", theta.total_states()}};
}

json witness_json(const GroundModel& g, const PropertyWitness& w) {
  json vals;
  for (size_t k = 0; k < w.scope.size(); ++k)
    vals[g.var(w.scope[k]).name] = g.render_value(w.scope[k], w.values[k]);
  return {{"nodes", {g.node_name(w.node_a), g.node_name(w.node_b)}},
          {"joint_state", vals}};
}

json trace_json(const RefinementTrace& trace) {
  json steps = json::array();
  for (const RefinementStep& s : trace.steps) {
    json j;
    if (s.kind == RefinementStep::Kind::AddLast) {
      j["kind"] = "add-last";
      j["trigger"] = {{"var", s.trigger.first}, {"value", s.trigger.second}};
    } else {
      j["kind"] = "expose";
      j["node"] = s.exposure.node;
      j["vars"] = s.exposure.vars;
    }
    j["verdict_after"] = to_string(s.verdict_after);
    j["theta_sizes_after"] = s.theta_sizes_after;
    steps.push_back(std::move(j));
  }
  return {{"steps", steps},
          {"escalated", trace.escalated},
          {"oracle_complete", trace.oracle_complete}};
}

json counterexample_json(const GroundModel& g, const CounterexamplePath& cex) {
  json states = json::array();
  for (const auto& s : cex.states) {
    json st;
    for (uint32_t v = 0; v < g.var_count(); ++v)
      st[g.var(v).name] = g.render_value(v, s[v]);
    states.push_back(std::move(st));
  }
  return {{"nodes", {g.node_name(cex.node_a), g.node_name(cex.node_b)}},
          {"states", states},
          {"labels", cex.labels}};
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Proved: return 0;
    case Verdict::Unknown: return 1;
    case Verdict::Violated: return 2;
  }
  return 3;
}

json orbit_json(const GroundModel& g, const std::vector<LocalSymmetry>& grp,
                const BalanceRelation& balance, const OrbitPartition& orbits_) {
  json classes = json::array();
  for (const auto& cls : orbits_.classes) {
    json members = json::array();
    for (uint32_t v : cls) members.push_back(g.node_name(v));
    classes.push_back(
        {{"representative", g.node_name(cls.front())}, {"members", members}});
  }
  return {{"groupoid_size", grp.size()},
          {"balance_size", balance.triples.size()},
          {"orbit_count", orbits_.classes.size()},
          {"classes", classes}};
}

Outcome error_outcome(const Error& e) {
  Outcome out;
  out.exit_code = 3;
  out.report = {{"error", e.what()}};
  return out;
}

}  // namespace

Outcome run_gen(const GenOptions& opts) {
  try {
    NetworkGraph net;
    bool needs_network = opts.protocol == "dining";
    if (needs_network) {
      if (opts.family == "ring") {
        net = make_ring(opts.size);
      } else if (opts.family == "star") {
        net = make_star(opts.size);
      } else if (opts.family == "torus") {
        net = make_torus(opts.rows, opts.cols);
      } else if (opts.family == "line") {
        net = make_line(opts.size);
      } else if (opts.family == "degrees") {
        net = make_degree_graph(opts.degrees);
      } else {
        throw Error(ErrorKind::Input, "unknown family '" + opts.family + "'");
      }
    } else if (!opts.family.empty()) {
      throw Error(ErrorKind::Input, "protocol '" + opts.protocol +
                                        "' builds its own sharing structure; "
                                        "omit --family");
    }

    ModelFile m;
    if (opts.protocol == "dining") {
      m = gen_dining(net);
    } else if (opts.protocol == "mutex") {
      m = gen_mutex(opts.size, false);
    } else if (opts.protocol == "mutex-last") {
      m = gen_mutex(opts.size, true);
    } else {
      throw Error(ErrorKind::Input, "unknown protocol '" + opts.protocol + "'");
    }
    std::string text = print_model(m);
    if (opts.out.empty()) {
      std::cout << text;
    } else {
      write_file(opts.out, text);
    }
    GroundModel g(m);
    Outcome out;
    out.report = {{"command", "gen"}, {"model", model_summary(m, g)}};
    if (!opts.out.empty()) out.report["path"] = opts.out;
    return out;
  } catch (const Error& e) {
    return error_outcome(e);
  }
}

Outcome run_check(const CheckOptions& opts) {
  Outcome out;
  json& rep = out.report;
  json timings;
  auto start = Clock::now();
  try {
    uint64_t cap = opts.state_cap ? opts.state_cap : default_state_cap();
    ModelFile m = parse_model(read_file(opts.model_path));
    GroundModel g(m);
    timings["parse_s"] = seconds_since(start);

    rep["command"] = "check";
    rep["arguments"] = {{"model", opts.model_path},
                        {"mode", opts.mode},
                        {"refine", opts.refine},
                        {"budget", opts.budget},
                        {"symmetry_reduce", opts.symmetry_reduce},
                        {"oracle_audit", opts.oracle_audit},
                        {"state_cap", cap}};
    rep["model"] = model_summary(m, g);

    FixpointMode mode;
    if (opts.mode == "ag") {
      mode = FixpointMode::AssumeGuarantee;
    } else if (opts.mode == "split-form") {
      mode = FixpointMode::SplitForm;
    } else {
      throw Error(ErrorKind::Input, "unknown mode '" + opts.mode + "'");
    }

    auto fix_start = Clock::now();
    SplitInvariant theta;
    if (opts.symmetry_reduce) {
      auto grp = groupoid(g);
      BalanceRelation b = largest_balance(g, std::move(grp));
      OrbitPartition orb = orbits(g, b);
      theta = reduced_fixpoint(g, b, mode);
      json classes = json::array();
      for (const auto& cls : orb.classes)
        classes.push_back(g.node_name(cls.front()));
      rep["orbits"] = {{"count", orb.classes.size()}, {"representatives", classes}};
    } else {
      theta = strongest_split_invariant(g, mode);
    }
    timings["fixpoint_s"] = seconds_since(fix_start);

    PropertyVerdict pv = check_property(g, theta);
    Verdict verdict = pv.proved ? Verdict::Proved : Verdict::Unknown;
    rep["theta"] = theta_summary(g, theta);

    const GroundModel* final_model = &g;
    std::optional<GroundModel> refined_ground;
    if (!pv.proved && opts.refine != "none") {
      RefineOptions ropts;
      if (opts.refine == "expose") {
        ropts.strategy = RefineStrategy::ExposeForbidVar;
      } else if (opts.refine == "last") {
        ropts.strategy = RefineStrategy::AddLast;
      } else {
        throw Error(ErrorKind::Input, "unknown refine strategy '" + opts.refine + "'");
      }
      ropts.budget = opts.budget;
      ropts.state_cap = cap;
      ropts.mode = mode;
      auto refine_start = Clock::now();
      RefineResult res = refine_loop(m, ropts);
      timings["refine_s"] = seconds_since(refine_start);
      verdict = res.verdict;
      pv = res.property;
      theta = std::move(res.theta);
      refined_ground.emplace(res.model);
      final_model = &*refined_ground;
      rep["refinement"] = trace_json(res.trace);
      rep["theta"] = theta_summary(*final_model, theta);
      if (res.counterexample)
        rep["counterexample"] = counterexample_json(*final_model, *res.counterexample);
    }

    rep["verdict"] = to_string(verdict);
    if (!pv.proved && verdict == Verdict::Unknown) {
      json ws = json::array();
      for (const auto& w : pv.witnesses) ws.push_back(witness_json(*final_model, w));
      rep["witnesses"] = ws;
    }

    if (opts.oracle_audit > 0) {
      auto audit_start = Clock::now();
      ReachResult r = reach(*final_model, opts.oracle_audit);
      bool sound = true;
      if (r.complete) {
        for (uint32_t n = 0; n < final_model->node_count(); ++n)
          if (!theta.components[n].includes(project(*final_model, r.states, n)))
            sound = false;
      }
      rep["oracle_audit"] = {{"states", r.states.size()},
                             {"complete", r.complete},
                             {"sound", r.complete ? json(sound) : json()}};
      timings["oracle_audit_s"] = seconds_since(audit_start);
    }

    if (!opts.dump_theta_path.empty()) {
      std::ostringstream os;
      dump_invariant(os, *final_model, theta);
      write_file(opts.dump_theta_path, os.str());
    }

    out.exit_code = verdict_exit(verdict);
    timings["total_s"] = seconds_since(start);
    rep["timings"] = timings;
    return out;
  } catch (const Error& e) {
    return error_outcome(e);
  }
}

Outcome run_symmetry(const SymmetryOptions& opts) {
  Outcome out;
  auto start = Clock::now();
  try {
    ModelFile m = parse_model(read_file(opts.model_path));
    GroundModel g(m);
    auto grp = groupoid(g);
    BalanceRelation b = largest_balance(g, grp);
    OrbitPartition orb = orbits(g, b);
    out.report = {{"command", "symmetry"},
                  {"arguments", {{"model", opts.model_path}}},
                  {"model", model_summary(m, g)},
                  {"symmetry", orbit_json(g, grp, b, orb)}};
    if (!opts.dot_path.empty()) {
      std::ostringstream os;
      orbit_dot(os, g, orb);
      write_file(opts.dot_path, os.str());
    }
    out.report["timings"] = {{"total_s", seconds_since(start)}};
    return out;
  } catch (const Error& e) {
    return error_outcome(e);
  }
}

Outcome run_abstract(const AbstractOptions& opts) {
  Outcome out;
  auto start = Clock::now();
  try {
    if (!opts.identity && opts.predicates.empty())
      throw Error(ErrorKind::Input, "give --pred name=guard or --identity");
    ModelFile m = parse_model(read_file(opts.model_path));
    GroundModel g(m);
    std::vector<NamedPredicate> preds;
    for (const auto& [name, text] : opts.predicates)
      preds.push_back({name, parse_guard(text)});
    LocalAbstraction a = opts.identity ? LocalAbstraction::identity(g)
                                       : LocalAbstraction::from_predicates(g, preds);
    AbstractInvariant abs = abstract_fixpoint(g, a);

    std::vector<const GroundModel*> lone{&g};
    ParametricReport cluster = parametric_report(lone, opts.identity ? std::vector<NamedPredicate>{} : preds);
    json classes = json::array();
    for (size_t c = 0; c < cluster.classes.size(); ++c) {
      json members = json::array();
      for (const auto& [inst, node] : cluster.classes[c].members)
        members.push_back(node);
      classes.push_back({{"states", cluster.classes[c].graph.states},
                         {"members", members},
                         {"candidate_invariant", cluster.candidate_invariant[c]}});
    }
    json per_node = json::array();
    for (uint32_t n = 0; n < g.node_count(); ++n) {
      json st = json::array();
      for (uint32_t v : abs.states[n]) st.push_back(a.value_name(n, v));
      per_node.push_back({{"node", g.node_name(n)}, {"states", st}});
    }
    out.report = {{"command", "abstract"},
                  {"arguments", {{"model", opts.model_path}}},
                  {"model", model_summary(m, g)},
                  {"abstraction",
                   {{"identity", opts.identity},
                    {"class_count", cluster.classes.size()},
                    {"classes", classes},
                    {"per_node", per_node}}}};
    if (!opts.dot_path.empty()) {
      std::ostringstream os;
      abstract_dot(os, g, a, abs, 0);
      write_file(opts.dot_path, os.str());
    }
    out.report["timings"] = {{"total_s", seconds_since(start)}};
    return out;
  } catch (const Error& e) {
    return error_outcome(e);
  }
}

Outcome run_reach(const ReachOptions& opts) {
  Outcome out;
  auto start = Clock::now();
  try {
    uint64_t cap = opts.cap ? opts.cap : default_state_cap();
    ModelFile m = parse_model(read_file(opts.model_path));
    GroundModel g(m);
    ReachResult r = reach(g, cap);

    std::string verdict = "unknown";
    bool violation = false;
    for (uint32_t s = 0; s < r.states.size() && !violation; ++s) {
      auto st = r.states.at(s);
      for (auto [i, j] : g.property_pairs()) {
        if (g.forbid(i).eval([&](uint32_t v) { return st[v]; }) &&
            g.forbid(j).eval([&](uint32_t v) { return st[v]; })) {
          violation = true;
          break;
        }
      }
    }
    if (violation) {
      verdict = "violated";
    } else if (r.complete) {
      verdict = "proved";
    }

    out.report = {{"command", "reach"},
                  {"arguments", {{"model", opts.model_path}, {"cap", cap}}},
                  {"model", model_summary(m, g)},
                  {"reach",
                   {{"states", r.states.size()}, {"complete", r.complete}}},
                  {"verdict", verdict}};
    if (!opts.dump_path.empty()) {
      std::ostringstream os;
      dump_states(os, g, r.states);
      write_file(opts.dump_path, os.str());
    }
    out.exit_code = violation ? 2 : (r.complete ? 0 : 1);
    out.report["timings"] = {{"total_s", seconds_since(start)}};
    return out;
  } catch (const Error& e) {
    return error_outcome(e);
  }
}

Outcome run_bench(const BenchOptions& opts) {
  Outcome out;
  try {
    if (opts.sizes.empty()) throw Error(ErrorKind::Input, "no sizes given");
    FixpointMode mode = opts.mode == "split-form" ? FixpointMode::SplitForm
                                                  : FixpointMode::AssumeGuarantee;
    std::ostringstream csv;
    csv << "n,wall_seconds,theta_states\n";
    json rows = json::array();
    for (int n : opts.sizes) {
      ModelFile m;
      if (opts.protocol == "dining") {
        NetworkGraph net;
        if (opts.family == "ring") {
          net = make_ring(n);
        } else if (opts.family == "line") {
          net = make_line(n);
        } else if (opts.family == "star") {
          net = make_star(n);
        } else {
          throw Error(ErrorKind::Input, "unknown family '" + opts.family + "'");
        }
        m = gen_dining(net);
      } else if (opts.protocol == "mutex") {
        m = gen_mutex(n, false);
      } else if (opts.protocol == "mutex-last") {
        m = gen_mutex(n, true);
      } else {
        throw Error(ErrorKind::Input, "unknown protocol '" + opts.protocol + "'");
      }
      GroundModel g(m);
      auto t0 = Clock::now();
      SplitInvariant theta = strongest_split_invariant(g, mode);
      double secs = seconds_since(t0);
      csv << n << "," << secs << "," << theta.total_states() << "\n";
      rows.push_back({{"n", n}, {"wall_seconds", secs},
                      {"theta_states", theta.total_states()}});
    }
    if (opts.csv_path.empty()) {
      std::cout << csv.str();
    } else {
      write_file(opts.csv_path, csv.str());
    }
    out.report = {{"command", "bench"}, {"rows", rows}};
    return out;
  } catch (const Error& e) {
    return error_outcome(e);
  }
}

void emit(const Outcome& outcome, const std::string& report_path) {
  std::string text = outcome.report.dump(2) + "\n";
  if (report_path.empty()) {
    std::cout << text;
  } else {
    write_file(report_path, text);
    if (outcome.report.contains("verdict"))
      std::cout << "verdict: " << outcome.report["verdict"].get<std::string>()
                << "\n";
  }
}

}  // namespace splitmc::cli
