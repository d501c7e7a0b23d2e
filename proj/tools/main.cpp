#include <CLI11.hpp>

#include "cli.hpp"

using namespace splitmc::cli;

namespace {

std::vector<int> parse_sizes(const std::string& spec) {
  // "100:3000:100" (start:stop:step) or a comma list "3,4,5"
  std::vector<int> out;
  if (spec.find(':') != std::string::npos) {
    int start = 0, stop = 0, step = 0;
    if (sscanf(spec.c_str(), "%d:%d:%d", &start, &stop, &step) != 3 || step <= 0)
      throw CLI::ValidationError("--sizes", "expected start:stop:step");
    for (int n = start; n <= stop; n += step) out.push_back(n);
    return out;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compositional model checker for process networks"};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* cgen = app.add_subcommand("gen", "generate a model file");
  cgen->add_option("--family", gen.family, "ring|star|torus|line|degrees");
  cgen->add_option("--size", gen.size, "node count (ring/star/line/mutex)");
  cgen->add_option("--rows", gen.rows, "torus rows");
  cgen->add_option("--cols", gen.cols, "torus columns");
  cgen->add_option("--degrees", gen.degrees, "degree sequence")->delimiter(',');
  cgen->add_option("--protocol", gen.protocol, "dining|mutex|mutex-last");
  cgen->add_option("-o,--out", gen.out, "output path (default stdout)");

  CheckOptions check;
  std::string check_report;
  CLI::App* ccheck = app.add_subcommand("check", "compute and check the invariant");
  ccheck->add_option("model", check.model_path, "model file")->required();
  ccheck->add_option("--mode", check.mode, "ag|split-form");
  ccheck->add_option("--refine", check.refine, "none|expose|last");
  ccheck->add_option("--refine-budget", check.budget, "max refinement steps");
  ccheck->add_flag("--symmetry-reduce", check.symmetry_reduce,
                   "fixpoint over orbit representatives only");
  ccheck->add_option("--oracle-audit", check.oracle_audit,
                     "cross-check against reachability up to this many states");
  ccheck->add_option("--report", check_report, "write the JSON report here");
  ccheck->add_option("--dump-theta", check.dump_theta_path,
                     "write per-node invariant listings here");
  ccheck->add_option("--cap", check.state_cap, "state cap for oracle escalation");

  SymmetryOptions sym;
  std::string sym_report;
  CLI::App* csym = app.add_subcommand("symmetry", "network groupoid and orbits");
  csym->add_option("model", sym.model_path, "model file")->required();
  csym->add_option("--dot", sym.dot_path, "write orbit-colored graph here");
  csym->add_option("--report", sym_report, "write the JSON report here");

  AbstractOptions abs;
  std::string abs_report;
  std::vector<std::string> preds;
  CLI::App* cabs = app.add_subcommand("abstract", "local abstraction fixpoint");
  cabs->add_option("model", abs.model_path, "model file")->required();
  cabs->add_option("--pred", preds, "named predicate, e.g. A=forall e: e=self");
  cabs->add_flag("--identity", abs.identity, "identity abstraction");
  cabs->add_option("--dot", abs.dot_path, "write node 0's abstract graph here");
  cabs->add_option("--report", abs_report, "write the JSON report here");

  ReachOptions rch;
  std::string rch_report;
  CLI::App* crch = app.add_subcommand("reach", "exhaustive reachability");
  crch->add_option("model", rch.model_path, "model file")->required();
  crch->add_option("--cap", rch.cap, "state cap");
  crch->add_option("--dump", rch.dump_path, "write sorted state listing here");
  crch->add_option("--report", rch_report, "write the JSON report here");

  BenchOptions bench;
  std::string sizes_spec;
  CLI::App* cbench = app.add_subcommand("bench", "fixpoint scaling measurements");
  cbench->add_option("--protocol", bench.protocol, "dining|mutex|mutex-last");
  cbench->add_option("--family", bench.family, "ring|line|star");
  cbench->add_option("--sizes", sizes_spec, "start:stop:step or comma list")
      ->required();
  cbench->add_option("--mode", bench.mode, "ag|split-form");
  cbench->add_option("--csv", bench.csv_path, "CSV output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  Outcome out;
  if (*cgen) {
    out = run_gen(gen);
    if (out.exit_code != 0) emit(out, "");
    return out.exit_code;
  }
  if (*ccheck) {
    out = run_check(check);
    emit(out, check_report);
    return out.exit_code;
  }
  if (*csym) {
    out = run_symmetry(sym);
    emit(out, sym_report);
    return out.exit_code;
  }
  if (*cabs) {
    for (const std::string& p : preds) {
      auto eq = p.find('=');
      if (eq == std::string::npos) {
        std::cerr << "--pred expects name=guard\n";
        return 3;
      }
      abs.predicates.emplace_back(p.substr(0, eq), p.substr(eq + 1));
    }
    out = run_abstract(abs);
    emit(out, abs_report);
    return out.exit_code;
  }
  if (*crch) {
    out = run_reach(rch);
    emit(out, rch_report);
    return out.exit_code;
  }
  if (*cbench) {
    try {
      bench.sizes = parse_sizes(sizes_spec);
    } catch (const std::exception& e) {
      std::cerr << e.what() << "\n";
      return 3;
    }
    out = run_bench(bench);
    if (out.exit_code != 0) emit(out, "");
    return out.exit_code;
  }
  return 3;
}
