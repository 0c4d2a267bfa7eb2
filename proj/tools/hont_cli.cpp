#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <string>

#include "hont/hont.h"

namespace {

using json = nlohmann::json;

enum Exit { kTrue = 0, kFalse = 1, kUsage = 2, kParse = 3, kBudget = 4 };

int exit_for(hont_status s) {
  switch (s) {
    case HONT_OK: return kTrue;
    case HONT_E_PARSE:
    case HONT_E_SYNTAX: return kParse;
    case HONT_E_BUDGET_EXHAUSTED:
    case HONT_E_SIZE_LIMIT: return kBudget;
    default: return kUsage;
  }
}

int fail(hont_status s) {
  std::cerr << "error (" << hont_status_name(s) << "): " << hont_last_error() << "\n";
  return exit_for(s);
}

struct Owned {
  char* p = nullptr;
  ~Owned() { hont_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

using SystemPtr = std::unique_ptr<hont_system, decltype(&hont_system_free)>;

struct Options {
  std::string system;
  std::string format = "text";
  bool lines() const { return format == "json-lines"; }
};

void print_matrix(const json& states, const json& m) {
  std::size_t w = 1;
  for (const auto& s : states) w = std::max(w, s.get<std::string>().size());
  std::printf("%*s", static_cast<int>(w), "");
  for (const auto& s : states) std::printf(" %*s", static_cast<int>(w), s.get<std::string>().c_str());
  std::printf("\n");
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::printf("%*s", static_cast<int>(w), states[i].get<std::string>().c_str());
    for (const auto& v : m[i]) std::printf(" %*u", static_cast<int>(w), v.get<unsigned>());
    std::printf("\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order pushdown systems and nested pushdown trees"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json-lines"}));

  auto sys_arg = [&](CLI::App* sub) { sub->add_option("system", o.system, "System file (.nps)")->required(); };

  auto* parse = app.add_subcommand("parse", "Parse a system and print a summary");
  sys_arg(parse);
  bool canonical = false;
  parse->add_flag("--canonical", canonical, "Print the canonical serialization");

  auto* run = app.add_subcommand("run", "Replay a run from the initial configuration");
  sys_arg(run);
  std::string steps;
  run->add_option("--run", steps, "Transition indices, e.g. 0,1,3");

  auto* tree = app.add_subcommand("tree", "Truncated nested pushdown tree");
  sys_arg(tree);
  std::size_t depth = 3;
  std::string tree_format = "dot";
  tree->add_option("--depth", depth, "Maximal run length");
  tree->add_option("--tree-format,--as", tree_format, "dot or list")->check(CLI::IsMember({"dot", "list"}));

  auto* anc = app.add_subcommand("ancestors", "Relevant ancestors of a run");
  sys_arg(anc);
  unsigned level = 1;
  anc->add_option("--run", steps, "Transition indices");
  anc->add_option("--level", level, "Closure level");

  auto* ms = app.add_subcommand("milestones", "Generalised milestones of a level-2 stack");
  sys_arg(ms);
  std::string stack;
  ms->add_option("--stack", stack, "Stack, e.g. _:_.a")->required();

  auto* loops = app.add_subcommand("loops", "Loop counts of a word, or loop languages of a level-1 system");
  sys_arg(loops);
  std::string word, from, to, symbol;
  unsigned z = 2;
  std::size_t budget = 4096, shortest = 5;
  loops->add_option("--word", word, "Top word (level 2)");
  loops->add_option("--threshold,-z", z, "Count threshold");
  loops->add_option("--budget", budget, "Length budget");
  loops->add_option("--from", from, "Start state (level 1)");
  loops->add_option("--to", to, "End state (level 1)");
  loops->add_option("--symbol", symbol, "Loop symbol (level 1)");
  loops->add_option("--shortest", shortest, "Number of shortest loops to list");

  auto* shrink = app.add_subcommand("shrink", "Shorten a run to the same final configuration");
  sys_arg(shrink);
  std::size_t max_height = 4;
  shrink->add_option("--run", steps, "Transition indices")->required();
  shrink->add_option("--threshold,-z", z, "Count threshold");
  shrink->add_option("--max-height", max_height, "Heights sampled for loop lengths");
  shrink->add_option("--budget", budget, "Length budget");

  auto* wtype = app.add_subcommand("wtype", "Compare two words by type");
  sys_arg(wtype);
  std::string w1, w2;
  unsigned n = 1;
  wtype->add_option("--w1", w1, "First word")->required();
  wtype->add_option("--w2", w2, "Second word")->required();
  wtype->add_option("-n", n, "Level");
  wtype->add_option("-z", z, "Threshold");
  wtype->add_option("--budget", budget, "Length budget");

  auto* bounds = app.add_subcommand("bounds", "Evaluate the strategy bound tables");
  sys_arg(bounds);
  unsigned bl = 0, bn1 = 1, bn2 = 1;
  std::string classes = "1", lambda = "1,1,1";
  bounds->add_option("-n", n, "Tuple size");
  bounds->add_option("-z", z, "Threshold");
  bounds->add_option("-l", bl, "Ancestor level");
  bounds->add_option("--n1", bn1, "Window");
  bounds->add_option("--n2", bn2, "Type level");
  bounds->add_option("--classes", classes, "observed, or a class count");
  bounds->add_option("--lambda", lambda, "measured, or VALUE,M,N");

  auto* check = app.add_subcommand("check", "Model check a first-order formula");
  sys_arg(check);
  std::string formula, mode = "bounded:3", caps;
  std::size_t check_budget = 1'000'000;
  check->add_option("--formula", formula, "Formula")->required();
  check->add_option("--mode", mode, "bounded:D | s:uniform:L | s:npt1[:E] | s:npt2");
  check->add_option("--caps", caps, "key=value list: length, height, width, z, classes, lambda");
  check->add_option("--budget", check_budget, "Generator budget (runs)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  hont_system* raw = nullptr;
  hont_status st = hont_system_load(o.system.c_str(), &raw);
  if (st != HONT_OK) {
    if (hont_last_error_position() > 0)
      std::cerr << o.system << ":" << hont_last_error_position() << ": ";
    return fail(st);
  }
  SystemPtr sys(raw, hont_system_free);
  int sys_level = 0;
  std::size_t nstates = 0, ntrans = 0;
  hont_system_info(sys.get(), &sys_level, &nstates, &ntrans);

  if (*parse) {
    if (canonical) {
      Owned s;
      if ((st = hont_system_serialize(sys.get(), &s.p)) != HONT_OK) return fail(st);
      std::cout << s.str();
    } else if (o.lines()) {
      std::cout << json{{"level", sys_level}, {"states", nstates}, {"transitions", ntrans}}.dump() << "\n";
    } else {
      std::cout << "level " << sys_level << ", " << nstates << " states, " << ntrans << " transitions\n";
    }
    return kTrue;
  }

  if (*run) {
    Owned s;
    if ((st = hont_run(sys.get(), steps.c_str(), &s.p)) != HONT_OK) return fail(st);
    auto j = json::parse(s.str());
    for (const auto& c : j["configurations"]) {
      if (o.lines()) {
        std::cout << c.dump() << "\n";
      } else {
        std::cout << c["position"].get<std::size_t>() << "\t";
        if (c.contains("transition")) std::cout << "[" << c["transition"].get<unsigned>() << "] ";
        std::cout << "(" << c["state"].get<std::string>() << ", " << c["stack"].get<std::string>() << ")\n";
      }
    }
    return kTrue;
  }

  if (*tree) {
    Owned s;
    if ((st = hont_tree(sys.get(), depth, tree_format == "dot", &s.p)) != HONT_OK) return fail(st);
    std::cout << s.str();
    return kTrue;
  }

  if (*anc) {
    Owned s;
    if ((st = hont_ancestors(sys.get(), steps.c_str(), level, &s.p)) != HONT_OK) return fail(st);
    for (const auto& a : json::parse(s.str())["ancestors"]) {
      if (o.lines()) std::cout << a.dump() << "\n";
      else std::cout << a["length"].get<std::size_t>() << "\t" << a["level"].get<unsigned>() << "\t["
                     << a["run"].get<std::string>() << "]\n";
    }
    return kTrue;
  }

  if (*ms) {
    Owned s;
    if ((st = hont_milestones(sys.get(), stack.c_str(), &s.p)) != HONT_OK) return fail(st);
    auto j = json::parse(s.str());
    for (const auto& m : j["milestones"]) {
      if (o.lines()) std::cout << m.dump() << "\n";
      else std::cout << m["stack"].get<std::string>() << (m["flagged"].get<bool>() ? "\tmilestone" : "") << "\n";
    }
    if (!o.lines()) {
      std::cout << "operations:";
      for (const auto& op : j["operations"]) std::cout << " " << op.get<std::string>();
      std::cout << "\n";
    }
    return kTrue;
  }

  if (*loops) {
    Owned s;
    if (!word.empty()) {
      if ((st = hont_loop_counts(sys.get(), word.c_str(), z, budget, &s.p)) != HONT_OK) return fail(st);
      auto j = json::parse(s.str());
      const auto& states = j["states"];
      for (const char* kind : {"loop", "highloop", "return"}) {
        if (!j.contains(kind)) continue;
        if (o.lines()) {
          for (std::size_t i = 0; i < states.size(); ++i)
            for (std::size_t k = 0; k < states.size(); ++k)
              std::cout << json{{"kind", kind}, {"from", states[i]}, {"to", states[k]},
                                {"count", j[kind][i][k]}, {"exact", j["exact"]}}
                               .dump()
                        << "\n";
        } else {
          std::cout << kind << ":\n";
          print_matrix(states, j[kind]);
        }
      }
      if (!o.lines()) std::cout << "exact: " << (j["exact"].get<bool>() ? "yes" : "no") << "\n";
      return j["exact"].get<bool>() ? kTrue : kBudget;
    }
    if (from.empty() || to.empty() || symbol.empty()) {
      std::cerr << "loops: give --word, or --from, --to and --symbol\n";
      return kUsage;
    }
    if ((st = hont_loop_grammar(sys.get(), from.c_str(), to.c_str(), symbol.c_str(), shortest, &s.p)) != HONT_OK)
      return fail(st);
    auto j = json::parse(s.str());
    if (o.lines()) {
      for (const auto& w : j["words"]) std::cout << json{{"loop", w}}.dump() << "\n";
    } else {
      std::cout << j["grammar"].get<std::string>();
      std::cout << "shortest:\n";
      for (const auto& w : j["words"]) std::cout << "  [" << w.get<std::string>() << "]\n";
    }
    return kTrue;
  }

  if (*shrink) {
    Owned s;
    if ((st = hont_shrink(sys.get(), steps.c_str(), z, max_height, budget, &s.p)) != HONT_OK) return fail(st);
    auto j = json::parse(s.str());
    if (o.lines()) std::cout << j.dump() << "\n";
    else std::cout << "[" << j["run"].get<std::string>() << "] length " << j["length"].get<std::size_t>()
                   << " (from " << j["input_length"].get<std::size_t>() << ", bound "
                   << j["bound"].get<std::string>() << ")\n";
    return kTrue;
  }

  if (*wtype) {
    hont_verdict v;
    if ((st = hont_word_equiv(sys.get(), w1.c_str(), w2.c_str(), n, z, budget, &v)) != HONT_OK) return fail(st);
    const char* name = v == HONT_EQUIVALENT ? "equivalent" : v == HONT_DISTINCT ? "distinct" : "indeterminate";
    if (o.lines()) std::cout << json{{"verdict", name}}.dump() << "\n";
    else std::cout << name << "\n";
    return v == HONT_EQUIVALENT ? kTrue : v == HONT_DISTINCT ? kFalse : kBudget;
  }

  if (*bounds) {
    Owned s;
    if ((st = hont_bounds(sys.get(), n, bl, bn1, bn2, z, classes.c_str(), lambda.c_str(), &s.p)) != HONT_OK)
      return fail(st);
    auto j = json::parse(s.str());
    for (const auto& lv : j["levels"]) {
      if (o.lines()) {
        std::cout << lv.dump() << "\n";
      } else {
        std::cout << "n=" << lv["n"].get<unsigned>() << " l=" << lv["l"].get<std::string>()
                  << " n1=" << lv["n1"].get<std::string>() << " n2=" << lv["n2"].get<std::string>()
                  << "\n  height " << lv["height"].get<std::string>() << "\n  width  "
                  << lv["width"].get<std::string>() << "\n  length " << lv["length"].get<std::string>() << "\n";
      }
    }
    if (!o.lines())
      std::cout << "classes: " << j["classes"].get<std::string>() << "\nloop lengths: "
                << j["lambda"].get<std::string>() << "\n";
    return kTrue;
  }

  if (*check) {
    int result = 0;
    Owned info;
    st = hont_check(sys.get(), formula.c_str(), mode.c_str(), caps.c_str(), check_budget, &result, &info.p);
    if (st != HONT_OK) {
      if (st == HONT_E_SYNTAX) std::cerr << "formula column " << hont_last_error_position() << ": ";
      return fail(st);
    }
    auto j = json::parse(info.str());
    if (o.lines()) std::cout << j.dump() << "\n";
    else std::cout << (result ? "true" : "false") << "\n";
    return result ? kTrue : kFalse;
  }
  return kUsage;
}
