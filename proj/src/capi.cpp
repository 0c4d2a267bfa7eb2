#include "hont/hont.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <new>
#include <sstream>

#include "hont/analysis.hpp"
#include "hont/bounds.hpp"
#include "hont/error.hpp"
#include "hont/formula.hpp"
#include "hont/grammar.hpp"
#include "hont/modelcheck.hpp"
#include "hont/npt.hpp"
#include "hont/wordtypes.hpp"

struct hont_system {
  hont::PushdownSystem sys;
};

namespace {

using json = nlohmann::json;

thread_local std::string g_error;
thread_local std::size_t g_error_pos = 0;

hont_status map_code(hont::ErrorCode c) {
  using hont::ErrorCode;
  switch (c) {
    case ErrorCode::Undefined: return HONT_E_UNDEFINED;
    case ErrorCode::InvalidArgument: return HONT_E_INVALID_ARGUMENT;
    case ErrorCode::NotAPrefix: return HONT_E_NOT_A_PREFIX;
    case ErrorCode::Inapplicable: return HONT_E_INAPPLICABLE;
    case ErrorCode::EndpointMismatch: return HONT_E_ENDPOINT_MISMATCH;
    case ErrorCode::Parse: return HONT_E_PARSE;
    case ErrorCode::LevelUnsupported: return HONT_E_LEVEL_UNSUPPORTED;
    case ErrorCode::Unreachable: return HONT_E_UNREACHABLE;
    case ErrorCode::BudgetExhausted: return HONT_E_BUDGET_EXHAUSTED;
    case ErrorCode::PreconditionViolated: return HONT_E_PRECONDITION;
    case ErrorCode::SignatureMismatch: return HONT_E_SIGNATURE_MISMATCH;
    case ErrorCode::SizeLimit: return HONT_E_SIZE_LIMIT;
    case ErrorCode::Syntax: return HONT_E_SYNTAX;
  }
  return HONT_E_INTERNAL;
}

template <class F>
hont_status guard(F&& f) {
  g_error.clear();
  g_error_pos = 0;
  try {
    f();
    return HONT_OK;
  } catch (const hont::ParseError& e) {
    g_error = e.what();
    g_error_pos = e.where();
    return map_code(e.code());
  } catch (const hont::Error& e) {
    g_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return HONT_E_SIZE_LIMIT;
  } catch (const std::exception& e) {
    g_error = e.what();
    return HONT_E_INTERNAL;
  }
}

hont_status null_arg(const char* what) {
  g_error = std::string("null argument: ") + what;
  return HONT_E_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

std::string text(const char* s) { return s ? std::string(s) : std::string(); }

hont::Run run_of(const hont::PushdownSystem& sys, const char* steps) {
  auto st = hont::parse_steps(text(steps));
  return hont::Run::replay(sys, sys.initial_configuration(), st);
}

json counts_json(const hont::PushdownSystem& sys, const hont::CountFunction& c) {
  json rows = json::array();
  for (hont::StateId q = 0; q < sys.num_states(); ++q) {
    json row = json::array();
    for (hont::StateId r = 0; r < sys.num_states(); ++r) row.push_back(c.get(q, r));
    rows.push_back(row);
  }
  return rows;
}

std::size_t parse_size(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw hont::Error(hont::ErrorCode::InvalidArgument, std::string("bad ") + what + " '" + s + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

hont::BoundInputs bound_inputs(const hont::PushdownSystem& sys, unsigned z, const std::string& classes,
                               const std::string& lambda, std::size_t budget) {
  hont::BoundInputs in;
  in.z = z;
  if (classes.empty() || classes == "observed") {
    in.classes = hont::ClassCounts::observed(sys, z, 3, 4, budget);
  } else {
    in.classes = hont::ClassCounts::constant(hont::BigInt(parse_size(classes, "class count")));
  }
  if (lambda.empty() || lambda == "measured") {
    in.lambda = hont::loop_length_table(sys, z, 3, budget);
    in.lambda_source = std::string("measured up to height 3") + (in.lambda.complete ? "" : ", incomplete");
  } else {
    auto parts = split(lambda, ',');
    if (parts.size() != 3) throw hont::Error(hont::ErrorCode::InvalidArgument, "lambda must be VALUE,M,N");
    in.lambda = hont::LengthBoundTable::constant(z, parse_size(parts[0], "lambda"), parse_size(parts[1], "m"),
                                                 parse_size(parts[2], "n"));
    in.lambda_source = "fixed " + lambda;
  }
  return in;
}

}  // namespace

extern "C" {

const char* hont_status_name(hont_status s) {
  switch (s) {
    case HONT_OK: return "ok";
    case HONT_E_UNDEFINED: return "undefined";
    case HONT_E_INVALID_ARGUMENT: return "invalid-argument";
    case HONT_E_NOT_A_PREFIX: return "not-a-prefix";
    case HONT_E_INAPPLICABLE: return "inapplicable";
    case HONT_E_ENDPOINT_MISMATCH: return "endpoint-mismatch";
    case HONT_E_PARSE: return "parse";
    case HONT_E_LEVEL_UNSUPPORTED: return "level-unsupported";
    case HONT_E_UNREACHABLE: return "unreachable";
    case HONT_E_BUDGET_EXHAUSTED: return "budget-exhausted";
    case HONT_E_PRECONDITION: return "precondition";
    case HONT_E_SIGNATURE_MISMATCH: return "signature-mismatch";
    case HONT_E_SIZE_LIMIT: return "size-limit";
    case HONT_E_SYNTAX: return "syntax";
    case HONT_E_IO: return "io";
    case HONT_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* hont_last_error(void) { return g_error.c_str(); }
size_t hont_last_error_position(void) { return g_error_pos; }
void hont_string_free(char* s) { std::free(s); }

hont_status hont_system_parse(const char* txt, hont_system** out) {
  if (!txt) return null_arg("text");
  if (!out) return null_arg("out");
  return guard([&] { *out = new hont_system{hont::parse_system(txt)}; });
}

hont_status hont_system_load(const char* path, hont_system** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  std::ifstream in(path);
  if (!in) {
    g_error = std::string("cannot open '") + path + "'";
    return HONT_E_IO;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return guard([&] { *out = new hont_system{hont::parse_system(ss.str())}; });
}

void hont_system_free(hont_system* sys) { delete sys; }

hont_status hont_system_serialize(const hont_system* sys, char** out) {
  if (!sys || !out) return null_arg("system/out");
  return guard([&] { *out = dup(hont::serialize_system(sys->sys)); });
}

hont_status hont_system_info(const hont_system* sys, int* level, size_t* states, size_t* transitions) {
  if (!sys) return null_arg("system");
  if (level) *level = sys->sys.level();
  if (states) *states = sys->sys.num_states();
  if (transitions) *transitions = sys->sys.transitions().size();
  return HONT_OK;
}

hont_status hont_run(const hont_system* sys, const char* steps, char** out) {
  if (!sys || !out) return null_arg("system/out");
  return guard([&] {
    const auto& s = sys->sys;
    auto r = run_of(s, steps);
    json j;
    j["length"] = r.length();
    json cs = json::array();
    for (std::size_t i = 0; i <= r.length(); ++i) {
      const auto& c = r.at(i);
      json e;
      e["position"] = i;
      e["state"] = s.states()[c.state];
      e["stack"] = hont::format_stack(s.alphabet(), c.stack);
      if (i > 0) e["transition"] = r.steps()[i - 1];
      cs.push_back(e);
    }
    j["configurations"] = cs;
    *out = dup(j.dump());
  });
}

hont_status hont_tree(const hont_system* sys, size_t depth, int dot, char** out) {
  if (!sys || !out) return null_arg("system/out");
  return guard([&] {
    const auto& s = sys->sys;
    auto t = hont::truncate(s, depth);
    if (dot) {
      *out = dup(hont::to_dot(s, t));
      return;
    }
    std::string txt;
    for (const auto& n : t.nodes) {
      txt += hont::dot_node_name(n) + " " + s.states()[n.back().state] + " " +
             hont::format_stack(s.alphabet(), n.back().stack) + "\n";
    }
    for (const auto& e : t.edges) {
      if (e.kind == hont::EdgeKind::Plus) continue;
      txt += hont::dot_node_name(t.nodes[e.from]) + (e.kind == hont::EdgeKind::Delta ? " -> " : " ~> ") +
             hont::dot_node_name(t.nodes[e.to]);
      if (e.kind == hont::EdgeKind::Delta) txt += " [" + std::to_string(e.label) + "]";
      txt += "\n";
    }
    *out = dup(txt);
  });
}

hont_status hont_ancestors(const hont_system* sys, const char* steps, unsigned level, char** out) {
  if (!sys || !out) return null_arg("system/out");
  return guard([&] {
    auto r = run_of(sys->sys, steps);
    json arr = json::array();
    for (const auto& a : hont::relevant_ancestors(r, level)) {
      std::vector<hont::TransitionId> st(r.steps().begin(), r.steps().begin() + static_cast<std::ptrdiff_t>(a.length));
      arr.push_back({{"run", hont::format_steps(st)}, {"length", a.length}, {"level", a.level}});
    }
    *out = dup(json{{"ancestors", arr}}.dump());
  });
}

hont_status hont_milestones(const hont_system* sys, const char* stack, char** out) {
  if (!sys || !out || !stack) return null_arg("system/stack/out");
  return guard([&] {
    const auto& a = sys->sys.alphabet();
    auto s = hont::parse_stack(a, 2, stack);
    json ms = json::array();
    for (const auto& m : hont::generalized_milestones(s))
      ms.push_back({{"stack", hont::format_stack(a, m.stack)}, {"flagged", m.flagged}});
    json ops = json::array();
    for (const auto& op : hont::minimal_op_sequence(s)) ops.push_back(hont::format_op(a, op));
    *out = dup(json{{"milestones", ms}, {"operations", ops}}.dump());
  });
}

hont_status hont_loop_counts(const hont_system* sys, const char* word, unsigned z, size_t budget, char** out) {
  if (!sys || !out || !word) return null_arg("system/word/out");
  return guard([&] {
    const auto& s = sys->sys;
    auto w = hont::parse_word(s.alphabet(), word);
    json j;
    j["word"] = hont::format_word(s.alphabet(), w);
    j["threshold"] = z;
    j["states"] = s.states();
    bool exact = true;
    for (auto k : {hont::RunKind::Loop, hont::RunKind::HighLoop, hont::RunKind::Return}) {
      auto c = hont::count_runs(s, w, k, z, budget);
      j[hont::run_kind_name(k)] = counts_json(s, c.counts);
      exact = exact && c.exact;
    }
    j["exact"] = exact;
    *out = dup(j.dump());
  });
}

hont_status hont_loop_grammar(const hont_system* sys, const char* from, const char* to, const char* symbol, size_t k,
                              char** out) {
  if (!sys || !out || !from || !to || !symbol) return null_arg("system/from/to/symbol/out");
  return guard([&] {
    const auto& s = sys->sys;
    auto g = hont::loops_to_cfl(s, s.state_id(from), s.state_id(to), s.alphabet().lookup(symbol));
    auto words = hont::cfl_shortest_words(g, k);
    json ws = json::array();
    for (const auto& w : words.words) ws.push_back(hont::format_steps(w));
    json j;
    j["nonterminals"] = g.nonterminals.size();
    j["productions"] = g.productions.size();
    j["grammar"] = g.to_string();
    j["words"] = ws;
    j["complete"] = words.complete;
    *out = dup(j.dump());
  });
}

hont_status hont_shrink(const hont_system* sys, const char* steps, unsigned z, size_t max_height, size_t budget,
                        char** out) {
  if (!sys || !out) return null_arg("system/out");
  return guard([&] {
    const auto& s = sys->sys;
    auto r = run_of(s, steps);
    auto table = hont::loop_length_table(s, z, max_height, budget);
    auto shrunk = hont::shrink_run(s, r, {}, z, table, hont::ShrinkMode::FromInitial);
    json j;
    j["input_length"] = r.length();
    j["run"] = hont::format_steps(shrunk.steps());
    j["length"] = shrunk.length();
    j["bound"] = hont::shrink_bound(r.back().stack, table, hont::ShrinkMode::FromInitial).str();
    j["table_complete"] = table.complete;
    *out = dup(j.dump());
  });
}

hont_status hont_word_equiv(const hont_system* sys, const char* w1, const char* w2, unsigned n, unsigned z,
                            size_t budget, hont_verdict* verdict) {
  if (!sys || !w1 || !w2 || !verdict) return null_arg("system/words/verdict");
  return guard([&] {
    const auto& a = sys->sys.alphabet();
    auto v = hont::word_equiv(sys->sys, hont::parse_word(a, w1), hont::parse_word(a, w2), n, z, budget);
    *verdict = v == hont::Verdict::Equivalent ? HONT_EQUIVALENT
               : v == hont::Verdict::Distinct ? HONT_DISTINCT
                                              : HONT_INDETERMINATE;
  });
}

hont_status hont_bounds(const hont_system* sys, unsigned n, unsigned l, unsigned n1, unsigned n2, unsigned z,
                        const char* classes, const char* lambda, char** out) {
  if (!sys || !out) return null_arg("system/out");
  return guard([&] {
    auto in = bound_inputs(sys->sys, z, text(classes), text(lambda), 4096);
    auto t = hont::bound_tables(sys->sys, n, l, n1, n2, in);
    json levels = json::array();
    for (const auto& lv : t.levels) {
      levels.push_back({{"n", lv.n},
                        {"l", lv.l.str()},
                        {"n1", lv.n1.str()},
                        {"n2", lv.n2.str()},
                        {"height", lv.height.str()},
                        {"width", lv.width.str()},
                        {"length", lv.length.str()},
                        {"loc_first", lv.loc_first.str()},
                        {"loc_last", lv.loc_last.str()},
                        {"glob_first", lv.glob_first.str()},
                        {"glob_last", lv.glob_last.str()},
                        {"loop_length", lv.loop_length.str()}});
    }
    json j;
    j["levels"] = levels;
    j["height_word"] = t.height_word.str();
    j["classes"] = t.class_source;
    j["lambda"] = t.lambda_source;
    j["exact"] = t.exact();
    *out = dup(j.dump());
  });
}

hont_status hont_formula_normalize(const char* txt, char** nnf, unsigned* rank) {
  if (!txt) return null_arg("text");
  return guard([&] {
    auto f = hont::normalize(hont::parse_formula(txt));
    if (nnf) *nnf = dup(hont::print_formula(*f.formula));
    if (rank) *rank = f.rank;
  });
}

hont_status hont_check(const hont_system* sys, const char* formula, const char* mode, const char* options,
                       size_t budget, int* result, char** info) {
  if (!sys || !formula || !mode || !result) return null_arg("system/formula/mode/result");
  return guard([&] {
    const auto& s = sys->sys;
    auto norm = hont::normalize(hont::parse_formula(formula));
    auto free = hont::free_variables(*norm.formula);
    free.erase("root");
    if (!free.empty())
      throw hont::Error(hont::ErrorCode::InvalidArgument, "formula has free variable '" + *free.begin() + "'");

    std::map<std::string, std::string> opt;
    for (const auto& kv : split(text(options), ',')) {
      if (kv.empty()) continue;
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw hont::Error(hont::ErrorCode::InvalidArgument, "bad option '" + kv + "'");
      opt[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    auto get = [&](const char* k) -> std::optional<std::size_t> {
      auto it = opt.find(k);
      if (it == opt.end()) return std::nullopt;
      return parse_size(it->second, k);
    };

    json j;
    j["formula"] = hont::print_formula(*norm.formula);
    j["rank"] = norm.rank;
    j["mode"] = mode;
    std::string m = mode;
    bool v;
    if (m.rfind("bounded:", 0) == 0) {
      std::size_t d = parse_size(m.substr(8), "depth");
      v = hont::check_bounded(s, *norm.formula, d);
      j["provenance"] = "truncation of depth " + std::to_string(d);
    } else if (m.rfind("s:uniform:", 0) == 0) {
      std::size_t d = parse_size(m.substr(10), "length");
      auto c = hont::uniform_constraint(s, d, budget);
      v = hont::s_model_check(s, *norm.formula, *c);
      j["provenance"] = c->provenance();
    } else if (m == "s:npt1" || m.rfind("s:npt1:", 0) == 0) {
      std::size_t e = m.size() > 7 ? parse_size(m.substr(7), "expansion") : 0;
      auto c = hont::constraint_1npt(s, norm.rank, e, 0, budget);
      v = hont::s_model_check(s, *norm.formula, *c.constraint);
      j["provenance"] = c.provenance;
    } else if (m == "s:npt2") {
      hont::Caps caps{get("length"), get("height"), get("width")};
      unsigned z = static_cast<unsigned>(get("z").value_or(2));
      auto in = bound_inputs(s, z, opt.count("classes") ? opt["classes"] : "1",
                             opt.count("lambda") ? opt["lambda"] : "1,1,1", 4096);
      auto c = hont::constraint_2npt(s, norm.rank, in, caps, 0, budget);
      v = hont::s_model_check(s, *norm.formula, *c.constraint);
      j["provenance"] = c.provenance;
    } else {
      throw hont::Error(hont::ErrorCode::InvalidArgument, "unknown mode '" + m + "'");
    }
    j["result"] = v;
    *result = v ? 1 : 0;
    if (info) *info = dup(j.dump());
  });
}

}  // extern "C"
