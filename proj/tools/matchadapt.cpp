// matchadapt: stable matching adaptation from the command line.
//
//   matchadapt check <instance> <matching> [--notion strict|weak|strong]
//   matchadapt rotations <instance> [--dot out.dot]
//   matchadapt adapt <instance> [m1] [--query q] [--forced a,b]... [--forbidden a,b]... [--k N]
//   matchadapt gen random|is-gadget|ls-forced-gadget|ls-forbidden-gadget ...
//
// Exit codes: 0 success, 1 infeasible or unstable, 2 input error, 3 resource cap.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "matchadapt/adapt_sm.hpp"
#include "matchadapt/adapt_sr.hpp"
#include "matchadapt/gen.hpp"
#include "matchadapt/io.hpp"
#include "matchadapt/oracle.hpp"
#include "matchadapt/rotations.hpp"

namespace ma = matchadapt;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;
constexpr int kCapExceeded = 3;

std::optional<long long> env_number(const char* name) {
  const char* value = std::getenv(name);
  if (!value || !*value) return std::nullopt;
  char* end = nullptr;
  const long long parsed = std::strtoll(value, &end, 10);
  if (*end != '\0' || parsed <= 0) throw std::invalid_argument(std::string(name) + " must be a positive integer");
  return parsed;
}

ma::OracleOptions oracle_options() {
  ma::OracleOptions options;
  if (auto cap = env_number("MATCHADAPT_ORACLE_CAP")) options.cap = static_cast<int>(*cap);
  return options;
}

ma::PosetOptions poset_options() {
  ma::PosetOptions options;
  if (auto cap = env_number("MATCHADAPT_TABLE_CAP")) options.table_cap = static_cast<std::size_t>(*cap);
  return options;
}

ma::Instance load_instance(const std::string& path) { return ma::parse_instance(ma::read_text_file(path)); }

ma::Notion resolve_notion(const ma::Instance& instance, const std::string& flag) {
  if (flag.empty()) return instance.is_strict() ? ma::Notion::strict : ma::Notion::weak;
  auto notion = ma::parse_notion(flag);
  if (!notion) throw std::invalid_argument("unknown notion '" + flag + "'");
  return *notion;
}

ma::Pair parse_cli_pair(const ma::Instance& instance, const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("pair '" + text + "' must be written as a,b");
  return ma::pair_by_name(instance, text.substr(0, comma), text.substr(comma + 1));
}

void print_matching(const ma::Instance& instance, const ma::Matching& m) {
  std::cout << ma::emit_matching(instance, m);
}

// --- check -----------------------------------------------------------------

struct CheckArgs {
  std::string instance;
  std::string matching;
  std::string notion;
};

int run_check(const CheckArgs& args) {
  const ma::Instance instance = load_instance(args.instance);
  const ma::Matching m = ma::parse_matching(instance, ma::read_text_file(args.matching));
  const ma::Notion notion = resolve_notion(instance, args.notion);
  const auto blocking = ma::blocking_pairs(instance, m, notion);
  if (blocking.empty()) {
    std::cout << "STABLE\n";
    return kOk;
  }
  std::cout << "UNSTABLE " << blocking.size() << " blocking pair" << (blocking.size() == 1 ? "" : "s") << '\n';
  for (ma::Pair p : blocking) std::cout << instance.name(p.first) << ' ' << instance.name(p.second) << '\n';
  return kNegative;
}

// --- rotations -------------------------------------------------------------

struct RotationsArgs {
  std::string instance;
  std::string dot;
};

int run_rotations(const RotationsArgs& args) {
  const ma::Instance instance = load_instance(args.instance);
  const ma::RotationPoset poset = ma::build_rotation_poset(instance, poset_options());
  const auto singular = poset.singular();
  const auto duals = poset.dual_pairs();
  const auto edges = poset.precedence_edges();
  std::cout << "rotations " << poset.size() << '\n'
            << "singular " << singular.size() << '\n'
            << "dual_pairs " << duals.size() << '\n'
            << "precedence_edges " << edges.size() << '\n';
  for (const ma::Rotation& r : poset.rotations()) {
    std::cout << 'r' << r.id << ':';
    for (auto [a, b] : r.cycle) std::cout << " (" << instance.name(a) << ',' << instance.name(b) << ')';
    std::cout << (r.singular ? " singular" : "") << '\n';
  }
  for (auto [x, y] : duals) std::cout << "dual r" << x << " r" << y << '\n';
  for (auto [x, y] : edges) std::cout << "precedes r" << x << " r" << y << '\n';
  if (!args.dot.empty()) ma::write_text_file(args.dot, ma::rotations_dot(poset));
  return kOk;
}

// --- adapt -----------------------------------------------------------------

struct AdaptArgs {
  std::string instance;
  std::string m1;
  std::string query;
  std::vector<std::string> forced;
  std::vector<std::string> forbidden;
  std::optional<long long> k;
  std::string notion;
  bool oracle = false;
  bool verify = false;
  unsigned threads = 1;
};

int run_adapt(const AdaptArgs& args) {
  const ma::Instance instance = load_instance(args.instance);
  ma::AdaptQuery query;
  if (!args.query.empty()) {
    query = ma::parse_query(instance, ma::read_text_file(args.query));
  } else if (!args.m1.empty()) {
    query.m1 = ma::parse_matching(instance, ma::read_text_file(args.m1));
  } else {
    throw std::invalid_argument("adapt needs an M1 file or --query");
  }
  if (!args.query.empty() && !args.m1.empty())
    query.m1 = ma::parse_matching(instance, ma::read_text_file(args.m1));
  for (const auto& text : args.forced) query.forced.push_back(parse_cli_pair(instance, text));
  for (const auto& text : args.forbidden) query.forbidden.push_back(parse_cli_pair(instance, text));
  if (args.k) query.k = *args.k;
  if (query.k < 0) throw std::invalid_argument("k must be non-negative");

  const ma::Notion notion = resolve_notion(instance, args.notion);
  if (!ma::is_stable(instance, query.m1, notion)) {
    std::cout << "M1 is not " << ma::to_string(notion) << "ly stable\n";
    return kNegative;
  }

  std::optional<ma::AdaptResult> result;
  std::string solver;
  if (args.oracle || notion != ma::Notion::strict) {
    solver = "oracle";
    result = ma::oracle_adapt(instance, query, notion, oracle_options());
  } else if (instance.kind() == ma::Kind::marriage) {
    solver = "weights";
    result = ma::adapt_sm(instance, query);
  } else {
    solver = "rotations";
    ma::AdaptOptions options;
    options.poset = poset_options();
    options.threads = args.threads;
    result = ma::adapt(instance, query, options);
  }

  if (args.verify) {
    ma::AdaptOptions options;
    options.poset = poset_options();
    std::optional<ma::AdaptResult> other;
    if (solver == "weights")
      other = ma::adapt(instance, query, options);
    else if (instance.size() <= oracle_options().cap)
      other = ma::oracle_adapt(instance, query, notion, oracle_options());
    else
      throw ma::InstanceTooLarge("--verify needs an instance within the oracle cap");
    if (other.has_value() != result.has_value() || (other && other->delta != result->delta)) {
      std::cerr << "verification failed: solvers disagree\n";
      return kInputError;
    }
    std::cout << "verified\n";
  }

  std::cout << "solver=" << solver << '\n';
  if (!result) {
    std::cout << "INFEASIBLE\n";
    return kNegative;
  }
  print_matching(instance, result->matching);
  std::cout << "delta=" << result->delta << '\n';
  std::cout << "guess=";
  if (result->guessed_pairs.empty()) std::cout << "none";
  for (std::size_t i = 0; i < result->guessed_pairs.size(); ++i) {
    if (i > 0) std::cout << ' ';
    std::cout << ma::format_pair(instance, result->guessed_pairs[i]) << "->" << instance.name(result->guess[i]);
  }
  std::cout << '\n';
  return kOk;
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  int n = 8;
  std::string kind = "sr";
  double ties = 0.0;
  double density = 1.0;
  std::uint64_t seed = 0;
  std::string graph;
  int ell = 0;
  std::string base;
  std::string matching;
  std::string out;
};

void emit_gadget(const ma::GadgetInstance& gadget, const std::string& header, const std::string& out) {
  const std::string instance_text = ma::emit_instance(gadget.instance, header);
  const std::string query_text = ma::emit_query(gadget.instance, gadget.query, header);
  if (out.empty()) {
    std::cout << instance_text << "\n# query\n" << query_text;
    return;
  }
  ma::write_text_file(out + ".pref", instance_text);
  ma::write_text_file(out + ".query", query_text);
  std::cout << "wrote " << out << ".pref and " << out << ".query\n";
}

int run_gen_random(const GenArgs& args) {
  if (args.kind != "sr" && args.kind != "sm") throw std::invalid_argument("--kind must be sr or sm");
  const ma::Kind kind = args.kind == "sr" ? ma::Kind::roommates : ma::Kind::marriage;
  const ma::Instance instance = ma::random_instance(args.n, kind, args.ties, args.density, args.seed);
  const std::string header = "matchadapt gen random --n " + std::to_string(args.n) + " --kind " + args.kind +
                             " --ties " + std::to_string(args.ties) + " --density " + std::to_string(args.density) +
                             " --seed " + std::to_string(args.seed);
  const std::string text = ma::emit_instance(instance, header);
  if (args.out.empty()) {
    std::cout << text;
  } else {
    ma::write_text_file(args.out, text);
    std::cout << "wrote " << args.out << '\n';
  }
  return kOk;
}

int run_gen_is_gadget(const GenArgs& args) {
  const ma::Graph graph = ma::parse_graph(ma::read_text_file(args.graph));
  const auto gadget = ma::independent_set_gadget(graph, args.ell);
  emit_gadget(gadget, "matchadapt gen is-gadget --ell " + std::to_string(args.ell), args.out);
  return kOk;
}

int run_gen_local_search(const GenArgs& args, bool forced) {
  const ma::Instance base = load_instance(args.base);
  const ma::Matching n = ma::parse_matching(base, ma::read_text_file(args.matching));
  const auto gadget = forced ? ma::local_search_forced_gadget(base, n, args.ell)
                             : ma::local_search_forbidden_gadget(base, n, args.ell);
  emit_gadget(gadget,
              std::string("matchadapt gen ") + (forced ? "ls-forced-gadget" : "ls-forbidden-gadget") + " --ell " +
                  std::to_string(args.ell),
              args.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stable roommates and marriage adaptation to forced and forbidden pairs"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Report the blocking pairs of a matching");
  check_cmd->add_option("instance", check.instance, "Instance file (.pref)")->required();
  check_cmd->add_option("matching", check.matching, "Matching file")->required();
  check_cmd->add_option("--notion", check.notion, "strict, weak or strong");

  RotationsArgs rotations;
  auto* rot_cmd = app.add_subcommand("rotations", "Build and summarize the rotation poset");
  rot_cmd->add_option("instance", rotations.instance, "Instance file (.pref)")->required();
  rot_cmd->add_option("--dot", rotations.dot, "Write the rotation digraph in DOT format");

  AdaptArgs adapt;
  auto* adapt_cmd = app.add_subcommand("adapt", "Adapt M1 to forced and forbidden pairs");
  adapt_cmd->add_option("instance", adapt.instance, "Instance file (.pref)")->required();
  adapt_cmd->add_option("m1", adapt.m1, "Matching file with M1");
  adapt_cmd->add_option("--query", adapt.query, "Query file ([m1], [forced], [forbidden], k)");
  adapt_cmd->add_option("--forced", adapt.forced, "Forced pair a,b (repeatable)");
  adapt_cmd->add_option("--forbidden", adapt.forbidden, "Forbidden pair a,b (repeatable)");
  adapt_cmd->add_option("--k", adapt.k, "Budget on |M1 delta M2|");
  adapt_cmd->add_option("--notion", adapt.notion, "strict, weak or strong");
  adapt_cmd->add_flag("--oracle", adapt.oracle, "Solve by exhaustive enumeration");
  adapt_cmd->add_flag("--verify", adapt.verify, "Cross-check against a second solver");
  adapt_cmd->add_option("--threads", adapt.threads, "Worker threads for the guess loop")->check(CLI::PositiveNumber);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate instances");
  gen_cmd->require_subcommand(1);
  auto* random_cmd = gen_cmd->add_subcommand("random", "Random instance");
  random_cmd->add_option("--n", gen.n, "Number of agents")->check(CLI::Range(2, 100000));
  random_cmd->add_option("--kind", gen.kind, "sr or sm");
  random_cmd->add_option("--ties", gen.ties, "Tie probability")->check(CLI::Range(0.0, 1.0));
  random_cmd->add_option("--density", gen.density, "Acceptability density")->check(CLI::Range(0.0, 1.0));
  random_cmd->add_option("--seed", gen.seed, "64-bit seed");
  random_cmd->add_option("--out", gen.out, "Output file (stdout when absent)");

  auto* is_cmd = gen_cmd->add_subcommand("is-gadget", "Independent set reduction");
  is_cmd->add_option("--graph", gen.graph, "Edge list file")->required();
  is_cmd->add_option("--ell", gen.ell, "Independent set size")->required();
  is_cmd->add_option("--out", gen.out, "Output prefix for .pref and .query");

  CLI::App* ls_cmds[2];
  const char* ls_names[2] = {"ls-forced-gadget", "ls-forbidden-gadget"};
  for (int i = 0; i < 2; ++i) {
    ls_cmds[i] = gen_cmd->add_subcommand(ls_names[i], "Local search reduction");
    ls_cmds[i]->add_option("--base", gen.base, "Base marriage instance")->required();
    ls_cmds[i]->add_option("--matching", gen.matching, "Base matching N")->required();
    ls_cmds[i]->add_option("--ell", gen.ell, "Local search radius")->required();
    ls_cmds[i]->add_option("--out", gen.out, "Output prefix for .pref and .query");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*check_cmd) return run_check(check);
    if (*rot_cmd) return run_rotations(rotations);
    if (*adapt_cmd) return run_adapt(adapt);
    if (*random_cmd) return run_gen_random(gen);
    if (*is_cmd) return run_gen_is_gadget(gen);
    if (*ls_cmds[0]) return run_gen_local_search(gen, true);
    if (*ls_cmds[1]) return run_gen_local_search(gen, false);
  } catch (const ma::NoStableMatching& e) {
    std::cout << e.what() << '\n';
    return kNegative;
  } catch (const ma::NotStable& e) {
    std::cout << e.what() << '\n';
    return kNegative;
  } catch (const ma::InstanceTooLarge& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const ma::ResourceExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const ma::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
