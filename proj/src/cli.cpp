#include "ciq/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "ciq/causal.hpp"
#include "ciq/closure.hpp"
#include "ciq/estimand.hpp"
#include "ciq/graph.hpp"
#include "ciq/io.hpp"
#include "ciq/query.hpp"
#include "ciq/setops.hpp"
#include "ciq/table.hpp"

namespace ciq {

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw error(errc::io_failure, "cannot open " + path);
  f << text;
  f.flush();
  if (!f) throw error(errc::io_failure, "cannot write " + path);
}

// splits on spaces and commas; "a,b c" -> {a, b, c}
std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int lookup(const universe& u, const std::string& name) {
  int v = u.find(name);
  if (v < 0) throw error(errc::unknown_variable, "unknown variable " + name);
  return v;
}

std::string names_of_set(const universe& u, const varset& s) {
  std::string out;
  s.for_each([&](int v) {
    if (!out.empty()) out += ' ';
    out += u.names[v];
  });
  return out;
}

elementary_model load_input_model(const std::string& path, bool close_it) {
  elementary_model m = load_model_file(path);
  if (close_it) {
    m.closed = false;
    close_elementary(m);
  }
  return m;
}

void report_model(std::ostream& out, const elementary_model& m) {
  out << "level=" << axiom_level_name(m.level) << "\n";
  out << "symmetric=" << (m.symmetric ? "true" : "false") << "\n";
  out << "stored=" << m.size() << "\n";
  out << "elementary=" << m.directed_size() << "\n";
}

std::string grid_text(const grid& g, const universe& u) {
  std::string s;
  for (auto v : g.rows) {
    if (!s.empty()) s += ' ';
    s += u.names[v];
  }
  s += " ;";
  for (auto v : g.cols) s += ' ' + u.names[v];
  if (!g.K.empty()) s += " | " + names_of_set(u, g.K);
  if (!g.C.kv.empty()) {
    s += " @";
    for (auto [var, val] : g.C.kv) s += ' ' + u.names[var] + '=' + u.domains[var][val];
  }
  return s;
}

// graph node names become the observed base variables of the regime view
structural_regime_view view_of_graph(const named_dag& nd) {
  structural_model sm;
  sm.g = nd.g;
  sm.names = nd.names;
  sm.latent = nd.latent;
  return structural_regime_view(std::move(sm));
}

varset observed_set(const structural_regime_view& rv, const std::vector<std::string>& specs) {
  const universe& u = rv.regime_universe();
  varset s;
  for (const auto& spec : specs)
    for (const auto& name : split_names(spec)) {
      int v = lookup(u, name);
      if (v >= rv.observed_count())
        throw error(errc::invalid_sets, name + " is not an observed variable");
      s.set(v);
    }
  return s;
}

std::map<std::string, std::string> env_of_bindings(const std::vector<std::string>& binds) {
  std::map<std::string, std::string> env;
  for (const auto& b : binds) {
    auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == b.size())
      throw error(errc::syntax_error, "expected name=value, got '" + b + "'");
    env[b.substr(0, eq)] = b.substr(eq + 1);
  }
  return env;
}

std::string format_value(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

struct cli_state {
  std::ostream& out;
  explicit cli_state(std::ostream& o) : out(o) {}

  // shared option storage; each subcommand reads only what it registered
  std::string in_path, in_path_b, out_path, graph_path, table_path;
  std::string axioms, ordering, mode, aux_name = "aux", dot_path, estimand_text;
  std::vector<std::string> statement, do_names, target_names, given_names;
  std::vector<std::string> stage_specs, pool_specs, bindings;
  bool close_input = false, nonsymmetric = false, canonical_half = false;
  bool no_propagate = false, no_natural = false;
  int depth = -1, max_nodes = 8;
  std::uint64_t max_steps = 0, seed = 0;
  double eps = 1e-9;

  axiom_level level_arg(axiom_level fallback) const {
    if (axioms.empty()) return fallback;
    auto l = axiom_level_from_name(axioms);
    if (!l) throw error(errc::syntax_error, "unknown axiom level " + axioms);
    return *l;
  }

  named_dag input_dag() const { return load_dag_file(graph_path); }

  void write_dag_outputs(const named_dag& nd) const {
    if (!out_path.empty()) write_file(out_path, serialize_dag(nd));
    if (!dot_path.empty()) write_file(dot_path, dot_of_dag(nd));
  }

  void report_dag(const named_dag& nd) const {
    for (int to = 0; to < nd.g.n; ++to)
      nd.g.pa[to].for_each(
          [&](int from) { out << "edge=" << nd.names[from] << " -> " << nd.names[to] << "\n"; });
    out << "edges=" << nd.g.edge_count() << "\n";
  }

  void run_close() const {
    elementary_model m = load_model_file(in_path);
    axiom_level level = level_arg(m.level);
    if (level != m.level) {
      m.level = level;
      m.closed = false;
    }
    close_elementary(m, {max_steps});
    report_model(out, m);
    if (!out_path.empty()) write_file(out_path, serialize_model(m));
  }

  void run_member() const {
    elementary_model m = load_input_model(in_path, close_input);
    std::string body;
    for (const auto& w : statement) {
      if (!body.empty()) body += ' ';
      body += w;
    }
    triplet t = parse_statement_text(body, *m.u);
    out << "member=" << (is_member(m, t) ? "true" : "false") << "\n";
  }

  void run_dominant() const {
    elementary_model m = load_input_model(in_path, close_input);
    auto ds = dominant_triplets(m, nonsymmetric);
    for (const auto& t : ds) out << "dominant=" << to_text(t, *m.u) << "\n";
    out << "count=" << ds.size() << "\n";
  }

  void run_grids() const {
    elementary_model m = load_input_model(in_path, close_input);
    auto gs = maximal_grids(m, canonical_half);
    for (const auto& g : gs) out << "grid=" << grid_text(g, *m.u) << "\n";
    out << "count=" << gs.size() << "\n";
    grid_dag gd = build_grid_dag(m);
    out << "grid-dag-nodes=" << gd.nodes.size() << "\n";
    out << "grid-dag-edges=" << gd.edges.size() << "\n";
    if (!dot_path.empty()) write_file(dot_path, dot_of_grid_dag(gd, *m.u));
  }

  void run_mim() const {
    elementary_model m = load_input_model(in_path, close_input);
    const universe& u = *m.u;
    std::vector<int> order;
    for (const auto& name : split_names(ordering)) order.push_back(lookup(u, name));
    dag g = build_mim(m, order);
    named_dag nd{g, u.names, {}};
    report_dag(nd);
    write_dag_outputs(nd);
  }

  void run_pm() const {
    elementary_model m = load_input_model(in_path, close_input);
    auto r = has_perfect_map(m, max_nodes);
    if (!r) {
      out << "found=false\n";
      return;
    }
    out << "found=true\n";
    std::string names;
    for (int v : r->ordering) {
      if (!names.empty()) names += ' ';
      names += m.u->names[v];
    }
    out << "ordering=" << names << "\n";
    named_dag nd{r->g, m.u->names, {}};
    report_dag(nd);
    write_dag_outputs(nd);
  }

  void run_intersect() const {
    elementary_model a = load_input_model(in_path, close_input);
    elementary_model b = load_input_model(in_path_b, close_input);
    elementary_model c = intersect(a, b);
    report_model(out, c);
    if (!out_path.empty()) write_file(out_path, serialize_model(c));
  }

  void run_union() const {
    elementary_model a = load_input_model(in_path, close_input);
    elementary_model b = load_input_model(in_path_b, close_input);
    elementary_model c;
    if (mode == "context")
      c = union_with_context(a, b, aux_name);
    else if (mode == "min")
      c = union_min_superset(a, b);
    else if (mode == "max")
      c = union_max_subset(a, b);
    else
      throw error(errc::syntax_error, "union mode must be context, min or max");
    report_model(out, c);
    if (!out_path.empty()) write_file(out_path, serialize_model(c));
  }

  void run_identify() const {
    structural_regime_view rv = view_of_graph(input_dag());
    varset X = observed_set(rv, do_names);
    varset Y = observed_set(rv, target_names);
    varset W = observed_set(rv, given_names);
    identify_result r = identify(rv, X, Y, W, depth);
    switch (r.st) {
      case identify_result::status::found:
        out << "status=found\n";
        out << "estimand=" << to_text(r.e) << "\n";
        break;
      case identify_result::status::none:
        out << "status=none\n";
        break;
      case identify_result::status::depth_exhausted:
        out << "status=depth-exhausted\n";
        break;
    }
  }

  void run_plan() const {
    structural_regime_view rv = view_of_graph(input_dag());
    std::vector<varset> stages, pools;
    for (const auto& spec : stage_specs) stages.push_back(observed_set(rv, {spec}));
    for (const auto& spec : pool_specs) pools.push_back(observed_set(rv, {spec}));
    if (pools.empty()) pools.resize(stages.size());
    varset Y = observed_set(rv, target_names);
    varset W = observed_set(rv, given_names);
    auto r = evaluate_plan(rv, stages, pools, Y, W, !no_natural);
    if (!r) {
      out << "status=none\n";
      return;
    }
    out << "status=found\n";
    const universe& u = rv.regime_universe();
    for (std::size_t k = 0; k < r->covariates.size(); ++k)
      out << "stage" << k + 1 << "-covariates=" << names_of_set(u, r->covariates[k]) << "\n";
    out << "estimand=" << to_text(r->e) << "\n";
  }

  void run_from_table() const {
    joint_table t = load_table_file(table_path, eps);
    axiom_level level = level_arg(axiom_level::semigraphoid);
    elementary_model m = extract_model_from_table(t, level, eps, !no_propagate);
    report_model(out, m);
    if (!out_path.empty()) write_file(out_path, serialize_model(m));
  }

  void run_eval_estimand() const {
    joint_table t = load_table_file(table_path, eps);
    estimand e = parse_estimand(estimand_text);
    double v = evaluate_estimand(e, t, env_of_bindings(bindings));
    out << "value=" << format_value(v) << "\n";
  }

  void run_random_table() const {
    named_dag nd = input_dag();
    structural_model sm{nd.g, nd.names, nd.latent, {}};
    std::mt19937_64 rng(seed);
    randomize_cpts(sm, rng);
    joint_table t = observational_table(sm);
    out << "variables=" << t.vars.size() << "\n";
    out << "rows=" << t.rows() << "\n";
    if (!out_path.empty()) write_file(out_path, save_table(t));
  }
};

}  // namespace

int cli_run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"independence models represented by elementary triplets"};
  app.require_subcommand(1);
  cli_state st(out);

  auto add_in = [&](CLI::App* cmd) {
    cmd->add_option("--in", st.in_path, "input model file")->required();
    cmd->add_flag("--close", st.close_input, "close the input under its axioms after loading");
  };
  auto add_two_models = [&](CLI::App* cmd) {
    cmd->add_option("a", st.in_path, "first model file")->required();
    cmd->add_option("b", st.in_path_b, "second model file")->required();
    cmd->add_flag("--close", st.close_input, "close the inputs under their axioms after loading");
    cmd->add_option("--out", st.out_path, "write the resulting model here");
  };
  auto add_graph = [&](CLI::App* cmd) {
    cmd->add_option("--graph", st.graph_path, "graph file")->required();
  };

  CLI::App* close_cmd = app.add_subcommand("close", "close a model under its axiom level");
  close_cmd->add_option("--in", st.in_path, "input model file")->required();
  close_cmd->add_option("--axioms", st.axioms, "override the file's axiom level");
  close_cmd->add_option("--out", st.out_path, "write the closed model here");
  close_cmd->add_option("--max-steps", st.max_steps,
                        "abort after this many closure steps (0 = unlimited)");
  close_cmd->callback([&] { st.run_close(); });

  CLI::App* member_cmd = app.add_subcommand("member", "test a statement against a closed model");
  add_in(member_cmd);
  member_cmd->add_option("statement", st.statement, "statement, e.g. \"a b ; c | d\"")
      ->required()
      ->expected(-1);
  member_cmd->callback([&] { st.run_member(); });

  CLI::App* dominant_cmd = app.add_subcommand("dominant", "list the dominant triplets");
  add_in(dominant_cmd);
  dominant_cmd->add_flag("--nonsymmetric", st.nonsymmetric,
                         "one representative per mirror pair");
  dominant_cmd->callback([&] { st.run_dominant(); });

  CLI::App* grids_cmd = app.add_subcommand("grids", "list maximal grids and the grid layout");
  add_in(grids_cmd);
  grids_cmd->add_flag("--canonical-half", st.canonical_half,
                      "search only the canonically ordered triplets");
  grids_cmd->add_option("--dot", st.dot_path, "write the grid layout in dot form here");
  grids_cmd->callback([&] { st.run_grids(); });

  CLI::App* mim_cmd =
      app.add_subcommand("mim", "minimal independence map for a variable ordering");
  add_in(mim_cmd);
  mim_cmd->add_option("--ordering", st.ordering, "variable names, e.g. \"a b c\"")->required();
  mim_cmd->add_option("--out", st.out_path, "write the graph file here");
  mim_cmd->add_option("--dot", st.dot_path, "write the graph in dot form here");
  mim_cmd->callback([&] { st.run_mim(); });

  CLI::App* pm_cmd = app.add_subcommand("pm", "search for a perfect map of the model");
  add_in(pm_cmd);
  pm_cmd->add_option("--max-nodes", st.max_nodes,
                     "refuse universes above this many variables (0 = no limit)");
  pm_cmd->add_option("--out", st.out_path, "write the graph file here");
  pm_cmd->add_option("--dot", st.dot_path, "write the graph in dot form here");
  pm_cmd->callback([&] { st.run_pm(); });

  CLI::App* intersect_cmd = app.add_subcommand("intersect", "intersection of two models");
  add_two_models(intersect_cmd);
  intersect_cmd->callback([&] { st.run_intersect(); });

  CLI::App* union_cmd = app.add_subcommand("union", "union of two models");
  add_two_models(union_cmd);
  union_cmd->add_option("--mode", st.mode, "context | min | max")->required();
  union_cmd->add_option("--aux", st.aux_name, "context variable name for --mode context");
  union_cmd->callback([&] { st.run_union(); });

  CLI::App* identify_cmd =
      app.add_subcommand("identify", "observational estimand for an interventional query");
  add_graph(identify_cmd);
  identify_cmd->add_option("--do", st.do_names, "intervened variables")->required();
  identify_cmd->add_option("--target", st.target_names, "outcome variables")->required();
  identify_cmd->add_option("--given", st.given_names, "observed context variables");
  identify_cmd->add_option("--depth", st.depth, "recursion budget (-1 = variable count)");
  identify_cmd->callback([&] { st.run_identify(); });

  CLI::App* plan_cmd = app.add_subcommand("plan", "estimand for a sequential treatment plan");
  add_graph(plan_cmd);
  plan_cmd->add_option("--stage", st.stage_specs, "treatment set per stage, in order")
      ->required();
  plan_cmd->add_option("--pool", st.pool_specs,
                       "candidate covariates per stage (default: none)");
  plan_cmd->add_option("--target", st.target_names, "outcome variables")->required();
  plan_cmd->add_option("--given", st.given_names, "observed context variables");
  plan_cmd->add_flag("--no-natural-check", st.no_natural,
                     "skip the covariate naturalness requirement");
  plan_cmd->callback([&] { st.run_plan(); });

  CLI::App* from_table_cmd =
      app.add_subcommand("from-table", "extract the independence model of a joint table");
  from_table_cmd->add_option("--table", st.table_path, "joint table CSV")->required();
  from_table_cmd->add_option("--axioms", st.axioms, "closure level (default semigraphoid)");
  from_table_cmd->add_option("--eps", st.eps, "numeric tolerance");
  from_table_cmd->add_flag("--no-propagate", st.no_propagate,
                           "test every candidate numerically, skipping no derivable ones");
  from_table_cmd->add_option("--out", st.out_path, "write the extracted model here");
  from_table_cmd->callback([&] { st.run_from_table(); });

  CLI::App* eval_cmd = app.add_subcommand("eval-estimand", "evaluate an estimand on a table");
  eval_cmd->add_option("--table", st.table_path, "joint table CSV")->required();
  eval_cmd->add_option("--estimand", st.estimand_text, "estimand text")->required();
  eval_cmd->add_option("--bind", st.bindings, "free-variable binding name=value");
  eval_cmd->add_option("--eps", st.eps, "table validation tolerance");
  eval_cmd->callback([&] { st.run_eval_estimand(); });

  CLI::App* random_cmd = app.add_subcommand(
      "random-table", "observational table of a graph under random positive CPTs");
  add_graph(random_cmd);
  random_cmd->add_option("--seed", st.seed, "random seed");
  random_cmd->add_option("--out", st.out_path, "write the table CSV here");
  random_cmd->callback([&] { st.run_random_table(); });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const error& e) {
    err << "error=" << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ciq
