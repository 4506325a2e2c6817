#include "mpdag/cli.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpdag/error.hpp"
#include "mpdag/estimate.hpp"
#include "mpdag/identify.hpp"
#include "mpdag/meek.hpp"
#include "mpdag/oracle.hpp"

namespace mpdag::cli {

namespace {

struct Options {
  std::string graph_path;
  std::string bk_path;
  std::string xs;
  std::string ys;
  std::string format = "text";
  std::uint64_t seed = 1;
  std::size_t models = 20;
  std::string data_path;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Pdag load_graph(const Options& o) {
  Pdag g = parse_graph(slurp(o.graph_path));
  if (!o.bk_path.empty()) return close(g, parse_background_knowledge(slurp(o.bk_path)));
  return g;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) throw ArgumentError("empty name in node list '" + s + "'");
    out.push_back(item.substr(b, item.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

NodeSet node_set(const Pdag& g, const std::vector<std::string>& names) {
  NodeSet out;
  for (const auto& n : names) out.insert(g.id(n));
  return out;
}

RenderStyle style_of(const std::string& f) {
  if (f == "latex") return RenderStyle::latex;
  if (f == "json") return RenderStyle::json;
  return RenderStyle::text;
}

std::string number(double v) {
  std::ostringstream ss;
  ss << std::setprecision(6) << v;
  return ss.str();
}

int cmd_close(const Options& o, std::ostream& out) {
  out << write_graph(close(parse_graph(slurp(o.graph_path)),
                           o.bk_path.empty() ? BackgroundKnowledge{}
                                             : parse_background_knowledge(slurp(o.bk_path))));
  return kOk;
}

int cmd_identify(const Options& o, std::ostream& out, std::ostream& err) {
  const Pdag g = load_graph(o);
  const auto r = identify(g, node_set(g, split_list(o.xs)), node_set(g, split_list(o.ys)));
  const auto style = style_of(o.format);
  if (r.identifiable()) {
    out << render(r.formula(), style) << '\n';
    return kOk;
  }
  const std::string witness = format_path(g, r.witness());
  if (style == RenderStyle::json)
    out << nlohmann::ordered_json{{"identifiable", false}, {"witness", witness}}.dump() << '\n';
  else
    out << "not identifiable\n";
  err << witness << '\n';
  return kNegative;
}

int cmd_factorize(const Options& o, std::ostream& out, std::ostream& err) {
  const Pdag g = load_graph(o);
  const NodeSet xs = o.xs.empty() ? NodeSet{} : node_set(g, split_list(o.xs));
  try {
    out << render(truncated_factorization(g, xs), style_of(o.format)) << '\n';
  } catch (const NotTruncatable& e) {
    out << "not truncatable\n";
    err << e.what() << '\n';
    return kNegative;
  }
  return kOk;
}

int cmd_adjust(const Options& o, std::ostream& out) {
  const Pdag g = load_graph(o);
  const auto r = find_adjustment_set(g, node_set(g, split_list(o.xs)), node_set(g, split_list(o.ys)));
  if (o.format == "json") {
    nlohmann::ordered_json j{{"outcome", to_string(r.outcome)}};
    if (r.outcome == AdjustmentOutcome::set_found) {
      std::vector<std::string> names;
      for (Node v : r.set) names.push_back(g.name(v));
      std::sort(names.begin(), names.end());
      j["set"] = names;
    }
    if (r.reason) j["reason"] = to_string(*r.reason);
    out << j.dump() << '\n';
  } else {
    out << to_string(r.outcome);
    if (r.outcome == AdjustmentOutcome::set_found) out << ' ' << g.set_to_string(r.set);
    if (r.reason) out << ' ' << to_string(*r.reason);
    out << '\n';
  }
  return r.outcome == AdjustmentOutcome::none_exists ? kNegative : kOk;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  const Pdag g = load_graph(o);
  const auto dags = enumerate_dags(g);
  out << dags.size() << '\n';
  for (std::size_t k = 0; k < dags.size(); ++k) out << "# dag " << k + 1 << '\n' << write_graph(dags[k]);
  return kOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const Pdag g = load_graph(o);
  const NodeSet xs = node_set(g, split_list(o.xs));
  const NodeSet ys = node_set(g, split_list(o.ys));
  const auto r = identify(g, xs, ys);
  if (r.identifiable()) {
    const ClassOracle oracle(g, o.models, o.seed);
    const auto rep = oracle.agreement(xs, ys, r.formula());
    out << "identifiable\n"
        << "dags " << rep.dags << '\n'
        << "models " << rep.models << '\n'
        << "max_cross_dag_tv " << number(rep.max_cross_dag_tv) << '\n'
        << "max_formula_deviation " << number(rep.max_formula_deviation) << '\n';
    const bool ok = rep.max_cross_dag_tv < 1e-9 && rep.max_formula_deviation < 1e-9;
    out << (ok ? "agree" : "DEVIATION") << '\n';
    return ok ? kOk : kVerifyFailed;
  }
  const auto w = nonid_witness(g, xs, ys);
  const double cov_diff = (wright_cov(w.first) - wright_cov(w.second)).cwiseAbs().maxCoeff();
  out << "not identifiable\n"
      << "witness " << format_path(g, w.path) << '\n'
      << "delta " << number(w.delta) << '\n'
      << "max_cov_diff " << number(cov_diff) << '\n';
  const bool ok = cov_diff < 1e-12 && w.delta > 0.0;
  out << (ok ? "witnessed" : "DEVIATION") << '\n';
  return ok ? kOk : kVerifyFailed;
}

int cmd_estimate(const Options& o, std::ostream& out, std::ostream& err) {
  const Pdag g = load_graph(o);
  const auto xnames = split_list(o.xs);
  const auto ynames = split_list(o.ys);
  if (ynames.size() != 1) throw ArgumentError("estimate needs exactly one response node");
  const auto r = identify(g, node_set(g, xnames), node_set(g, ynames));
  if (!r.identifiable()) {
    out << "not identifiable\n";
    err << format_path(g, r.witness()) << '\n';
    return kNegative;
  }
  std::ifstream in(o.data_path);
  if (!in) throw Error("cannot read '" + o.data_path + "'");
  const Dataset data = read_csv(in);
  const auto effect = gaussian_effect(r.formula(), data, xnames, ynames.front());
  nlohmann::ordered_json effects = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < effect.nodes.size(); ++i)
    effects[effect.nodes[i]] = effect.values(static_cast<Eigen::Index>(i));
  out << nlohmann::ordered_json{{"response", ynames.front()}, {"effects", effects}}.dump() << '\n';
  return kOk;
}

// X and Y must name distinct nodes; checked before any graph work.
void check_disjoint(const Options& o) {
  const auto xs = o.xs.empty() ? std::vector<std::string>{} : split_list(o.xs);
  for (const auto& y : split_list(o.ys))
    if (std::find(xs.begin(), xs.end(), y) != xs.end())
      throw ArgumentError("X and Y overlap at '" + y + "'");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal effect identification in maximally oriented partially directed graphs"};
  app.require_subcommand(1);
  Options o;

  auto graph_opts = [&](CLI::App* sub) {
    sub->add_option("-g,--graph", o.graph_path, "edge-list graph file")->required();
    sub->add_option("--bk", o.bk_path, "background knowledge file (directed edges)");
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "latex", "json"}));
  };
  auto query_opts = [&](CLI::App* sub, bool x_required) {
    auto* x = sub->add_option("-X", o.xs, "comma-separated intervention nodes");
    if (x_required) x->required();
    sub->add_option("-Y", o.ys, "comma-separated response nodes")->required();
  };

  auto* close_cmd = app.add_subcommand("close", "apply background knowledge and the orientation rules");
  graph_opts(close_cmd);
  auto* identify_cmd = app.add_subcommand("identify", "identification formula or witness path");
  graph_opts(identify_cmd);
  query_opts(identify_cmd, true);
  auto* factorize_cmd = app.add_subcommand("factorize", "truncated factorization for do(X)");
  graph_opts(factorize_cmd);
  factorize_cmd->add_option("-X", o.xs, "comma-separated intervention nodes");
  auto* adjust_cmd = app.add_subcommand("adjust", "find an adjustment set");
  graph_opts(adjust_cmd);
  query_opts(adjust_cmd, true);
  auto* enumerate_cmd = app.add_subcommand("enumerate", "list the DAGs represented by the graph");
  graph_opts(enumerate_cmd);
  auto* verify_cmd = app.add_subcommand("verify", "check the answer against brute-force oracles");
  graph_opts(verify_cmd);
  query_opts(verify_cmd, true);
  verify_cmd->add_option("--seed", o.seed, "model seed");
  verify_cmd->add_option("--models", o.models, "random models")->check(CLI::PositiveNumber);
  auto* estimate_cmd = app.add_subcommand("estimate", "linear-Gaussian effect from data");
  graph_opts(estimate_cmd);
  query_opts(estimate_cmd, true);
  estimate_cmd->add_option("--data", o.data_path, "CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!o.ys.empty()) check_disjoint(o);
    if (close_cmd->parsed()) return cmd_close(o, out);
    if (identify_cmd->parsed()) return cmd_identify(o, out, err);
    if (factorize_cmd->parsed()) return cmd_factorize(o, out, err);
    if (adjust_cmd->parsed()) return cmd_adjust(o, out);
    if (enumerate_cmd->parsed()) return cmd_enumerate(o, out);
    if (verify_cmd->parsed()) return cmd_verify(o, out);
    if (estimate_cmd->parsed()) return cmd_estimate(o, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace mpdag::cli
