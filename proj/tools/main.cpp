#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "levyq/errors.hpp"
#include "run_spec.hpp"

using levyq::cli::Command;
using levyq::cli::RunSpec;

namespace {

struct ModelFlags {
  std::string family;
  std::string config;
  std::vector<std::string> params;
};

void add_model_flags(CLI::App* cmd, ModelFlags& m) {
  cmd->add_option("--model", m.family, "Model family: bm, gamma or cpexp");
  cmd->add_option("--config", m.config, "Model config file (key = value lines)");
  cmd->add_option("--param", m.params, "Model parameter override, e.g. --param d=-1")
      ->take_all();
}

void add_output_flags(CLI::App* cmd, RunSpec& s) {
  cmd->add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output,-o", s.output, "Write the artifact here instead of stdout");
}

void add_phase_flags(CLI::App* cmd, RunSpec& s) {
  cmd->add_option("--t", s.t, "Target time approximated by n exponential phases");
  cmd->add_option("--n", s.n, "Number of phases");
  cmd->add_option("--rates", s.rates, "Explicit phase rates (overrides --t/--n)")
      ->delimiter(',');
  cmd->add_option("--scheme", s.scheme, "Rate perturbation: paper_literal or zero_sum");
  cmd->add_option("--epsilon", s.epsilon, "Rate perturbation scale");
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw levyq::ValidationError("cannot read model config " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return levyq::model_to_entries(levyq::parse_model_config(buf.str()));
}

std::map<std::string, std::string> build_model(const ModelFlags& m) {
  std::map<std::string, std::string> entries{{"family", "bm"}};
  if (!m.config.empty()) entries = read_config_file(m.config);
  if (!m.family.empty()) {
    if (!m.config.empty() && entries["family"] != m.family) {
      throw levyq::ValidationError("--model conflicts with the family in " + m.config);
    }
    entries["family"] = m.family;
  }
  for (const auto& p : m.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw levyq::ValidationError("--param expects key=value, got '" + p + "'");
    }
    entries[p.substr(0, eq)] = p.substr(eq + 1);
  }
  return entries;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transient workload of reflected Levy queues at exponential and Coxian epochs"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  std::string spec_path;
  bool emit_spec = false;
  app.add_option("--spec", spec_path, "Run a JSON run spec instead of flags");
  app.add_flag("--emit-spec", emit_spec, "Print the resolved run spec as JSON and exit");

  RunSpec spec;
  ModelFlags model;

  auto* lst = app.add_subcommand("lst", "Transform E_x exp(-alpha Q) at a phase-sum time");
  add_model_flags(lst, model);
  add_phase_flags(lst, spec);
  add_output_flags(lst, spec);
  lst->add_option("--x", spec.x, "Initial workload");
  lst->add_option("--alpha", spec.alphas, "Transform argument(s)")->delimiter(',');
  lst->add_option("--mc-paths", spec.mc_paths, "Add a Monte Carlo estimate with this many paths");
  lst->add_option("--seed", spec.seed, "Monte Carlo seed");
  lst->add_option("--step", spec.step, "Monte Carlo time step");

  auto* density = app.add_subcommand("density", "Workload density for spectrally negative input");
  add_model_flags(density, model);
  add_phase_flags(density, spec);
  add_output_flags(density, spec);
  density->add_option("--x", spec.x, "Initial workload");
  density->add_option("--y-max", spec.y_max, "Grid end (0 picks the exponential tail cutoff)");
  density->add_option("--points", spec.points, "Grid points");
  density->add_option("--terms-json", spec.terms_json, "Dump per-term coefficients here");

  auto* triple = app.add_subcommand("triple", "Transform in x (beta) and workload (alpha)");
  add_model_flags(triple, model);
  add_phase_flags(triple, spec);
  add_output_flags(triple, spec);
  triple->add_option("--alpha", spec.alphas, "Workload argument(s)")->delimiter(',');
  triple->add_option("--beta", spec.beta, "Initial-workload argument");

  auto* curve = app.add_subcommand("mean-curve", "E_x Q_t over a grid of t");
  add_model_flags(curve, model);
  add_output_flags(curve, spec);
  curve->add_option("--x", spec.x, "Initial workload");
  curve->add_option("--n", spec.n, "Number of phases");
  curve->add_option("--t-grid", spec.t_grid, "Times (default 0.25, 0.5, ..., 10)")
      ->delimiter(',');
  curve->add_option("--scheme", spec.scheme, "Rate perturbation: paper_literal or zero_sum");
  curve->add_option("--epsilon", spec.epsilon, "Rate perturbation scale");
  curve->add_option("--alpha-probe", spec.alpha_probe, "Small alpha for (1 - LST)/alpha");

  auto* reproduce = app.add_subcommand("reproduce", "Recompute a reference table");
  add_output_flags(reproduce, spec);
  reproduce->add_option("table", spec.table, "table1 or table2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!spec_path.empty()) {
      if (app.get_subcommands().size() > 0) {
        throw levyq::ValidationError("--spec cannot be combined with a subcommand");
      }
      std::ifstream in(spec_path);
      if (!in) throw levyq::ValidationError("cannot read run spec " + spec_path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw levyq::ValidationError(std::string("run spec is not valid JSON: ") + e.what());
      }
      spec = levyq::cli::run_spec_from_json(j);
    } else {
      if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 2;
      }
      spec.command = levyq::cli::parse_command(app.get_subcommands().front()->get_name());
      spec.model = build_model(model);
      if (spec.command == Command::MeanCurve && spec.t_grid.empty()) {
        for (int k = 1; k <= 40; ++k) spec.t_grid.push_back(0.25 * k);
      }
    }
    if (emit_spec) {
      spec.validate();
      std::cout << levyq::cli::to_json(spec).dump(2) << '\n';
      return 0;
    }
  } catch (const levyq::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return levyq::cli::run(spec, std::cout, std::cerr);
}
