#include "commands.hpp"

#include "ptscatter/core.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>

namespace ptscatter::app {

namespace {

struct Subcommand {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  bool fig3 = false;
};

const std::map<std::string, std::string>& help_text() {
  static const std::map<std::string, std::string> h = {
      {"k", "incident wave number (> 0)"},
      {"v", "gain/loss strength V of the +-iV slabs (> 0)"},
      {"b", "width of each half cell"},
      {"v1", "real part shared by both slabs"},
      {"v2", "imaginary part of the gain slab"},
      {"eps", "loss slab is v1 - i eps v2"},
      {"length", "total stack length L"},
      {"tolerance", "pass threshold for the maximum relative deviation"},
      {"n-min", "smallest cell count"},
      {"n-max", "largest cell count"},
      {"n-count", "number of cell counts"},
      {"n-spacing", "linear or log"},
      {"k-min", "smallest wave number"},
      {"k-max", "largest wave number"},
      {"k-count", "number of wave numbers"},
      {"k-spacing", "linear or log"},
      {"format", "csv, json or text"},
      {"output", "output file, '-' for standard output"},
  };
  return h;
}

void add_keys(Subcommand& sub, std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    auto& slot = sub.raw[key];
    sub.options[key] = sub.app->add_option(std::string("--") + key, slot, help_text().at(key));
  }
  sub.app->add_option("--config", sub.config_path, "flat key=value file; flags take precedence");
}

constexpr std::initializer_list<const char*> n_keys = {"n-min", "n-max", "n-count", "n-spacing"};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transfer-matrix scattering through layered gain/loss media"};
  app.require_subcommand(1, 1);

  std::map<std::string, Subcommand> subs;
  auto make = [&](const std::string& name, const std::string& description) -> Subcommand& {
    auto& s = subs[name];
    s.app = app.add_subcommand(name, description);
    return s;
  };

  add_keys(make("cell", "closed-form parameters and matrix of one +iV/-iV unit cell"), {"k", "v", "b", "format"});

  auto& sweep = make("sweep", "T, R_left, R_right over an (N, k) grid at fixed length");
  add_keys(sweep, {"v", "length", "k-min", "k-max", "k-count", "k-spacing", "format", "output"});
  for (const char* key : n_keys) {
    auto& slot = sweep.raw[key];
    sweep.options[key] = sweep.app->add_option(std::string("--") + key, slot, help_text().at(key));
  }
  sweep.app->add_flag("--fig3", sweep.fig3, "V=40, L=1, N=500..2000, k=1..10 (181 points)");

  auto& converge = make("converge", "distance of the N-cell matrix from the identity over an N schedule");
  add_keys(converge, {"k", "v", "length", "n-min", "n-max", "n-count", "n-spacing", "format", "output"});

  auto& general = make("general", "effective barrier height of alternating v1+i v2 / v1-i eps v2 stacks");
  add_keys(general,
           {"v1", "v2", "eps", "length", "k", "n-min", "n-max", "n-count", "n-spacing", "format", "output"});

  add_keys(make("oracle-check", "ODE and slab-propagation oracles against the closed form"),
           {"length", "tolerance", "format", "output"});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_invalid_arguments;
  }

  const auto chosen = std::find_if(subs.begin(), subs.end(), [](const auto& s) { return s.second.app->parsed(); });
  if (chosen == subs.end()) return exit_invalid_arguments;
  const std::string& name = chosen->first;
  const Subcommand& sub = chosen->second;

  try {
    SweepConfig cfg = default_config(name);
    if (sub.fig3) apply_fig3_preset(cfg);
    if (!sub.config_path.empty()) apply_key_values(read_config_file(sub.config_path), cfg);
    KeyValues flags;
    for (const auto& [key, opt] : sub.options)
      if (opt->count() > 0) flags[key] = sub.raw.at(key);
    apply_key_values(flags, cfg);

    std::ofstream file;
    std::ostream* sink = &out;
    if (cfg.output_path != "-") {
      file.open(cfg.output_path);
      if (!file) {
        err << "error: cannot write output file '" << cfg.output_path << "'\n";
        return exit_invalid_arguments;
      }
      sink = &file;
    }

    int code = exit_ok;
    if (name == "cell") code = cmd_cell(cfg, *sink);
    else if (name == "sweep") code = cmd_sweep(cfg, sub.fig3, *sink);
    else if (name == "converge") code = cmd_converge(cfg, *sink);
    else if (name == "general") code = cmd_general(cfg, *sink);
    else code = cmd_oracle_check(cfg, *sink);

    sink->flush();
    if (!*sink) {
      err << "error: failed writing output\n";
      return exit_invalid_arguments;
    }
    if (code == exit_not_converged) err << "warning: the limit study did not converge over the schedule\n";
    if (code == exit_numerical_failure) err << "error: oracle deviation exceeds tolerance\n";
    return code;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid_arguments;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical_failure;
  }
}

} // namespace ptscatter::app
