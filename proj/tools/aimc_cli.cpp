#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "aimc/commands.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path = "-";
  std::uint64_t seed = 0;
  long samples = 0;
  int threads = 0;
  CLI::App* sub = nullptr;
};

void add_common(CLI::App& app, CommonOpts& o, const char* name, const char* desc) {
  o.sub = app.add_subcommand(name, desc);
  o.sub->add_option("--config", o.config_path, "run configuration file (key = value)")
      ->required();
  o.sub->add_option("--out", o.out_path, "output path, or '-' for stdout");
  o.sub->add_option("--seed", o.seed, "override the config seed");
  o.sub->add_option("--samples", o.samples, "override the config n_samples");
  o.sub->add_option("--threads", o.threads, "override the config threads");
}

std::string stub_path(const std::string& csv_path) {
  const auto dot = csv_path.find_last_of('.');
  const auto slash = csv_path.find_last_of('/');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? csv_path.substr(0, dot) : csv_path) + "_plot.py";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AIMC column accuracy toolkit: closed-form CSNR analysis, "
               "CSNR-optimal clipping-threshold search, and Monte Carlo validation"};
  app.require_subcommand(1);

  CommonOpts analyze, sweep, minbits, surface, validate;
  add_common(app, analyze, "analyze", "accuracy report for one scheme and precision (JSON)");
  add_common(app, sweep, "sweep", "CSNR vs precision table for all schemes (CSV)");
  add_common(app, minbits, "minbits", "minimum precision meeting a CSNR spec, per scheme (CSV)");
  add_common(app, surface, "surface", "CSNR over a clipping-threshold grid (CSV)");
  add_common(app, validate, "validate", "Monte Carlo vs closed-form comparison (pass/fail)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  CommonOpts* opts = nullptr;
  std::string name;
  for (CommonOpts* o : {&analyze, &sweep, &minbits, &surface, &validate}) {
    if (o->sub->parsed()) {
      opts = o;
      name = o->sub->get_name();
    }
  }

  try {
    aimc::RunConfig cfg = aimc::parse_config_file(opts->config_path);
    if (opts->sub->count("--seed")) cfg.seed = opts->seed;
    if (opts->sub->count("--samples")) cfg.n_samples = opts->samples;
    if (opts->sub->count("--threads")) cfg.threads = opts->threads;

    std::ostringstream buffer;
    int rc = 0;
    if (name == "analyze") rc = aimc::cmd_analyze(cfg, buffer);
    else if (name == "sweep") rc = aimc::cmd_sweep(cfg, buffer);
    else if (name == "minbits") rc = aimc::cmd_minbits(cfg, buffer);
    else if (name == "surface") rc = aimc::cmd_surface(cfg, buffer);
    else rc = aimc::cmd_validate(cfg, buffer);

    if (opts->out_path == "-") {
      std::cout << buffer.str();
    } else {
      std::ofstream out(opts->out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot write '" << opts->out_path << "'\n";
        return 3;
      }
      out << buffer.str();
      if (name == "sweep" || name == "surface") {
        std::ofstream stub(stub_path(opts->out_path));
        stub << aimc::plot_stub(name, opts->out_path);
      }
    }
    return rc;
  } catch (const aimc::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
