#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qpskew/instance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"skew group algebra construction for quivers with potentials"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string out_dir = ".";
  std::optional<size_t> max_len;
  bool negative_control = false;
  std::optional<std::string> norm_out;

  auto* build = app.add_subcommand("build", "compute Q_G, W_G and the choice data");
  build->add_option("instance", instance_path, "instance file")->required();
  build->add_option("--out", out_dir, "output directory (default .)");

  auto* verify = app.add_subcommand("verify", "run the exact verification suites");
  verify->add_option("instance", instance_path, "instance file")->required();
  verify->add_option("--out", out_dir, "output directory for report.json (default .)");
  size_t ml_value = 0;
  auto* ml_opt = verify->add_option("--max-len", ml_value, "path length bound for the oracle");
  verify->add_flag("--negative-control", negative_control,
                   "perturb W_G and expect the verification to fail");

  auto* norm = app.add_subcommand("normalize", "rewrite the action in a monomial arrow basis");
  norm->add_option("instance", instance_path, "instance file")->required();
  std::string norm_out_value;
  auto* norm_opt = norm->add_option("--out", norm_out_value, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // usage errors are invalid input; --help stays 0
  }

  if (build->parsed()) return qpskew::cmd_build(instance_path, out_dir);
  if (verify->parsed()) {
    if (ml_opt->count()) max_len = ml_value;
    return qpskew::cmd_verify(instance_path, out_dir, max_len, negative_control);
  }
  if (norm->parsed()) {
    if (norm_opt->count()) norm_out = norm_out_value;
    return qpskew::cmd_normalize(instance_path, norm_out);
  }
  return 2;
}
