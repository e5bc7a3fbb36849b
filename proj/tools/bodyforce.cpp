#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bodyforce/commands.hpp"

namespace cli = bodyforce::cli;

int main(int argc, char** argv) {
  CLI::App app{"Body-force reconstruction for the 2D Lame system"};
  app.require_subcommand(1);

  cli::SynthOptions synth;
  std::optional<std::size_t> synth_grid;
  auto* s = app.add_subcommand("synth", "Write benchmark data for perturbation index n");
  s->add_option("--n", synth.n, "Perturbation index (>= 1)")->required();
  s->add_option("--out", synth.out, "Output directory")->required();
  s->add_option("--grid", synth_grid, "Nodes per axis for sampled export (odd)");

  cli::ReconstructOptions rec;
  std::string mode;
  auto* r = app.add_subcommand("reconstruct", "Regularized reconstruction of f");
  r->add_option("--case", rec.case_name, "exact | perturbed:<n> | <directory>")->required();
  r->add_option("--epsilon", rec.epsilon, "Data error bound")->required();
  r->add_option("--mode", mode, "practical | theorem (default: by epsilon)");
  r->add_option("--grid", rec.grid, "Output nodes per axis (odd)")->capture_default_str();
  r->add_option("--out", rec.out, "Output path; writes <stem>_f1.csv and <stem>_f2.csv")->required();

  cli::SpectraOptions spectra;
  auto* p = app.add_subcommand("spectra", "Dump spectral samples on an offset frequency grid");
  p->add_option("--case", spectra.case_name, "exact | perturbed:<n> | <directory>")->required();
  p->add_option("--rmax", spectra.rmax, "Scan radius")->capture_default_str();
  p->add_option("--spacing", spectra.spacing, "Frequency node spacing")->capture_default_str();
  p->add_option("--out", spectra.out, "Output CSV")->required();

  cli::ConvergenceOptions conv;
  std::string n_list;
  auto* c = app.add_subcommand("convergence", "Error table over a list of n");
  c->add_option("--n-list", n_list, "Comma-separated ascending n values")->required();
  c->add_option("--out", conv.out, "Output CSV")->required();
  c->add_option("--grid", conv.grid, "Error grid nodes per axis (odd)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInvalid;
  }

  try {
    if (*s) {
      synth.grid = synth_grid;
      return cli::cmd_synth(synth);
    }
    if (*r) {
      if (!mode.empty()) {
        rec.mode = bodyforce::parse_mode(mode);
        if (!rec.mode) {
          std::cerr << "error: --mode must be 'practical' or 'theorem'\n";
          return cli::kExitInvalid;
        }
      }
      return cli::cmd_reconstruct(rec);
    }
    if (*p) return cli::cmd_spectra(spectra);
    if (*c) {
      conv.n_list = cli::parse_n_list(n_list);
      return cli::cmd_convergence(conv);
    }
  } catch (const bodyforce::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitInvalid;
  }
  return cli::kExitInvalid;
}
