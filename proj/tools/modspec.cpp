#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modspec/diagonalize.hpp"
#include "modspec/error.hpp"
#include "modspec/harper.hpp"
#include "modspec/serialize.hpp"
#include "modspec/verify.hpp"
#include "modspec/weak_diag.hpp"

using namespace modspec;

namespace {

enum Exit { kOk = 0, kContract = 1, kParse = 2, kInternal = 3 };

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::string output;
  std::uint64_t seed = 0;
  int n = 2;
  std::vector<int> dims{1};
  std::vector<double> weights;
  std::optional<double> eps;
  int iters = 20;
  int p = 1;
  int q = 2;
  std::optional<int> grid;
  int qmax = 10;
  std::optional<double> tol;
};

double resolved_tol(const RunConfig& c) {
  if (c.tol) return *c.tol;
  return c.command == "harper" ? 1e-6 : 1e-10;
}

int resolved_grid(const RunConfig& c) {
  if (c.grid) return *c.grid;
  return c.command == "butterfly" ? 16 : 64;
}

double resolved_eps(const RunConfig& c) { return c.eps.value_or(1e-2); }

Json config_json(const RunConfig& c) {
  const AlgebraShape shape(c.dims, c.weights);
  return Json{{"command", c.command},
              {"inputs", c.inputs},
              {"output", c.output},
              {"seed", c.seed},
              {"n", c.n},
              {"dims", shape.dims()},
              {"weights", shape.weights()},
              {"eps", resolved_eps(c)},
              {"iters", c.iters},
              {"p", c.p},
              {"q", c.q},
              {"grid", resolved_grid(c)},
              {"qmax", c.qmax},
              {"tol", resolved_tol(c)}};
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.output.empty())
    std::cout << text;
  else
    write_text_file(c.output, text);
}

void emit_json(const RunConfig& c, Json body) {
  body["config"] = config_json(c);
  emit(c, dump_json(body));
}

// CSV artifacts carry their config in "<output>.config.json".
void emit_csv(const RunConfig& c, const std::string& csv) {
  emit(c, csv);
  if (!c.output.empty()) write_text_file(c.output + ".config.json", dump_json(config_json(c)));
}

ModuleOperator generated(const RunConfig& c, std::uint64_t stream) {
  SplitMix64 rng(c.seed);
  for (std::uint64_t s = 0; s < stream; ++s) rng = rng.fork();
  return random_positive_operator(rng, AlgebraShape(c.dims, c.weights), c.n);
}

// Operator from --input number `index`, or the seeded `gen` instance when absent.
ModuleOperator input_operator(const RunConfig& c, std::size_t index) {
  if (index < c.inputs.size()) return operator_from_json(read_json_file(c.inputs[index]));
  return generated(c, index);
}

int run_verify(const RunConfig& c) {
  const auto results = run_verification(c.seed);
  bool ok = true;
  Json rows = Json::array();
  for (const auto& r : results) {
    std::cout << format_result(r) << "\n";
    ok = ok && r.passed;
    rows.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  std::cout << (ok ? "all suites passed" : "FAILURES present") << "\n";
  if (!c.output.empty()) {
    Json body{{"results", rows}, {"passed", ok}, {"config", config_json(c)}};
    write_text_file(c.output, dump_json(body));
  }
  return ok ? kOk : kContract;
}

int dispatch(const RunConfig& c) {
  if (c.n < 1) throw Error(ErrorKind::InvalidArgument, "--n must be positive");
  const std::string& cmd = c.command;
  if (cmd == "gen") {
    emit_json(c, to_json(generated(c, 0)));
  } else if (cmd == "diag") {
    DiagonalizeOptions options;
    options.positivity_tol = resolved_tol(c);
    emit_json(c, to_json(diagonalize(input_operator(c, 0), options)));
  } else if (cmd == "scale") {
    emit_csv(c, scale_csv(spectral_scale(input_operator(c, 0))));
  } else if (cmd == "perturb") {
    const ModuleOperator k1 = input_operator(c, 0);
    ModuleOperator k2 = k1;
    if (c.inputs.size() >= 2) {
      k2 = operator_from_json(read_json_file(c.inputs[1]));
    } else {
      SplitMix64 rng(c.seed ^ 0x5DEECE66DULL);
      const auto h = random_hermitian_operator(rng, k1.shape, k1.n);
      k2 = k1 + h.scaled(resolved_eps(c) / operator_norm(h));
      k2 = (k2 + k2.adjoint()).scaled(0.5);
    }
    emit_json(c, to_json(match_eigenvalues(k1, k2)));
  } else if (cmd == "weakdiag") {
    emit_json(c, to_json(iterate_weak_diagonalization(input_operator(c, 0), c.iters)));
  } else if (cmd == "harper") {
    if (c.output.empty()) throw Error(ErrorKind::ParseError, "harper requires --output");
    const auto field = harper_field(c.p, c.q, resolved_grid(c));
    const auto bands = band_functions(field, resolved_tol(c));
    write_text_file(c.output, bands_csv(field, bands));
    Json report = to_json(selection_report(field, bands), field);
    report["config"] = config_json(c);
    write_text_file(c.output + ".report.json", dump_json(report));
  } else if (cmd == "butterfly") {
    emit_csv(c, butterfly_csv(butterfly(c.qmax, resolved_grid(c))));
  } else if (cmd == "verify") {
    return run_verify(c);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diagonalization of positive operators on Hilbert modules over finite von Neumann algebras"};
  app.require_subcommand(1);
  RunConfig c;
  double eps = 0.0, tol = 0.0;
  int grid = 0;

  app.add_option("--input", c.inputs, "input JSON file (repeat for perturb)");
  app.add_option("--output", c.output, "output path (stdout when omitted)");
  app.add_option("--seed", c.seed, "PRNG seed")->capture_default_str();
  app.add_option("--n", c.n, "module rank")->capture_default_str();
  app.add_option("--dims", c.dims, "factor sizes, comma separated")->delimiter(',')->capture_default_str();
  app.add_option("--weights", c.weights, "trace weights, comma separated")->delimiter(',');
  auto* eps_opt = app.add_option("--eps", eps, "perturbation size for perturb without a second input");
  app.add_option("--iters", c.iters, "weakdiag iterations")->capture_default_str();
  app.add_option("--p", c.p, "flux numerator")->capture_default_str();
  app.add_option("--q", c.q, "flux denominator")->capture_default_str();
  auto* grid_opt = app.add_option("--grid", grid, "torus grid size");
  app.add_option("--qmax", c.qmax, "largest flux denominator for butterfly")->capture_default_str();
  auto* tol_opt = app.add_option("--tol", tol, "positivity tolerance (diag) or gap tolerance (harper)");

  const std::vector<std::pair<const char*, const char*>> commands{
      {"gen", "write a seeded random strictly positive operator"},
      {"diag", "diagonalize an operator"},
      {"scale", "write the spectral scale CSV"},
      {"perturb", "match eigenvalues of two operators"},
      {"weakdiag", "run the weak-diagonalization iteration"},
      {"harper", "Harper band functions and selection report"},
      {"butterfly", "union spectra over rational fluxes"},
      {"verify", "run the invariant suites"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (*eps_opt) c.eps = eps;
  if (*grid_opt) c.grid = grid;
  if (*tol_opt) c.tol = tol;

  try {
    return dispatch(c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::ParseError ? kParse : kContract;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
