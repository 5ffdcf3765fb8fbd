// Command-line runner: verification scenarios, refinement studies,
// asymptotic tables and bound-only evaluation.
//
// Exit status: 0 success (inequality holds), 2 inequality violated beyond the
// discretisation tolerance, 3 solver or quadrature failure, 4 configuration
// error.

#include "ltwg/report.hpp"
#include "ltwg/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 2;
constexpr int kSolverFailure = 3;
constexpr int kConfigError = 4;

struct PresetArgs {
  std::string preset;
  double alpha = 1.0;
  double b = 1.0;
  std::string rect = "1x1";
  double r = 1.2;
  double width = 2.0;
};

std::vector<ltwg::Scenario> load(const std::string& config, const PresetArgs& p,
                                 const std::vector<double>& sigmas) {
  std::vector<ltwg::Scenario> out;
  const std::vector<double> sig = sigmas.empty() ? std::vector<double>{0.5} : sigmas;
  if (!p.preset.empty()) {
    if (p.preset == "corollary1") {
      out.push_back(ltwg::preset_corollary1(p.alpha, p.b, sig));
    } else if (p.preset == "corollary2") {
      const auto x = p.rect.find('x');
      if (x == std::string::npos) throw ltwg::ConfigError("--rect expects HEIGHTxLENGTH");
      const auto nums = ltwg::detail::parse_numbers(p.rect.substr(0, x) + " " + p.rect.substr(x + 1),
                                                    "rect");
      if (nums.size() != 2) throw ltwg::ConfigError("--rect expects HEIGHTxLENGTH");
      out.push_back(ltwg::preset_corollary2(nums[0], nums[1], sig));
    } else if (p.preset == "corollary3") {
      out.push_back(ltwg::preset_corollary3(p.r, p.width, sig));
    } else {
      throw ltwg::ConfigError("unknown preset '" + p.preset + "'");
    }
  }
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) throw ltwg::ConfigError("cannot open config '" + config + "'");
    auto parsed = ltwg::parse_scenarios(in);
    if (!sigmas.empty()) {
      for (auto& s : parsed) s.sigmas = sigmas;
    }
    out.insert(out.end(), parsed.begin(), parsed.end());
  }
  if (out.empty()) throw ltwg::ConfigError("give a config file or --preset");
  return out;
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (!fs::is_directory(p)) throw ltwg::ConfigError("output directory '" + dir + "' unusable");
  const fs::path probe = p / ".ltwg_write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw ltwg::ConfigError("output directory '" + dir + "' is not writable");
  }
  fs::remove(probe, ec);
  return p;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ltwg::ConfigError("cannot write " + path.string());
  f << text;
}

std::string dump(const ltwg::Json& j) { return j.dump(2) + "\n"; }

void print_summary(const ltwg::ScenarioResult& res) {
  for (std::size_t i = 0; i < res.reports.size(); ++i) {
    const auto& r = res.reports[i];
    std::cout << res.scenario.name << "  sigma=" << r.sigma << "  I=" << r.integral
              << "  bound=" << r.bound;
    if (r.riesz_mean) {
      std::cout << "  riesz=" << *r.riesz_mean << "  slack=" << *r.slack_ratio
                << "  eps_disc=" << res.eps_disc[i]
                << "  count=" << res.levels.back().certified_count;
    }
    std::cout << '\n';
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete spectra of perturbed waveguides and their Lieb-Thirring bounds"};
  app.require_subcommand(1);

  std::string config;
  PresetArgs preset;
  std::vector<double> sigmas;
  std::optional<double> grid;
  std::optional<int> levels;
  std::string out_dir = ".";

  const auto add_preset = [&](CLI::App* c) {
    c->add_option("--preset", preset.preset, "corollary1 | corollary2 | corollary3")
        ->check(CLI::IsMember({"corollary1", "corollary2", "corollary3"}));
    c->add_option("--alpha", preset.alpha, "corollary1 window length");
    c->add_option("--b", preset.b, "corollary1 window height");
    c->add_option("--rect", preset.rect, "corollary2 bump HEIGHTxLENGTH");
    c->add_option("--r", preset.r, "corollary3 bulge radius");
    c->add_option("--width", preset.width, "corollary3 bulge length");
  };

  auto* run = app.add_subcommand("run", "verify the inequality for each scenario");
  run->add_option("config", config, "INI scenario file");
  add_preset(run);
  run->add_option("--sigma", sigmas, "Riesz orders (>= 1/2)");
  run->add_option("--grid", grid, "finest grid step");
  run->add_option("--levels", levels, "refinement levels used for eps_disc");
  run->add_option("--out", out_dir, "output directory");

  auto* conv = app.add_subcommand("convergence", "grid refinement study");
  conv->add_option("config", config, "INI scenario file");
  add_preset(conv);
  int conv_levels = 3;
  conv->add_option("--levels", conv_levels, "number of grids (>= 3)");
  conv->add_option("--sigma", sigmas, "Riesz orders (>= 1/2)");
  conv->add_option("--grid", grid, "finest grid step");
  conv->add_option("--out", out_dir, "output directory");

  auto* asym = app.add_subcommand("asymptotics", "weak or strong coupling table");
  std::string family = "weak";
  std::vector<double> alphas;
  ltwg::AsymptoticsConfig acfg;
  asym->add_option("--family", family, "weak | strong")
      ->check(CLI::IsMember({"weak", "strong"}));
  asym->add_option("--alphas", alphas, "coupling parameters")->required();
  asym->add_option("--grid", acfg.h, "grid step");
  asym->add_option("--levels", acfg.levels, "grids for Richardson extrapolation");
  asym->add_option("--sigma", acfg.sigma, "Riesz order (strong family)");
  asym->add_option("--truncation-tol", acfg.truncation_tol, "decay tolerance at the ends");
  asym->add_option("--out", out_dir, "output directory");

  auto* bound = app.add_subcommand("bound-only", "evaluate the bound side without solving");
  bound->add_option("config", config, "INI scenario file");
  add_preset(bound);
  bound->add_option("--sigma", sigmas, "Riesz orders (>= 1/2)");
  bound->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    const fs::path out = prepare_out(out_dir);
    if (asym->parsed()) {
      std::ostringstream csv;
      bool ok = true;
      if (family == "weak") {
        const auto rows = ltwg::run_weak_coupling(alphas, acfg);
        ltwg::write_weak_csv(csv, rows);
        for (const auto& r : rows) ok = ok && r.bound_satisfied;
      } else {
        const auto rows = ltwg::run_strong_coupling(alphas, acfg);
        ltwg::write_strong_csv(csv, rows);
        for (const auto& r : rows) ok = ok && r.ordered;
      }
      write_file(out / ("asymptotics_" + family + ".table.csv"), csv.str());
      std::cout << csv.str();
      return ok ? kOk : kViolation;
    }

    auto scenarios = load(config, preset, sigmas);
    for (auto& s : scenarios) {
      if (grid) s.h = *grid;
      if (levels) s.levels = *levels;
      s.validate();
    }

    if (conv->parsed()) {
      for (const auto& s : scenarios) {
        const auto t = ltwg::run_convergence(s, conv_levels);
        write_file(out / (s.name + ".convergence.json"), dump(ltwg::to_json(t)));
        std::ostringstream csv;
        ltwg::write_convergence_csv(csv, t);
        write_file(out / (s.name + ".convergence.csv"), csv.str());
        std::cout << csv.str();
      }
      return kOk;
    }

    bool violated = false;
    for (const auto& s : scenarios) {
      ltwg::ScenarioResult res;
      if (bound->parsed()) {
        res = ltwg::run_bound_only(s);
      } else {
        ltwg::SolveOptions opts;
        if (s.dump_matrix) {
          const fs::path coo = out / (s.name + ".matrix.coo");
          opts.on_operator = [coo](const ltwg::SparseSymOperator& op) {
            std::ofstream f(coo);
            op.write_coo(f);
          };
        }
        res = ltwg::run_scenario(s, opts);
      }
      write_file(out / (s.name + ".report.json"), dump(ltwg::to_json(res)));
      std::ostringstream csv;
      ltwg::write_scenario_csv(csv, res);
      write_file(out / (s.name + ".table.csv"), csv.str());
      print_summary(res);
      violated = violated || res.violated();
    }
    return violated ? kViolation : kOk;
  } catch (const ltwg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ltwg::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    if (!e.diagnostics().empty()) std::cerr << "  " << e.diagnostics() << '\n';
    return kSolverFailure;
  } catch (const ltwg::QuadratureError& e) {
    std::cerr << "quadrature failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}
