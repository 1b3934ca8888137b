// lawsonflow: command line front end. Every subcommand prints JSON on stdout.
// Exit codes: 0 success, 2 bad input or violated constraint, 3 numerical failure, 1 I/O.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"
#include "lawsonflow/diagnose.hpp"
#include "lawsonflow/runtime.hpp"
#include "lawsonflow/shooting.hpp"
#include "lawsonflow/specfn.hpp"
#include "lawsonflow/spectral.hpp"

using nlohmann::json;
using namespace lawson;

namespace {

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError:
    case ErrorCode::ConstraintViolation:
    case ErrorCode::ParameterError:
    case ErrorCode::DimensionError:
    case ErrorCode::ParameterClash:
      return 2;
    case ErrorCode::IoError:
      return 1;
    default:
      return 3;
  }
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

json params_json(int p, int q, int l) {
  const ConeParams P = derive_cone_params(p, q);
  json j = {{"p", P.p}, {"q", P.q}, {"n", P.n}, {"mu", P.mu}, {"alpha", P.alpha},
            {"alpha_hat", P.alpha_hat}, {"alpha_tilde", P.alpha_tilde}};
  if (l >= 0) {
    const SpectralExponents e = spectral_exponents(P, l);
    j["l"] = l;
    j["lambda_l"] = e.lambda_l;
    j["sigma_l"] = e.sigma_l;
    j["b"] = e.b;
    j["weight_exponent_max"] = weight_exponent_max(P, e);
    j["bounded_H"] = bounded_H_criterion(P, l);
  }
  return j;
}

RunConfig config_from(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return load_config(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivariant mean curvature flow near Lawson cones"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tool_version));

  int p = 4, q = 4, l = -1;
  auto add_pq = [&](CLI::App* s) {
    s->add_option("-p", p, "first factor dimension")->capture_default_str();
    s->add_option("-q", q, "second factor dimension")->capture_default_str();
  };

  auto* params = app.add_subcommand("params", "cone constants and spectral exponents");
  add_pq(params);
  params->add_option("-l", l, "mode index");

  auto* specfn = app.add_subcommand("specfn", "evaluate a special function");
  std::string fn;
  double a = 0.0, b = 1.0, x = 1.0, nu = 0.0;
  specfn->add_option("function", fn, "kummer | bessel | log_bessel | eigen")
      ->required()
      ->check(CLI::IsMember({"kummer", "bessel", "log_bessel", "eigen"}));
  specfn->add_option("-a", a, "Kummer a");
  specfn->add_option("-b", b, "Kummer b");
  specfn->add_option("-x", x, "argument");
  specfn->add_option("--nu", nu, "Bessel order");
  int j_index = 0;
  specfn->add_option("-j", j_index, "eigenfunction index");
  add_pq(specfn);

  auto* profile = app.add_subcommand("profile", "minimal profile M_k");
  add_pq(profile);
  double k = 1.0, r_max = 1e3;
  std::string csv;
  profile->add_option("-k", k, "amplitude")->capture_default_str();
  profile->add_option("--r-max", r_max, "tip-chart extent")->capture_default_str();
  profile->add_option("--csv", csv, "write r, psi_hat, psi_hat', psi_hat'' rows here");

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and normalisations");
  add_pq(spectrum);
  int count = 7;
  spectrum->add_option("--count", count, "number of modes")->capture_default_str();

  std::string config_path;
  auto* init = app.add_subcommand("init", "build the initial curve of a config and check admissibility");
  init->add_option("config", config_path, "config file (defaults when omitted)");

  auto* evolve = app.add_subcommand("evolve", "run a config and persist the run directory");
  std::string root;
  evolve->add_option("config", config_path, "config file")->required();
  evolve->add_option("--root", root, "run-directory root (default LAWSONFLOW_RUN_ROOT or ./runs)");

  auto* shoot = app.add_subcommand("shoot", "solve Phi(a) = 0 over the config's horizons");
  shoot->add_option("config", config_path, "config file")->required();

  auto* diagnose = app.add_subcommand("diagnose", "verdict for a run directory");
  std::string dir;
  diagnose->add_option("directory", dir, "run directory")->required();

  auto* defaults = app.add_subcommand("defaults", "print the default config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*params) {
      print(params_json(p, q, l));
    } else if (*specfn) {
      double v = 0.0;
      if (fn == "kummer") v = kummer_m(a, b, x);
      if (fn == "bessel") v = bessel_i(nu, x);
      if (fn == "eigen") v = eigenfunction(derive_cone_params(p, q), j_index, x);
      if (fn == "log_bessel") {
        const LogScaled s = log_bessel_i(nu, x);
        print({{"function", fn}, {"log_abs", s.log_abs}, {"sign", s.sign}});
      } else {
        print({{"function", fn}, {"value", v}});
      }
    } else if (*profile) {
      const ProfileSolution s = minimal_profile(derive_cone_params(p, q), k, r_max);
      const RotatedProfile rot = rotated_profile(s);
      double worst = 0.0;
      for (std::size_t i = 1; i + 1 < s.mesh.size(); ++i) worst = std::max(worst, std::abs(s.hat_residual(i)));
      print({{"k", s.k}, {"r_max", s.r_max}, {"tip_height", s.tip_height}, {"nodes", s.mesh.size()},
             {"amplitude_estimate", estimate_amplitude(s)}, {"decay_slope", decay_rate_fit(rot)},
             {"max_residual", worst}});
      if (!csv.empty()) {
        std::ofstream out(csv);
        out << "r,psi_hat,psi_hat_d1,psi_hat_d2\n";
        char buf[128];
        for (std::size_t i = 0; i < s.mesh.size(); ++i) {
          std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", s.mesh[i], s.psi_hat[i], s.psi_hat_d1[i],
                        s.psi_hat_d2[i]);
          out << buf;
        }
        if (!out) fail(ErrorCode::IoError, "cannot write " + csv);
      }
    } else if (*spectrum) {
      const ConeParams P = derive_cone_params(p, q);
      json modes = json::array();
      for (int j = 0; j < count; ++j)
        modes.push_back({{"j", j}, {"lambda", lambda_j(P, j)}, {"c", normalization_c(P, j)}});
      print({{"b", eigen_b(P)}, {"modes", modes}});
    } else if (*init) {
      const RunConfig c = config_from(config_path);
      const auto unit = std::make_shared<const ProfileSolution>(minimal_profile(c.params(), 1.0));
      const Vec av = c.a ? *c.a : Vec(static_cast<std::size_t>(c.l), 0.0);
      const InitialData d = assemble_initial_curve(c.params(), c.exps(), av, c.t0, c.geometry(), unit, c.mesh());
      const AdmissibilityReport r = admissibility_check(d);
      print({{"t0", c.t0}, {"tip_nodes", d.tip.mesh.size()}, {"ray_nodes", d.ray.mesh.size()},
             {"outer_nodes", d.outer.size()}, {"overlap_mismatch", d.max_overlap_mismatch},
             {"admissible", r.all()}, {"worst_ratio", r.worst_ratio}});
      if (!r.all()) return 3;
    } else if (*evolve) {
      const RunConfig c = load_config(config_path);
      const RunManifest m = run_and_persist(c, root.empty() ? default_run_root() : std::filesystem::path(root));
      print({{"run_id", m.run_id}, {"status", m.status}, {"directory", m.directory.string()}, {"error", m.error},
             {"message", m.message}, {"steps", m.steps}});
      if (m.status != "completed") return 3;
    } else if (*shoot) {
      const RunConfig c = load_config(config_path);
      const auto unit = std::make_shared<const ProfileSolution>(minimal_profile(c.params(), 1.0));
      const ShootResult r = shoot_parameters(c.shoot(), unit);
      json hs = json::array();
      for (const HorizonSolve& h : r.horizons)
        hs.push_back({{"t_hat", h.t_hat}, {"a", h.a}, {"phi_norm", h.phi_norm}, {"converged", h.converged},
                      {"iterations", h.iterations}, {"message", h.message}});
      print({{"horizons", hs}, {"converged", r.all_converged()}});
      if (!r.all_converged()) return 3;
    } else if (*diagnose) {
      std::cout << diagnose_run(dir).to_json();
    } else if (*defaults) {
      std::cout << serialize_config(RunConfig{});
    }
  } catch (const Error& e) {
    std::cerr << "lawsonflow: " << e.what() << "\n";
    return exit_code(e.code());
  }
  return 0;
}
