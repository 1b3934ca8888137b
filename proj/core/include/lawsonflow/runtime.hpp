#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lawsonflow/diagnose.hpp"
#include "lawsonflow/flow.hpp"
#include "lawsonflow/shooting.hpp"

namespace lawson {

inline constexpr std::string_view tool_version = "0.3.0";

// Flat "key = value" file; '#' starts a comment. Units are listed next to each key by serialize_config.
struct RunConfig {
  int p = 4;
  int q = 4;
  int l = 4;
  std::optional<Vec> a;  // absent: shoot for it over `horizons`

  double t0 = -1e-2;
  double rho = 0.2;
  double beta = 20.0;
  double Lambda = 1e4;
  double R = 10.0;
  double delta = 0.05;

  std::size_t tip_nodes = 400;
  std::size_t ray_nodes = 400;
  double tip_stretch = 4.0;
  double outer_spacing = 0.005;

  double t_end = -1e-3;
  std::size_t snapshots = 11;
  double max_dtau = 2.0;
  double max_change = 1e-3;
  std::size_t max_steps = 5'000'000;
  double tip_band = 0.0;
  std::int64_t inject_failure_at_step = -1;

  Vec horizons;  // empty: the single horizon t0
  double shoot_tol = 1e-6;
  int shoot_max_iter = 30;
  double fd_step = 1e-5;

  std::uint64_t seed = 0;

  bool operator==(const RunConfig&) const = default;

  ConeParams params() const;
  SpectralExponents exps() const;
  GeometryConfig geometry() const;
  MeshConfig mesh() const;
  FlowConfig flow() const;
  ShootConfig shoot() const;
};

// Keys p, q and l are required; everything else falls back to RunConfig's defaults.
RunConfig parse_config(std::string_view text);
// Every key, reals at 17 significant digits, so parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

// Names of the violated ordering constraints, empty when the config is usable.
std::vector<std::string> ordering_violations(const RunConfig& config);
// Smallest Lambda for which the initial curve (a, or 0 when a is absent) is admissible.
double admissibility_constant(const RunConfig& config, const ProfileSolution& unit);
// Throws ConstraintViolation listing every violated constraint. The Lambda check builds the profile.
void validate_config(const RunConfig& config, bool check_lambda = true);
// Reads, parses and validates. ParseError, ConstraintViolation, IoError.
RunConfig load_config(const std::filesystem::path& path, bool check_lambda = true);

// Stable hex id of a config under this tool version.
std::string run_id(const RunConfig& config);
// LAWSONFLOW_RUN_ROOT, or ./runs.
std::filesystem::path default_run_root();

struct FileEntry {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string run_id;
  std::string version{tool_version};
  std::string status;  // "completed" or "failed"
  std::string error;
  std::string message;
  RunConfig config;
  Vec a;
  std::size_t steps = 0;
  std::vector<FileEntry> files;
  std::filesystem::path directory;
};

// Shoots for a when absent, runs the flow and writes <root>/<run_id>/ with config.txt,
// snapshots.csv, diagnostics.csv and manifest.json. Numerical failures give status "failed" with
// whatever was computed; only IoError and ConstraintViolation escape.
RunManifest run_and_persist(const RunConfig& config, const std::filesystem::path& root = default_run_root());

std::string sha256_file(const std::filesystem::path& path);

struct Verdict {
  std::string run_id;
  std::string version;
  std::string status;
  std::map<std::string, bool> checks;
  std::map<std::string, double> metrics;
  std::string to_json() const;
};

// Re-reads a run directory. Throws IoError on missing files or checksum mismatch and ParseError
// when any file carries a different tool version.
Verdict diagnose_run(const std::filesystem::path& directory);

}  // namespace lawson
