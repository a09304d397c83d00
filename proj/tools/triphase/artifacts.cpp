#include "artifacts.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "triphase/errors.hpp"
#include "triphase/parallel.hpp"
#include "triphase/spectral.hpp"
#include "version.hpp"

namespace triphase::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int k = 0; k < len; ++k) {
    out.push_back(hex[md[k] >> 4]);
    out.push_back(hex[md[k] & 15]);
  }
  return out;
}

ArtifactSink::ArtifactSink(std::string dir, std::string config_hash)
    : dir_(std::move(dir)), hash_(std::move(config_hash)) {
  std::filesystem::create_directories(dir_);
}

void ArtifactSink::write(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::path(dir_) / name;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write artifact " + path.string());
  f << contents;
  if (!f) throw std::runtime_error("short write on artifact " + path.string());
  files_.emplace_back(name, sha256_hex(contents));
}

void ArtifactSink::note(const std::string& key, const std::string& value) {
  notes_.emplace_back(key, value);
}

void ArtifactSink::finish(const std::string& command, const std::string& config_path,
                          const RunConfig& cfg, const std::string& extra_block) {
  std::ostringstream m;
  m << "command = " << command << "\n";
  m << "config_path = " << config_path << "\n";
  m << "config_sha256 = " << hash_ << "\n";
  m << "triphase_version = " << kVersion << "\n";
  m << "fft_backend = " << fft_backend_version() << "\n";
  m << "seed = " << cfg.scenario.seed << "\n";
  m << "threads = " << thread_count() << "\n";
  for (const auto& [k, v] : notes_) m << k << " = " << v << "\n";
  m << "\n[config]\n" << echo_config(cfg);
  if (!extra_block.empty()) m << "\n" << extra_block;
  m << "\n[artifacts]\n";
  // Deterministic content only: no timestamps, no absolute paths of the host.
  for (const auto& [name, digest] : files_)
    m << name << " sha256=" << digest << " config_sha256=" << hash_ << "\n";
  const auto path = std::filesystem::path(dir_) / "manifest.txt";
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << m.str();
}

InitialData scenario_data(const RunConfig& cfg) {
  const ScenarioSpec& s = cfg.scenario;
  if (s.family == "gaussian-bump")
    return gaussian_bump(s.amp, s.sigma_h, s.sigma_z, s.center_x, s.center_y);
  if (s.family == "pure-lift") return pure_lift(cfg.phys.beta, s.amp, s.sigma_h);
  if (s.family == "single-mode") return single_mode(cfg.grid, s.k_h, s.n, s.amp);
  if (s.family == "zero") return zero_data();
  throw ConfigError("scenario family '" + s.family + "' has no analytic form");
}

TriField scenario_state(const RunConfig& cfg) {
  if (cfg.scenario.family == "file") return read_field_file(cfg.scenario.path, cfg.grid);
  return scenario_data(cfg).sample(cfg.grid);
}

TriField read_field_file(const std::string& path, const GridSpec& grid) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open field file '" + path + "'");
  std::string tag;
  int nh = 0, nz = 0;
  if (!(f >> tag >> nh >> nz) || tag != "triphase-field")
    throw ConfigError("field file '" + path + "': expected header 'triphase-field <n_h> <n_z>'");
  if (nh != grid.n_h || nz != grid.n_z)
    throw ConfigError("field file '" + path + "': shape " + std::to_string(nh) + "x" +
                      std::to_string(nz) + " does not match the [grid] section");
  TriField t = TriField::zeros(grid);
  auto read = [&](std::vector<double>& v, const char* what) {
    for (double& x : v)
      if (!(f >> x))
        throw ConfigError("field file '" + path + "': truncated while reading " + what);
  };
  read(t.f_a, "f_a");
  read(t.f_b, "f_b");
  read(t.f_s, "f_s");
  double probe = 0;
  if (f >> probe) {
    t.trace_a.assign(grid.surf_size(), 0.0);
    t.trace_b.assign(grid.surf_size(), 0.0);
    t.trace_a[0] = probe;
    for (std::size_t k = 1; k < t.trace_a.size(); ++k)
      if (!(f >> t.trace_a[k])) throw ConfigError("field file '" + path + "': truncated trace_a");
    read(t.trace_b, "trace_b");
  }
  return t;
}

}  // namespace triphase::cli
