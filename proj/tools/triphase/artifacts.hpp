#pragma once

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "triphase/core_state.hpp"
#include "triphase/scenario.hpp"

namespace triphase::cli {

std::string sha256_hex(const std::string& bytes);

// Collects artifacts written to one output directory and emits manifest.txt
// naming the config hash next to every artifact.
class ArtifactSink {
 public:
  ArtifactSink(std::string dir, std::string config_hash);
  void write(const std::string& name, const std::string& contents);
  void note(const std::string& key, const std::string& value);
  void finish(const std::string& command, const std::string& config_path, const RunConfig& cfg,
              const std::string& extra_block = {});

 private:
  std::string dir_, hash_;
  std::vector<std::pair<std::string, std::string>> files_;  // name, sha256
  std::vector<std::pair<std::string, std::string>> notes_;
};

// Family-specific initial data; family "file" reads a field file.
InitialData scenario_data(const RunConfig& cfg);
TriField scenario_state(const RunConfig& cfg);

// Field file: first line `triphase-field <n_h> <n_z>`, then whitespace-separated
// values of f_a, f_b, f_s in TriField index order, optionally followed by
// trace_a and trace_b.
TriField read_field_file(const std::string& path, const GridSpec& grid);

}  // namespace triphase::cli
