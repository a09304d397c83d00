#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "triphase/table.hpp"

namespace triphase::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line, const std::string& key) {
  double out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ParseError(line, "key '" + key + "' expects a decimal number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& v, int line, const std::string& key) {
  long long out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ParseError(line, "key '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParseError(line, "key '" + key + "' expects true or false, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

std::map<std::string, std::map<std::string, Setter>> setters() {
  std::map<std::string, std::map<std::string, Setter>> s;
#define TP_D(sec, key, field) \
  s[sec][key] = [](RunConfig& c, const std::string& v, int l) { c.field = to_double(v, l, key); }
#define TP_I(sec, key, field) \
  s[sec][key] = [](RunConfig& c, const std::string& v, int l) { c.field = static_cast<int>(to_int(v, l, key)); }
  TP_D("phys", "kappa_a", phys.kappa_a);
  TP_D("phys", "kappa_b", phys.kappa_b);
  TP_D("phys", "kappa_s_tilde", phys.kappa_s_tilde);
  TP_D("phys", "alpha_s", phys.alpha_s);
  TP_D("phys", "beta", phys.beta);
  TP_D("grid", "l_h", grid.l_h);
  TP_I("grid", "n_h", grid.n_h);
  TP_D("grid", "l_z", grid.l_z);
  TP_I("grid", "n_z", grid.n_z);
  TP_D("grid", "dt", grid.dt);
  TP_D("grid", "t_end", grid.t_end);
  TP_D("solver", "window_t", solver.window_t);
  TP_I("solver", "max_picard_iters", solver.max_picard_iters);
  TP_D("solver", "picard_tol", solver.picard_tol);
  TP_D("solver", "contraction_target", solver.contraction_target);
  TP_I("solver", "store_every", solver.store_every);
  s["solver"]["adapt_window"] = [](RunConfig& c, const std::string& v, int l) {
    c.solver.adapt_window = to_bool(v, l, "adapt_window");
  };
  s["scenario"]["name"] = [](RunConfig& c, const std::string& v, int) { c.scenario.name = v; };
  s["scenario"]["family"] = [](RunConfig& c, const std::string& v, int l) {
    static const std::set<std::string> ok = {"gaussian-bump", "pure-lift", "single-mode", "zero",
                                             "file"};
    if (!ok.count(v)) throw ParseError(l, "unknown scenario family '" + v + "'");
    c.scenario.family = v;
  };
  TP_D("scenario", "amp", scenario.amp);
  TP_D("scenario", "sigma_h", scenario.sigma_h);
  TP_D("scenario", "sigma_z", scenario.sigma_z);
  TP_D("scenario", "center_x", scenario.center_x);
  TP_D("scenario", "center_y", scenario.center_y);
  TP_I("scenario", "k_h", scenario.k_h);
  TP_I("scenario", "n", scenario.n);
  s["scenario"]["path"] = [](RunConfig& c, const std::string& v, int) { c.scenario.path = v; };
  s["scenario"]["seed"] = [](RunConfig& c, const std::string& v, int l) {
    long long x = to_int(v, l, "seed");
    if (x < 0) throw ParseError(l, "seed must be nonnegative");
    c.scenario.seed = static_cast<std::uint64_t>(x);
  };
  s["output"]["dir"] = [](RunConfig& c, const std::string& v, int) { c.output.dir = v; };
  TP_I("output", "constants_trials", output.constants_trials);
  TP_D("output", "convergence_t_end", output.convergence_t_end);
  s["output"]["oracle_multipliers"] = [](RunConfig& c, const std::string& v, int l) {
    c.output.oracle_multipliers.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      long long m = to_int(trim(item), l, "oracle_multipliers");
      if (m < 1) throw ParseError(l, "oracle_multipliers entries must be >= 1");
      c.output.oracle_multipliers.push_back(static_cast<int>(m));
    }
    if (c.output.oracle_multipliers.empty()) throw ParseError(l, "oracle_multipliers is empty");
  };
#undef TP_D
#undef TP_I
  return s;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  static const auto table = setters();
  RunConfig cfg;
  std::set<std::string> seen_phys;
  std::set<std::pair<std::string, std::string>> seen;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(lineno, "malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (!table.count(section)) throw ParseError(lineno, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (section.empty()) throw ParseError(lineno, "key '" + key + "' outside any section");
    const auto& keys = table.at(section);
    auto it = keys.find(key);
    if (it == keys.end())
      throw ParseError(lineno, "unknown key '" + key + "' in section [" + section + "]");
    if (value.empty()) throw ParseError(lineno, "key '" + key + "' has no value");
    if (!seen.insert({section, key}).second)
      throw ParseError(lineno, "duplicate key '" + key + "' in section [" + section + "]");
    it->second(cfg, value, lineno);
    if (section == "phys") seen_phys.insert(key);
  }
  for (const char* k : {"kappa_a", "kappa_b", "kappa_s_tilde", "alpha_s", "beta"})
    if (!seen_phys.count(k)) throw ParseError(0, std::string("missing required key '") + k + "' in [phys]");
  try {
    cfg.phys.validate();
    cfg.grid.validate();
    cfg.solver.validate();
  } catch (const std::exception& e) {
    throw ParseError(0, e.what());
  }
  if (cfg.output.constants_trials < 1) throw ParseError(0, "constants_trials must be >= 1");
  if (cfg.scenario.family == "file" && cfg.scenario.path.empty())
    throw ParseError(0, "scenario family 'file' needs a path");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError(0, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string echo_config(const RunConfig& c) {
  std::ostringstream os;
  auto d = [&os](const char* k, double v) { os << k << " = " << format_double(v) << "\n"; };
  os << "[phys]\n";
  d("kappa_a", c.phys.kappa_a);
  d("kappa_b", c.phys.kappa_b);
  d("kappa_s_tilde", c.phys.kappa_s_tilde);
  d("alpha_s", c.phys.alpha_s);
  d("beta", c.phys.beta);
  os << "[grid]\n";
  d("l_h", c.grid.l_h);
  os << "n_h = " << c.grid.n_h << "\n";
  d("l_z", c.grid.l_z);
  os << "n_z = " << c.grid.n_z << "\n";
  d("dt", c.grid.dt);
  d("t_end", c.grid.t_end);
  os << "[solver]\n";
  d("window_t", c.solver.window_t);
  os << "max_picard_iters = " << c.solver.max_picard_iters << "\n";
  d("picard_tol", c.solver.picard_tol);
  d("contraction_target", c.solver.contraction_target);
  os << "adapt_window = " << (c.solver.adapt_window ? "true" : "false") << "\n";
  os << "store_every = " << c.solver.store_every << "\n";
  os << "[scenario]\n";
  os << "name = " << c.scenario.name << "\nfamily = " << c.scenario.family << "\n";
  d("amp", c.scenario.amp);
  d("sigma_h", c.scenario.sigma_h);
  d("sigma_z", c.scenario.sigma_z);
  d("center_x", c.scenario.center_x);
  d("center_y", c.scenario.center_y);
  os << "k_h = " << c.scenario.k_h << "\nn = " << c.scenario.n << "\n";
  if (!c.scenario.path.empty()) os << "path = " << c.scenario.path << "\n";
  os << "seed = " << c.scenario.seed << "\n";
  os << "[output]\n";
  os << "dir = " << c.output.dir << "\n";
  os << "constants_trials = " << c.output.constants_trials << "\n";
  os << "oracle_multipliers = ";
  for (std::size_t k = 0; k < c.output.oracle_multipliers.size(); ++k)
    os << (k ? "," : "") << c.output.oracle_multipliers[k];
  os << "\n";
  d("convergence_t_end", c.output.convergence_t_end);
  return os.str();
}

}  // namespace triphase::cli
