#include "shuttle/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace shuttle {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Entry {
  std::string value;
  int line;
  bool used = false;
};

using Section = std::map<std::string, Entry>;

struct RawConfig {
  std::string path;
  std::map<std::string, Section> sections;

  [[noreturn]] void fail(const std::string& msg, int line) const {
    throw ConfigError(path + ":" + std::to_string(line) + ": " + msg, line);
  }

  Section* find(const std::string& name) {
    auto it = sections.find(name);
    return it == sections.end() ? nullptr : &it->second;
  }
};

RawConfig read_raw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path.string(), 0);
  RawConfig raw;
  raw.path = path.string();
  const std::set<std::string> known_sections = {"system", "optimizer", "spin",
                                                "output"};
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') raw.fail("malformed section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (!known_sections.count(section))
        raw.fail("unknown section '" + section + "'", line_no);
      if (raw.sections.count(section))
        raw.fail("duplicate section '" + section + "'", line_no);
      raw.sections[section] = {};
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos) raw.fail("expected 'key = value'", line_no);
    if (section.empty()) raw.fail("key outside of any section", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) raw.fail("empty key", line_no);
    if (value.empty()) raw.fail("empty value for key '" + key + "'", line_no);
    auto& sec = raw.sections[section];
    if (sec.count(key)) raw.fail("duplicate key '" + key + "'", line_no);
    sec[key] = {value, line_no, false};
  }
  return raw;
}

class SectionReader {
 public:
  SectionReader(RawConfig& raw, const std::string& name)
      : raw_(raw), name_(name), section_(raw.find(name)) {}

  bool present() const { return section_ != nullptr; }

  const Entry* get(const std::string& key) {
    if (!section_) return nullptr;
    auto it = section_->find(key);
    if (it == section_->end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }

  double number(const std::string& key, double fallback) {
    const Entry* e = get(key);
    return e ? parse_number(key, *e) : fallback;
  }

  double required_number(const std::string& key) {
    const Entry* e = get(key);
    if (!e) missing(key);
    return parse_number(key, *e);
  }

  long integer(const std::string& key, long fallback) {
    const Entry* e = get(key);
    if (!e) return fallback;
    const double v = parse_number(key, *e);
    const long n = static_cast<long>(v);
    if (static_cast<double>(n) != v)
      raw_.fail("key '" + key + "' must be an integer", e->line);
    return n;
  }

  long required_integer(const std::string& key) {
    const Entry* e = get(key);
    if (!e) missing(key);
    return integer(key, 0);
  }

  bool boolean(const std::string& key, bool fallback) {
    const Entry* e = get(key);
    if (!e) return fallback;
    if (e->value == "true") return true;
    if (e->value == "false") return false;
    raw_.fail("key '" + key + "' must be true or false", e->line);
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const Entry* e = get(key);
    return e ? e->value : fallback;
  }

  std::string required_text(const std::string& key) {
    const Entry* e = get(key);
    if (!e) missing(key);
    return e->value;
  }

  std::vector<std::string> list(const std::string& key,
                                const std::vector<std::string>& fallback) {
    const Entry* e = get(key);
    if (!e) return fallback;
    std::vector<std::string> items;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) items.push_back(item);
    }
    if (items.empty()) raw_.fail("empty list for key '" + key + "'", e->line);
    return items;
  }

  [[noreturn]] void missing(const std::string& key) {
    throw ConfigError(raw_.path + ": missing required key '" + key +
                          "' in section [" + name_ + "]",
                      0);
  }

  void check_unknown() {
    if (!section_) return;
    for (const auto& [key, entry] : *section_)
      if (!entry.used)
        raw_.fail("unknown key '" + key + "' in section [" + name_ + "]",
                  entry.line);
  }

  RawConfig& raw() { return raw_; }

 private:
  double parse_number(const std::string& key, const Entry& e) {
    try {
      size_t pos = 0;
      const double v = std::stod(e.value, &pos);
      if (pos != e.value.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      raw_.fail("key '" + key + "' is not a number: '" + e.value + "'", e.line);
    }
  }

  RawConfig& raw_;
  std::string name_;
  Section* section_;
};

}  // namespace

SystemModel RunConfig::make_model() const {
  return system == ModelKind::DonorChain ? donor_chain_model(delta_mev)
                                         : triple_dot_model(j1_mev, j2_mev);
}

TransferProblem RunConfig::make_problem() const {
  TransferProblem pb;
  pb.model = make_model();
  pb.rho0 = site_projector(initial_site);
  pb.rho_target = site_projector(target_site);
  pb.T = transfer_time_ns;
  pb.N = slices;
  pb.integration = integration;
  return pb;
}

RunConfig parse_run_config(const std::filesystem::path& path) {
  RawConfig raw = read_raw(path);
  RunConfig cfg;

  SectionReader system(raw, "system");
  if (!system.present())
    throw ConfigError(raw.path + ": missing required section [system]", 0);
  const std::string model = system.required_text("model");
  if (model == "donor_chain") {
    cfg.system = ModelKind::DonorChain;
    cfg.delta_mev = system.required_number("delta_mev");
  } else if (model == "triple_dot") {
    cfg.system = ModelKind::TripleDot;
    cfg.j1_mev = system.required_number("j1_mev");
    cfg.j2_mev = system.required_number("j2_mev");
  } else {
    throw ConfigError(raw.path + ": model must be donor_chain or triple_dot", 0);
  }
  cfg.transfer_time_ns = system.required_number("transfer_time_ns");
  cfg.slices = static_cast<int>(system.required_integer("slices"));
  cfg.initial_site = static_cast<int>(system.integer("initial_site", 1));
  cfg.target_site = static_cast<int>(system.integer("target_site", 3));
  if (!(cfg.transfer_time_ns > 0.0))
    throw ConfigError(raw.path + ": transfer_time_ns must be positive", 0);
  if (cfg.slices < 1) throw ConfigError(raw.path + ": slices must be >= 1", 0);
  if (cfg.initial_site < 1 || cfg.initial_site > 3 || cfg.target_site < 1 ||
      cfg.target_site > 3)
    throw ConfigError(raw.path + ": sites must be in 1..3", 0);
  system.check_unknown();

  SectionReader opt(raw, "optimizer");
  cfg.optimizer.epsilon0 = opt.number("epsilon0", 1e-4);
  cfg.optimizer.max_iters = static_cast<int>(opt.integer("max_iters", 5000));
  cfg.optimizer.fidelity_target = opt.number("fidelity_target", 0.999);
  cfg.optimizer.grad_tol = opt.number("grad_tol", 1e-8);
  cfg.optimizer.restarts = static_cast<int>(opt.integer("restarts", 8));
  cfg.optimizer.seed = static_cast<std::uint64_t>(opt.integer("seed", 1));
  cfg.optimizer.init_scale =
      opt.number("init_scale_mev", default_init_scale(cfg.system));
  cfg.optimizer.threads = static_cast<int>(opt.integer("threads", 0));
  cfg.integration.substeps = static_cast<int>(opt.integer("substeps", 64));
  cfg.integration.slice_frozen_controls =
      opt.boolean("slice_frozen_controls", false);
  if (cfg.optimizer.restarts < 1)
    throw ConfigError(raw.path + ": restarts must be >= 1", 0);
  if (!(cfg.optimizer.fidelity_target > 0.0 &&
        cfg.optimizer.fidelity_target <= 1.0))
    throw ConfigError(raw.path + ": fidelity_target must be in (0, 1]", 0);
  if (cfg.integration.substeps < 1)
    throw ConfigError(raw.path + ": substeps must be >= 1", 0);
  opt.check_unknown();

  SectionReader spin(raw, "spin");
  cfg.spin.present = spin.present();
  if (spin.present()) {
    cfg.spin.hyperfine_mhz = spin.number("hyperfine_mhz", 117.5);
    cfg.spin.hyperfine_raw_coefficient =
        spin.boolean("hyperfine_raw_coefficient", false);
    cfg.spin.gamma_e_mhz_per_g = spin.number("gamma_e_mhz_per_gauss", 2.8024952);
    cfg.spin.gamma_n_mhz_per_g = spin.number("gamma_n_mhz_per_gauss", 0.0017235);
    const auto fields =
        spin.list("b_fields_gauss", std::vector<std::string>{"0", "500"});
    cfg.spin.b_fields_gauss.clear();
    for (const auto& f : fields) {
      try {
        cfg.spin.b_fields_gauss.push_back(std::stod(f));
      } catch (...) {
        throw ConfigError(raw.path + ": bad field value '" + f +
                              "' in b_fields_gauss",
                          0);
      }
    }
    spin.check_unknown();
  }

  SectionReader output(raw, "output");
  cfg.output.directory = output.text("directory", "out");
  const auto formats =
      output.list("formats", std::vector<std::string>{"csv", "json"});
  cfg.output.csv = false;
  cfg.output.json = false;
  for (const auto& f : formats) {
    if (f == "csv")
      cfg.output.csv = true;
    else if (f == "json")
      cfg.output.json = true;
    else
      throw ConfigError(raw.path + ": formats must be a subset of {csv, json}", 0);
  }
  output.check_unknown();

  return cfg;
}

}  // namespace shuttle
