#include "subnls/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "subnls/errors.hpp"

namespace subnls {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Reads one section, remembering which keys were consumed.
class Section {
 public:
  Section(std::string name, const pt::ptree* tree) : name_(std::move(name)), tree_(tree) {}

  bool present() const { return tree_ != nullptr; }
  bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

  std::string full(const std::string& key) const { return name_ + "." + key; }

  std::optional<std::string> raw(const std::string& key) {
    if (!has(key)) return std::nullopt;
    used_.insert(key);
    return trim(tree_->get<std::string>(pt::ptree::path_type(key, '\0')));
  }

  std::string required(const std::string& key) {
    auto v = raw(key);
    if (!v) throw ConfigError("missing required key '" + full(key) + "'");
    return *v;
  }

  double number(const std::string& key, double fallback) {
    auto v = raw(key);
    return v ? to_double(key, *v) : fallback;
  }
  double required_number(const std::string& key) { return to_double(key, required(key)); }

  long long integer(const std::string& key, long long fallback) {
    auto v = raw(key);
    return v ? to_integer(key, *v) : fallback;
  }

  double to_double(const std::string& key, const std::string& s) const {
    double x = 0.0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, x);
    if (ec != std::errc() || ptr != end || !std::isfinite(x))
      throw ConfigError("key '" + full(key) + "': expected a finite number, got '" + s + "'");
    return x;
  }

  long long to_integer(const std::string& key, const std::string& s) const {
    long long x = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, x);
    if (ec != std::errc() || ptr != end)
      throw ConfigError("key '" + full(key) + "': expected an integer, got '" + s + "'");
    return x;
  }

  std::vector<std::string> list(const std::string& key) {
    std::vector<std::string> out;
    auto v = raw(key);
    if (!v) return out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) throw ConfigError("key '" + full(key) + "': empty list entry");
      out.push_back(item);
    }
    if (out.empty()) throw ConfigError("key '" + full(key) + "': empty list");
    return out;
  }

  void reject(const std::string& key, const std::string& why) {
    if (has(key)) throw ConfigError("key '" + full(key) + "' " + why);
  }

  void finish() const {
    if (!tree_) return;
    for (const auto& [k, v] : *tree_) {
      if (!v.empty()) throw ConfigError("unexpected nesting under '" + full(k) + "'");
      if (!used_.count(k)) throw ConfigError("unknown key '" + full(k) + "'");
    }
  }

 private:
  std::string name_;
  const pt::ptree* tree_;
  std::set<std::string> used_;
};

const pt::ptree* child(const pt::ptree& root, const std::string& name) {
  const auto it = root.find(name);
  return it == root.not_found() ? nullptr : &it->second;
}

Nonlinearity parse_nonlinearity(Section& s, int dim) {
  const std::string family = s.required("family");
  auto only = [&](std::set<std::string> allowed) {
    for (const char* k : {"alpha", "mu", "p", "omega"})
      if (!allowed.count(k)) s.reject(k, "does not apply to family '" + family + "'");
  };
  try {
    if (family == "log") {
      only({"alpha"});
      return Nonlinearity::logarithmic(dim, s.required_number("alpha"));
    }
    if (family == "log_power") {
      only({"alpha", "mu", "p"});
      return Nonlinearity::log_power(dim, s.required_number("alpha"), s.required_number("mu"),
                                     s.required_number("p"));
    }
    if (family == "saturation") {
      only({});
      return Nonlinearity::saturation(dim);
    }
    if (family == "power_sublinear") {
      only({"omega"});
      return Nonlinearity::power_sublinear(dim, s.required_number("omega"));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("section 'nonlinearity': ") + e.what());
  }
  throw ConfigError("key 'nonlinearity.family': unknown family '" + family +
                    "' (expected log, log_power, saturation or power_sublinear)");
}

OrliczConfig parse_orlicz(Section& s) {
  OrliczConfig o;
  const std::string family = s.required("family");
  auto only = [&](std::set<std::string> allowed) {
    for (const char* k : {"alpha", "p", "q"})
      if (!allowed.count(k)) s.reject(k, "does not apply to family '" + family + "'");
  };
  if (family == "log_matched") {
    only({"alpha"});
    o.family = NFamily::LogMatched;
    o.alpha = s.number("alpha", 1.0);
  } else if (family == "log_matched_tail") {
    only({"alpha", "p"});
    o.family = NFamily::LogMatchedPowerTail;
    o.alpha = s.number("alpha", 1.0);
    o.p = s.required_number("p");
  } else if (family == "pure_q") {
    only({"q"});
    o.family = NFamily::PureQ;
    o.q = s.required_number("q");
  } else {
    throw ConfigError("key 'orlicz.family': unknown family '" + family +
                      "' (expected log_matched, log_matched_tail or pure_q)");
  }
  try {
    (void)o.make();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("section 'orlicz': ") + e.what());
  }
  return o;
}

}  // namespace

OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "both") return OutputFormat::Both;
  throw ConfigError("format must be json, csv or both, got '" + s + "'");
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Both: return "both";
  }
  return "both";
}

NFunction OrliczConfig::make() const {
  switch (family) {
    case NFamily::LogMatched: return NFunction::log_matched(alpha);
    case NFamily::LogMatchedPowerTail: return NFunction::log_matched_power_tail(alpha, p);
    case NFamily::PureQ: return NFunction::pure_q(q);
    case NFamily::Custom: break;
  }
  throw ConfigError("custom N-functions cannot be configured from a file");
}

RunConfig parse_config(std::istream& in) {
  pt::ptree root;
  try {
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  static const std::set<std::string> sections{"nonlinearity", "grid", "solver", "output", "orlicz"};
  for (const auto& [k, v] : root) {
    if (v.empty()) throw ConfigError("key '" + k + "' outside of any section");
    if (!sections.count(k)) throw ConfigError("unknown section '" + k + "'");
  }

  RunConfig cfg;
  Section grid("grid", child(root, "grid"));
  if (!grid.present()) throw ConfigError("missing required section 'grid'");
  const long long dim = grid.to_integer("N", grid.required("N"));
  if (dim < 1 || dim > 10) throw ConfigError("key 'grid.N' must lie in 1..10");
  cfg.solve.grid.r_max = grid.number("r_max", cfg.solve.grid.r_max);
  const long long n = grid.integer("n", cfg.solve.grid.n);
  if (n < 2 || n > 10'000'000) throw ConfigError("key 'grid.n' must lie in 2..1e7");
  cfg.solve.grid.n = static_cast<int>(n);
  if (!(cfg.solve.grid.r_max > 0.0)) throw ConfigError("key 'grid.r_max' must be positive");
  grid.finish();

  Section nl("nonlinearity", child(root, "nonlinearity"));
  if (!nl.present()) throw ConfigError("missing required section 'nonlinearity'");
  cfg.solve.spec = parse_nonlinearity(nl, static_cast<int>(dim));
  nl.finish();

  Section sv("solver", child(root, "solver"));
  if (!sv.present()) throw ConfigError("missing required section 'solver'");
  auto& sc = cfg.solve;
  sc.rho = sv.required_number("rho");
  if (sv.has("eps_schedule")) {
    sc.eps_schedule.clear();
    for (const auto& e : sv.list("eps_schedule")) sc.eps_schedule.push_back(sv.to_double("eps_schedule", e));
  }
  sc.tol_grad = sv.number("tol_grad", sc.tol_grad);
  sc.tol_mass = sv.number("tol_mass", sc.tol_mass);
  if (sv.has("seeds")) {
    cfg.seeds.clear();
    for (const auto& e : sv.list("seeds")) {
      const long long s = sv.to_integer("seeds", e);
      if (s < 0) throw ConfigError("key 'solver.seeds': seeds must be >= 0");
      cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    }
  }
  const long long rearrange = sv.integer("rearrange_every", sc.rearrange_every);
  if (rearrange < 0 || rearrange > 1'000'000'000) throw ConfigError("key 'solver.rearrange_every' must be >= 0");
  sc.rearrange_every = static_cast<int>(rearrange);
  sc.step.initial_step = sv.number("initial_step", sc.step.initial_step);
  sc.step.backtrack = sv.number("backtrack", sc.step.backtrack);
  sc.step.max_backtracks = static_cast<int>(sv.integer("max_backtracks", sc.step.max_backtracks));
  const long long max_it = sv.integer("max_iterations", sc.step.max_iterations);
  if (max_it < 1 || max_it > 2'000'000'000) throw ConfigError("key 'solver.max_iterations' must lie in 1..2e9");
  sc.step.max_iterations = static_cast<int>(max_it);
  sc.step.armijo = sv.number("armijo", sc.step.armijo);
  sc.step.max_step = sv.number("max_step", sc.step.max_step);
  if (auto b = sv.raw("backend")) {
    if (*b == "openmp")
      sc.backend = Backend::OpenMP;
    else if (*b == "serial")
      sc.backend = Backend::Serial;
    else
      throw ConfigError("key 'solver.backend' must be openmp or serial, got '" + *b + "'");
  }
  sv.finish();
  try {
    sc.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("section 'solver': ") + e.what());
  }

  Section out("output", child(root, "output"));
  if (auto d = out.raw("directory")) {
    if (d->empty()) throw ConfigError("key 'output.directory' must not be empty");
    cfg.out_dir = *d;
  }
  if (auto f = out.raw("format")) {
    try {
      cfg.format = parse_format(*f);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("key 'output.format': ") + e.what());
    }
  }
  out.finish();

  Section orl("orlicz", child(root, "orlicz"));
  if (orl.present()) {
    cfg.orlicz = parse_orlicz(orl);
    orl.finish();
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  RunConfig cfg = parse_config(in);
  return cfg;
}

nlohmann::json canonical(const RunConfig& cfg) {
  const auto& s = cfg.solve;
  nlohmann::json j;
  j["nonlinearity"] = {{"family", to_string(s.spec.family())}};
  switch (s.spec.family()) {
    case Family::Logarithmic: j["nonlinearity"]["alpha"] = s.spec.alpha(); break;
    case Family::LogPlusPower:
      j["nonlinearity"]["alpha"] = s.spec.alpha();
      j["nonlinearity"]["mu"] = s.spec.mu();
      j["nonlinearity"]["p"] = s.spec.p();
      break;
    case Family::PowerSublinear: j["nonlinearity"]["omega"] = s.spec.omega(); break;
    default: break;
  }
  j["grid"] = {{"N", s.spec.dim()}, {"r_max", s.grid.r_max}, {"n", s.grid.n}};
  j["solver"] = {{"rho", s.rho},
                 {"eps_schedule", s.eps_schedule},
                 {"tol_grad", s.tol_grad},
                 {"tol_mass", s.tol_mass},
                 {"seeds", cfg.seeds},
                 {"rearrange_every", s.rearrange_every},
                 {"initial_step", s.step.initial_step},
                 {"backtrack", s.step.backtrack},
                 {"max_backtracks", s.step.max_backtracks},
                 {"max_iterations", s.step.max_iterations},
                 {"armijo", s.step.armijo},
                 {"max_step", s.step.max_step},
                 {"backend", s.backend == Backend::Serial ? "serial" : "openmp"}};
  if (cfg.orlicz) {
    const auto& o = *cfg.orlicz;
    j["orlicz"] = {{"family", to_string(o.family)}};
    if (o.family != NFamily::PureQ) j["orlicz"]["alpha"] = o.alpha;
    if (o.family == NFamily::LogMatchedPowerTail) j["orlicz"]["p"] = o.p;
    if (o.family == NFamily::PureQ) j["orlicz"]["q"] = o.q;
  }
  return j;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = hex[h & 0xf];
  return out;
}

std::string config_digest(const RunConfig& cfg) { return fnv1a_hex(canonical(cfg).dump()); }

}  // namespace subnls
