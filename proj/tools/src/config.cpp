#include "agestruct_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gallery_data.hpp"

namespace agestruct::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"run", {"model", "t_final", "dt", "a_max", "length", "n_x", "seed", "snapshots", "threads"}},
      {"window", {"length", "min_length", "tol", "max_iter", "r_bound", "theta", "p"}},
      {"diffusion", {"law", "d0", "c"}},
      {"birth", {"age", "response", "beta", "k", "a1", "a2"}},
      {"mortality", {"m0", "m_age", "m_pop"}},
      {"initial", {"profile", "amplitude", "width", "x_mod", "noise"}},
      {"delay", {"tau", "history", "rate"}},
      {"haptotaxis", {"chi", "chi0", "chi1", "f0", "f_mod", "v0"}},
      {"proteus", {"tau", "xi", "xi0", "v0", "v_mod"}},
      {"linear", {"b0", "b_mod"}},
      {"validation", {"z_min", "z_max", "samples"}},
      {"sweep", {"expect_collapse"}},
  };
  return s;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::string text(const std::string& key, std::string fallback) const {
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    return v ? trim(*v) : fallback;
  }

  double real(const std::string& key, double fallback) const {
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    return v ? parse_real(key, trim(*v)) : fallback;
  }

  long long integer(const std::string& key, long long fallback) const {
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '.'));
    if (!v) {
      return fallback;
    }
    const std::string s = trim(*v);
    long long out = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || end != s.data() + s.size()) {
      throw ConfigError(key + ": expected an integer, got '" + s + "'");
    }
    return out;
  }

  bool boolean(const std::string& key, bool fallback) const {
    const std::string s = text(key, fallback ? "true" : "false");
    if (s == "true" || s == "1" || s == "yes") {
      return true;
    }
    if (s == "false" || s == "0" || s == "no") {
      return false;
    }
    throw ConfigError(key + ": expected true or false, got '" + s + "'");
  }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(text(key, ""));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) {
        out.push_back(parse_real(key, item));
      }
    }
    return out;
  }

  static double parse_real(const std::string& key, const std::string& s) {
    double out = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || end != s.data() + s.size() || !std::isfinite(out)) {
      throw ConfigError(key + ": expected a finite number, got '" + s + "'");
    }
    return out;
  }

 private:
  const pt::ptree& tree_;
};

void check_schema(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) {
      throw ConfigError("unknown section [" + section + "]");
    }
    if (!body.data().empty()) {
      throw ConfigError("key '" + section + "' outside of a section");
    }
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) {
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      }
    }
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw ConfigError(what);
  }
}

void require_one_of(const std::string& key, const std::string& value,
                    std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (value == a) {
      return;
    }
  }
  throw ConfigError(key + ": unknown choice '" + value + "'");
}

Config read(const pt::ptree& tree) {
  check_schema(tree);
  const Reader r(tree);
  Config c;

  c.run.model = r.text("run.model", c.run.model);
  require_one_of("run.model", c.run.model,
                 {"delay_birth", "haptotaxis", "proteus", "renewal", "linear"});
  c.run.t_final = r.real("run.t_final", c.run.t_final);
  c.run.dt = r.real("run.dt", c.run.dt);
  c.run.a_max = r.real("run.a_max", c.run.a_max);
  c.run.length = r.real("run.length", c.run.length);
  const long long n_x = r.integer("run.n_x", static_cast<long long>(c.run.n_x));
  require(n_x >= 3, "run.n_x must be at least 3");
  c.run.n_x = static_cast<std::size_t>(n_x);
  const long long seed = r.integer("run.seed", static_cast<long long>(c.run.seed));
  require(seed >= 0, "run.seed must be non-negative");
  c.run.seed = static_cast<std::uint64_t>(seed);
  c.run.snapshots = r.list("run.snapshots");
  const long long threads = r.integer("run.threads", c.run.threads);
  require(threads >= 1 && threads <= 1024, "run.threads must be in [1, 1024]");
  c.run.threads = static_cast<int>(threads);
  require(c.run.t_final > 0.0, "run.t_final must be positive");
  require(c.run.dt > 0.0, "run.dt must be positive");
  require(c.run.length > 0.0, "run.length must be positive");

  c.window.length = r.real("window.length", c.window.length);
  c.window.min_length = r.real("window.min_length", c.window.min_length);
  c.window.tol = r.real("window.tol", c.window.tol);
  c.window.max_iter = static_cast<int>(r.integer("window.max_iter", c.window.max_iter));
  c.window.r_bound = r.real("window.r_bound", c.window.r_bound);
  c.window.theta = r.real("window.theta", c.window.theta);
  c.window.norm.p = r.real("window.p", c.window.norm.p);
  require(c.window.norm.p >= 1.0, "window.p must be at least 1");
  try {
    c.window.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[window]: ") + e.what());
  }

  c.diffusion.law = r.text("diffusion.law", c.diffusion.law);
  require_one_of("diffusion.law", c.diffusion.law, {"constant", "linear", "quadratic", "saturating"});
  c.diffusion.d0 = r.real("diffusion.d0", c.diffusion.d0);
  c.diffusion.c = r.real("diffusion.c", c.diffusion.c);

  c.birth.age = r.text("birth.age", c.birth.age);
  require_one_of("birth.age", c.birth.age, {"constant", "window"});
  c.birth.response = r.text("birth.response", c.birth.response);
  require_one_of("birth.response", c.birth.response,
                 {"constant", "linear", "square", "logistic", "saturating"});
  c.birth.beta = r.real("birth.beta", c.birth.beta);
  c.birth.k = r.real("birth.k", c.birth.k);
  c.birth.a1 = r.real("birth.a1", c.birth.a1);
  c.birth.a2 = r.real("birth.a2", c.birth.a2);
  require(c.birth.a1 <= c.birth.a2, "birth.a1 must not exceed birth.a2");

  c.mortality.m0 = r.real("mortality.m0", c.mortality.m0);
  c.mortality.m_age = r.real("mortality.m_age", c.mortality.m_age);
  c.mortality.m_pop = r.real("mortality.m_pop", c.mortality.m_pop);

  c.initial.profile = r.text("initial.profile", c.initial.profile);
  require_one_of("initial.profile", c.initial.profile,
                 {"constant", "parabola", "smooth", "exponential"});
  c.initial.amplitude = r.real("initial.amplitude", c.initial.amplitude);
  c.initial.width = r.real("initial.width", c.initial.width);
  c.initial.x_mod = r.real("initial.x_mod", c.initial.x_mod);
  c.initial.noise = r.real("initial.noise", c.initial.noise);
  require(c.initial.width > 0.0, "initial.width must be positive");
  require(c.initial.amplitude >= 0.0, "initial.amplitude must be non-negative");
  require(std::abs(c.initial.x_mod) <= 1.0, "initial.x_mod must lie in [-1, 1]");
  require(c.initial.noise >= 0.0, "initial.noise must be non-negative");

  c.delay.tau = r.real("delay.tau", c.delay.tau);
  c.delay.history = r.text("delay.history", c.delay.history);
  require_one_of("delay.history", c.delay.history, {"constant", "exponential"});
  c.delay.rate = r.real("delay.rate", c.delay.rate);
  require(c.delay.tau > 0.0, "delay.tau must be positive");

  c.haptotaxis.chi = r.text("haptotaxis.chi", c.haptotaxis.chi);
  require_one_of("haptotaxis.chi", c.haptotaxis.chi, {"constant", "linear"});
  c.haptotaxis.chi0 = r.real("haptotaxis.chi0", c.haptotaxis.chi0);
  c.haptotaxis.chi1 = r.real("haptotaxis.chi1", c.haptotaxis.chi1);
  c.haptotaxis.f0 = r.real("haptotaxis.f0", c.haptotaxis.f0);
  c.haptotaxis.f_mod = r.real("haptotaxis.f_mod", c.haptotaxis.f_mod);
  c.haptotaxis.v0 = r.real("haptotaxis.v0", c.haptotaxis.v0);

  c.proteus.tau = r.real("proteus.tau", c.proteus.tau);
  c.proteus.xi = r.text("proteus.xi", c.proteus.xi);
  require_one_of("proteus.xi", c.proteus.xi, {"inverse", "constant"});
  c.proteus.xi0 = r.real("proteus.xi0", c.proteus.xi0);
  c.proteus.v0 = r.real("proteus.v0", c.proteus.v0);
  c.proteus.v_mod = r.real("proteus.v_mod", c.proteus.v_mod);

  c.linear.b0 = r.real("linear.b0", c.linear.b0);
  c.linear.b_mod = r.real("linear.b_mod", c.linear.b_mod);

  c.validation.z_min = r.real("validation.z_min", c.validation.z_min);
  c.validation.z_max = r.real("validation.z_max", c.validation.z_max);
  c.validation.samples = static_cast<int>(r.integer("validation.samples", c.validation.samples));
  require(c.validation.z_min <= c.validation.z_max, "validation.z_min must not exceed z_max");
  require(c.validation.samples >= 2, "validation.samples must be at least 2");

  c.sweep.expect_collapse = r.boolean("sweep.expect_collapse", c.sweep.expect_collapse);
  return c;
}

}  // namespace

Config parse_config(std::istream& in, const Overrides& overrides) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  for (const auto& [key, value] : overrides) {
    const auto dot = key.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == key.size()) {
      throw ConfigError("override '" + key + "' must have the form section.key");
    }
    tree.put(pt::ptree::path_type(key, '.'), value);
  }
  return read(tree);
}

Config parse_config_text(const std::string& text, const Overrides& overrides) {
  std::istringstream in(text);
  return parse_config(in, overrides);
}

Config load_config(const std::string& path_or_name, const Overrides& overrides) {
  std::ifstream in(path_or_name);
  if (in) {
    return parse_config(in, overrides);
  }
  if (!std::filesystem::exists(path_or_name)) {
    for (const auto& [name, text] : detail::gallery_entries) {
      if (path_or_name == name) {
        return parse_config_text(std::string(text), overrides);
      }
    }
  }
  throw ConfigError("cannot read config '" + path_or_name + "'");
}

std::vector<std::string> gallery_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : detail::gallery_entries) {
    out.emplace_back(name);
  }
  return out;
}

const std::string& gallery_text(const std::string& name) {
  static const std::map<std::string, std::string> cache = [] {
    std::map<std::string, std::string> m;
    for (const auto& [n, text] : detail::gallery_entries) {
      m.emplace(n, std::string(text));
    }
    return m;
  }();
  const auto it = cache.find(name);
  if (it == cache.end()) {
    throw ConfigError("unknown gallery config '" + name + "'");
  }
  return it->second;
}

}  // namespace agestruct::cli
