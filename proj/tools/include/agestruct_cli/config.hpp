#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "agestruct/model.hpp"
#include "agestruct/solver.hpp"

namespace agestruct::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunSection {
  std::string model = "renewal";
  double t_final = 1.0;
  double dt = 0.01;
  double a_max = 10.0;
  double length = 1.0;
  std::size_t n_x = 33;
  std::uint64_t seed = 1;
  std::vector<double> snapshots;
  int threads = 1;
};

struct DiffusionSection {
  // constant | linear | quadratic | saturating
  std::string law = "constant";
  double d0 = 1.0;
  double c = 0.0;
};

// b(a, z) = age(a) * response(z).
struct BirthSection {
  // constant | window (1 on [a1, a2])
  std::string age = "constant";
  // constant: beta; linear: beta z; square: beta z^2;
  // logistic: beta / (1 + k z); saturating: beta z / (1 + k z)
  std::string response = "constant";
  double beta = 1.0;
  double k = 1.0;
  double a1 = 0.0;
  double a2 = 1.0;
};

// m(t, a, z) = m0 + m_age a + m_pop z
struct MortalitySection {
  double m0 = 0.0;
  double m_age = 0.0;
  double m_pop = 0.0;
};

// u0(a, x) = amplitude profile(a) (1 + x_mod cos(pi x / L)) (1 + noise U)
// with U uniform on [0, 1) drawn from the run seed.
struct InitialSection {
  // constant | parabola | smooth | exponential
  std::string profile = "smooth";
  double amplitude = 1.0;
  double width = 2.0;
  double x_mod = 0.0;
  double noise = 0.0;
};

struct DelaySection {
  double tau = 1.0;
  // constant | exponential: ubar0(x) exp(rate s)
  std::string history = "constant";
  double rate = 0.0;
};

struct HaptotaxisSection {
  // constant: chi0; linear: chi0 + chi1 f
  std::string chi = "constant";
  double chi0 = 0.1;
  double chi1 = 0.0;
  double f0 = 1.0;
  double f_mod = 0.0;
  double v0 = 0.0;
};

struct ProteusSection {
  double tau = 2.0;
  // inverse: 1 / (1 + v); constant: xi0
  std::string xi = "inverse";
  double xi0 = 1.0;
  double v0 = 0.5;
  double v_mod = 0.0;
};

// Prescribed boundary density b0 (1 + b_mod cos(pi x / L)).
struct LinearSection {
  double b0 = 0.0;
  double b_mod = 0.0;
};

struct SweepSection {
  bool expect_collapse = false;
};

struct Config {
  RunSection run;
  PicardWindow window;
  DiffusionSection diffusion;
  BirthSection birth;
  MortalitySection mortality;
  InitialSection initial;
  DelaySection delay;
  HaptotaxisSection haptotaxis;
  ProteusSection proteus;
  LinearSection linear;
  ValidationBox validation;
  SweepSection sweep;
};

// `section.key` = value, applied after parsing the file text.
using Overrides = std::vector<std::pair<std::string, std::string>>;

// INI text with [section] headers and key = value lines. Unknown sections or
// keys, malformed numbers and out-of-range values throw ConfigError.
Config parse_config(std::istream& in, const Overrides& overrides = {});
Config parse_config_text(const std::string& text, const Overrides& overrides = {});

// path may also name a gallery entry.
Config load_config(const std::string& path_or_name, const Overrides& overrides = {});

std::vector<std::string> gallery_names();
// Throws ConfigError for an unknown name.
const std::string& gallery_text(const std::string& name);

}  // namespace agestruct::cli
