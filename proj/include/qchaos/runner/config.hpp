#pragma once

// Flat `key = value` experiment configuration. Lines starting with '#' are
// comments; a `[config]` section header is optional, and `[run]` /
// `[derived]` sections (written into manifests) are skipped, so a manifest
// can be fed back in as a config.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qchaos/baker.hpp"
#include "qchaos/dynamics.hpp"
#include "qchaos/error.hpp"
#include "qchaos/hamiltonian.hpp"
#include "qchaos/runner/csv.hpp"

namespace qchaos::runner {

enum class Experiment { SpinEvolve, BakerEvolve, Spectrum, Levels, Residuals, SweepF };
enum class HamiltonianKind { Hc, Hr, Hf };
enum class InitialKind { BasisZero, BasisIndex, RandomProduct };

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::SpinEvolve: return "spin_evolve";
    case Experiment::BakerEvolve: return "baker_evolve";
    case Experiment::Spectrum: return "spectrum";
    case Experiment::Levels: return "levels";
    case Experiment::Residuals: return "residuals";
    case Experiment::SweepF: return "sweep_f";
  }
  return "?";
}

inline const char* to_string(HamiltonianKind h) {
  switch (h) {
    case HamiltonianKind::Hc: return "Hc";
    case HamiltonianKind::Hr: return "Hr";
    case HamiltonianKind::Hf: return "Hf";
  }
  return "?";
}

inline std::optional<Experiment> parse_experiment(std::string_view s) {
  for (auto e : {Experiment::SpinEvolve, Experiment::BakerEvolve, Experiment::Spectrum,
                 Experiment::Levels, Experiment::Residuals, Experiment::SweepF}) {
    if (s == to_string(e)) return e;
  }
  return std::nullopt;
}

struct InitialState {
  InitialKind kind = InitialKind::BasisZero;
  std::int64_t index = 0;

  std::string str() const {
    switch (kind) {
      case InitialKind::BasisZero: return "basis_zero";
      case InitialKind::BasisIndex: return "basis:" + std::to_string(index);
      case InitialKind::RandomProduct: return "random_product";
    }
    return "?";
  }
};

/// Every configurable key, in the order they are echoed.
inline const std::vector<std::pair<std::string, std::string>>& config_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"experiment", "spin_evolve | baker_evolve | spectrum | levels | residuals | sweep_f"},
      {"hamiltonian", "Hc | Hr | Hf (default Hc; ignored by baker_evolve)"},
      {"gamma1", "Harper hopping coupling (default 0.5)"},
      {"gamma2", "Harper potential coupling (default 2.5)"},
      {"f", "correlation fraction in [0,1]; required for Hf"},
      {"f_values", "comma-separated fractions for sweep_f (default 0.9,0.8)"},
      {"dim", "matrix dimension N (levels/residuals default 256, baker default 128)"},
      {"n", "number of spins, N = 2^n (default 8)"},
      {"p", "spins kept by the partial trace, d1 = 2^p (default 5)"},
      {"keep_dim", "kept subsystem dimension for baker_evolve (default 8)"},
      {"hbar", "Planck constant (default 0.1)"},
      {"dt", "sampling interval (default 0.1)"},
      {"num_samples", "entropy samples (default 1024)"},
      {"transient_cut", "samples dropped before spectra/steady means (default 128)"},
      {"num_steps", "baker iterations (default 512)"},
      {"baker_convention", "saraceno | balazs_voros (default saraceno)"},
      {"initial_state", "basis_zero | basis:<i> | random_product (default basis_zero)"},
      {"seed", "master seed, unsigned 64-bit (default 1)"},
      {"pool", "number of seeds pooled (default 20 for levels/residuals/sweep_f, else 1)"},
      {"bin_count", "histogram bins for residual parameters (default 32)"},
      {"output_path", "output directory (default qchaos_out; not echoed in manifests)"},
  };
  return keys;
}

struct ExperimentConfig {
  Experiment experiment = Experiment::SpinEvolve;
  HamiltonianKind hamiltonian = HamiltonianKind::Hc;
  HarperParams harper{};
  std::optional<double> f;
  std::vector<double> f_values;
  std::optional<std::int64_t> dim;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> p;
  std::optional<std::int64_t> keep_dim;
  double hbar = 0.1;
  double dt = 0.1;
  std::int64_t num_samples = 1024;
  std::int64_t transient_cut = 128;
  std::int64_t num_steps = 512;
  BakerConvention baker_convention = BakerConvention::Saraceno;
  InitialState initial_state{};
  std::uint64_t seed = 1;
  std::optional<std::int64_t> pool;
  std::int64_t bin_count = 32;
  std::filesystem::path output_path = "qchaos_out";
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] inline void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

inline double to_real(const std::string& key, const std::string& v) {
  try {
    const double x = parse_double(v);
    if (!std::isfinite(x)) config_error(key + " must be finite");
    return x;
  } catch (const Error&) {
    config_error(key + ": expected a number, got '" + v + "'");
  }
}

inline std::int64_t to_int(const std::string& key, const std::string& v) {
  std::int64_t x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    config_error(key + ": expected an integer, got '" + v + "'");
  }
  return x;
}

inline std::uint64_t to_uint(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    config_error(key + ": expected an unsigned integer, got '" + v + "'");
  }
  return x;
}

}  // namespace detail

/// Applies one key; unknown keys and malformed values are config errors.
inline void set_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "experiment") {
    auto e = parse_experiment(value);
    if (!e) config_error("unknown experiment '" + value + "'");
    cfg.experiment = *e;
  } else if (key == "hamiltonian") {
    if (value == "Hc") cfg.hamiltonian = HamiltonianKind::Hc;
    else if (value == "Hr") cfg.hamiltonian = HamiltonianKind::Hr;
    else if (value == "Hf") cfg.hamiltonian = HamiltonianKind::Hf;
    else config_error("unknown hamiltonian '" + value + "'");
  } else if (key == "gamma1") {
    cfg.harper.gamma1 = to_real(key, value);
  } else if (key == "gamma2") {
    cfg.harper.gamma2 = to_real(key, value);
  } else if (key == "f") {
    cfg.f = to_real(key, value);
  } else if (key == "f_values") {
    cfg.f_values.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) cfg.f_values.push_back(to_real(key, trim(item)));
  } else if (key == "dim") {
    cfg.dim = to_int(key, value);
  } else if (key == "n") {
    cfg.n = to_int(key, value);
  } else if (key == "p") {
    cfg.p = to_int(key, value);
  } else if (key == "keep_dim") {
    cfg.keep_dim = to_int(key, value);
  } else if (key == "hbar") {
    cfg.hbar = to_real(key, value);
  } else if (key == "dt") {
    cfg.dt = to_real(key, value);
  } else if (key == "num_samples") {
    cfg.num_samples = to_int(key, value);
  } else if (key == "transient_cut") {
    cfg.transient_cut = to_int(key, value);
  } else if (key == "num_steps") {
    cfg.num_steps = to_int(key, value);
  } else if (key == "baker_convention") {
    if (value == "saraceno") cfg.baker_convention = BakerConvention::Saraceno;
    else if (value == "balazs_voros") cfg.baker_convention = BakerConvention::BalazsVoros;
    else config_error("unknown baker_convention '" + value + "'");
  } else if (key == "initial_state") {
    if (value == "basis_zero") {
      cfg.initial_state = {InitialKind::BasisZero, 0};
    } else if (value == "random_product") {
      cfg.initial_state = {InitialKind::RandomProduct, 0};
    } else if (value.rfind("basis:", 0) == 0) {
      cfg.initial_state = {InitialKind::BasisIndex, to_int(key, value.substr(6))};
    } else {
      config_error("unknown initial_state '" + value + "'");
    }
  } else if (key == "seed") {
    cfg.seed = to_uint(key, value);
  } else if (key == "pool") {
    cfg.pool = to_int(key, value);
  } else if (key == "bin_count") {
    cfg.bin_count = to_int(key, value);
  } else if (key == "output_path") {
    cfg.output_path = value;
  } else {
    config_error("unknown key '" + key + "'");
  }
}

inline ExperimentConfig parse_config(std::istream& in, ExperimentConfig cfg = {}) {
  using namespace detail;
  std::string line;
  std::map<std::string, int> seen;
  bool in_config = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t.front() == '[') {
      if (t == "[config]") in_config = true;
      else if (t == "[run]" || t == "[derived]") in_config = false;
      else config_error("line " + std::to_string(lineno) + ": unknown section " + t);
      continue;
    }
    if (!in_config) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) config_error("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (seen[key]++ > 0) config_error("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    set_key(cfg, key, value);
  }
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot read config " + path.string());
  return parse_config(in, std::move(base));
}

/// Geometry and defaults after validation.
struct ResolvedConfig {
  ExperimentConfig raw;
  Eigen::Index dim = 0;
  TensorSplit split{};
  std::int64_t pool = 1;
};

inline bool uses_spins(Experiment e) {
  return e == Experiment::SpinEvolve || e == Experiment::Spectrum || e == Experiment::SweepF;
}

inline int exact_log2(std::int64_t x) {
  if (x < 1 || (x & (x - 1)) != 0) return -1;
  int k = 0;
  while ((std::int64_t{1} << k) < x) ++k;
  return k;
}

/// Validates the combination of keys before any computation.
inline ResolvedConfig resolve(const ExperimentConfig& cfg) {
  using detail::config_error;
  ResolvedConfig r;
  r.raw = cfg;
  const Experiment e = cfg.experiment;

  if (!std::isfinite(cfg.harper.gamma1) || !std::isfinite(cfg.harper.gamma2)) config_error("gammas must be finite");
  if (cfg.f && !(*cfg.f >= 0.0 && *cfg.f <= 1.0)) config_error("f must lie in [0, 1]");
  for (double f : cfg.f_values) {
    if (!(f >= 0.0 && f <= 1.0)) config_error("f_values entries must lie in [0, 1]");
  }
  if (!(cfg.hbar > 0.0)) config_error("hbar must be positive");
  if (!(cfg.dt > 0.0)) config_error("dt must be positive");
  if (cfg.bin_count < 4) config_error("bin_count must be at least 4");

  if (e == Experiment::SweepF) {
    // Hc is the parse default, so only an explicit Hr is detectably wrong.
    if (cfg.hamiltonian == HamiltonianKind::Hr) config_error("sweep_f always builds Hf, not Hr");
    r.raw.hamiltonian = HamiltonianKind::Hf;
    if (cfg.f) config_error("sweep_f takes f_values, not f");
    if (r.raw.f_values.empty()) r.raw.f_values = {0.9, 0.8};
  } else {
    if (!cfg.f_values.empty()) config_error("f_values is only valid for sweep_f");
    if (e != Experiment::BakerEvolve && cfg.hamiltonian == HamiltonianKind::Hf && !cfg.f) {
      config_error("hamiltonian Hf requires f");
    }
    if (cfg.hamiltonian != HamiltonianKind::Hf && cfg.f) config_error("f is only valid with hamiltonian Hf");
  }

  if (uses_spins(e)) {
    if (cfg.keep_dim) config_error("keep_dim is only valid for baker_evolve; use p");
    std::int64_t n = cfg.n.value_or(8);
    if (cfg.dim) {
      const int k = exact_log2(*cfg.dim);
      if (k < 0) config_error("dim must be a power of two for spin experiments");
      if (cfg.n && *cfg.n != k) config_error("dim and n disagree");
      n = k;
    }
    const std::int64_t p = cfg.p.value_or(5);
    if (n < 2 || n > 12) config_error("n must lie in [2, 12]");
    if (p < 1 || p >= n) config_error("p must satisfy 1 <= p < n");
    r.raw.n = n;
    r.raw.p = p;
    r.raw.dim.reset();
    r.dim = Eigen::Index{1} << n;
    r.split = {Eigen::Index{1} << p, Eigen::Index{1} << (n - p)};
    if (cfg.num_samples < 1) config_error("num_samples must be positive");
    if (cfg.transient_cut < 0 || cfg.transient_cut >= cfg.num_samples) {
      config_error("transient_cut must satisfy 0 <= transient_cut < num_samples");
    }
    if (e != Experiment::SpinEvolve && cfg.num_samples - cfg.transient_cut < 8) {
      config_error("spectra need at least 8 post-transient samples");
    }
  } else if (e == Experiment::BakerEvolve) {
    if (cfg.n || cfg.p) config_error("baker_evolve takes dim and keep_dim, not n/p");
    const std::int64_t dim = cfg.dim.value_or(128);
    const std::int64_t keep = cfg.keep_dim.value_or(8);
    if (dim < 2 || dim % 2 != 0) config_error("baker dim must be even and >= 2");
    if (keep < 1 || dim % keep != 0) config_error("keep_dim must divide dim");
    if (cfg.num_steps < 1) config_error("num_steps must be positive");
    if (cfg.transient_cut < 0 || cfg.transient_cut > cfg.num_steps - 8) {
      config_error("transient_cut must leave at least 8 baker samples");
    }
    r.raw.dim = dim;
    r.raw.keep_dim = keep;
    r.dim = dim;
    r.split = {keep, dim / keep};
  } else {
    if (cfg.n || cfg.p || cfg.keep_dim) config_error("levels/residuals take dim, not n/p/keep_dim");
    const std::int64_t dim = cfg.dim.value_or(256);
    if (dim < 3) config_error("dim must be at least 3");
    if (e == Experiment::Residuals && dim < cfg.bin_count) config_error("dim must be at least bin_count");
    r.raw.dim = dim;
    r.dim = dim;
  }

  if (cfg.initial_state.kind == InitialKind::BasisIndex &&
      (cfg.initial_state.index < 0 || cfg.initial_state.index >= r.dim)) {
    config_error("initial_state basis index out of range");
  }

  const bool statistical =
      e == Experiment::Levels || e == Experiment::Residuals || e == Experiment::SweepF;
  r.pool = cfg.pool.value_or(statistical ? 20 : 1);
  if (r.pool < 1) config_error("pool must be positive");
  r.raw.pool = r.pool;
  return r;
}

/// Canonical `key = value` echo of a resolved config (output_path excluded).
inline std::string echo_config(const ResolvedConfig& r) {
  const ExperimentConfig& c = r.raw;
  std::ostringstream out;
  auto line = [&](const std::string& k, const std::string& v) { out << k << " = " << v << '\n'; };
  const Experiment e = c.experiment;
  line("experiment", to_string(e));
  if (e != Experiment::BakerEvolve) {
    line("hamiltonian", to_string(c.hamiltonian));
    line("gamma1", format_double(c.harper.gamma1));
    line("gamma2", format_double(c.harper.gamma2));
    if (c.f) line("f", format_double(*c.f));
  }
  if (e == Experiment::SweepF) {
    std::string list;
    for (std::size_t i = 0; i < c.f_values.size(); ++i) {
      if (i) list += ',';
      list += format_double(c.f_values[i]);
    }
    line("f_values", list);
  }
  if (uses_spins(e)) {
    line("n", std::to_string(*c.n));
    line("p", std::to_string(*c.p));
  } else {
    line("dim", std::to_string(*c.dim));
  }
  if (e == Experiment::BakerEvolve) {
    line("keep_dim", std::to_string(*c.keep_dim));
    line("num_steps", std::to_string(c.num_steps));
    line("baker_convention", c.baker_convention == BakerConvention::Saraceno ? "saraceno" : "balazs_voros");
    line("transient_cut", std::to_string(c.transient_cut));
  }
  if (uses_spins(e)) {
    line("hbar", format_double(c.hbar));
    line("dt", format_double(c.dt));
    line("num_samples", std::to_string(c.num_samples));
    line("transient_cut", std::to_string(c.transient_cut));
  }
  if (uses_spins(e) || e == Experiment::BakerEvolve) line("initial_state", c.initial_state.str());
  if (e == Experiment::Residuals || e == Experiment::SweepF) line("bin_count", std::to_string(c.bin_count));
  line("seed", std::to_string(c.seed));
  line("pool", std::to_string(r.pool));
  return out.str();
}

}  // namespace qchaos::runner
