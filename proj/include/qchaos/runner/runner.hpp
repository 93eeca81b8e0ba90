#pragma once

// Composes the library into the named experiments and writes CSV
// tables plus one manifest per run directory.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qchaos/baker.hpp"
#include "qchaos/diagnostics.hpp"
#include "qchaos/dynamics.hpp"
#include "qchaos/hamiltonian.hpp"
#include "qchaos/rng.hpp"
#include "qchaos/runner/config.hpp"
#include "qchaos/runner/csv.hpp"
#include "qchaos/version.hpp"

namespace qchaos::runner {

struct RunManifest {
  std::string config_echo;
  std::string version = kVersion;
  double wall_seconds = 0.0;  // reported, never written (outputs must be byte-stable)
  std::vector<std::pair<std::string, double>> derived;
  std::vector<std::string> files;

  std::optional<double> value(const std::string& key) const {
    for (const auto& [k, v] : derived) {
      if (k == key) return v;
    }
    return std::nullopt;
  }

  std::string render() const {
    std::string out = "# qchaos run manifest\n[config]\n" + config_echo + "[run]\nversion = " + version +
                      "\nfiles = ";
    for (std::size_t i = 0; i < files.size(); ++i) {
      if (i) out += ',';
      out += files[i];
    }
    out += "\n[derived]\n";
    for (const auto& [k, v] : derived) out += k + " = " + format_double(v) + '\n';
    return out;
  }
};

/// Runs `body`, prefixing numeric failures with the stage name.
template <class F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config || e.kind() == ErrorKind::Io) throw;
    throw Error(e.kind(), std::string("stage '") + name + "' failed: " + e.what());
  }
}

inline HamiltonianMatrix make_hamiltonian(const ResolvedConfig& r, std::int64_t pool_index,
                                          std::optional<double> f_override = std::nullopt) {
  const auto& c = r.raw;
  const RngSeed seed = derive_seed(RngSeed{c.seed}, SeedStream::Hamiltonian,
                                   static_cast<std::uint64_t>(pool_index));
  switch (c.hamiltonian) {
    case HamiltonianKind::Hc: return center_mean(build_random_symmetric(r.dim, seed));
    case HamiltonianKind::Hr: return center_mean(build_harper(r.dim, c.harper));
    case HamiltonianKind::Hf: {
      const double f = f_override ? *f_override : c.f.value();
      return center_mean(build_interpolated(build_harper(r.dim, c.harper), f, seed));
    }
  }
  throw Error(ErrorKind::Config, "unhandled hamiltonian kind");
}

inline PureState make_initial(const ResolvedConfig& r, std::int64_t pool_index) {
  const auto& init = r.raw.initial_state;
  switch (init.kind) {
    case InitialKind::BasisZero: return PureState::basis(r.dim, 0);
    case InitialKind::BasisIndex: return PureState::basis(r.dim, init.index);
    case InitialKind::RandomProduct:
      return PureState::random_product(
          r.split, derive_seed(RngSeed{r.raw.seed}, SeedStream::InitialState,
                               static_cast<std::uint64_t>(pool_index)));
  }
  throw Error(ErrorKind::Config, "unhandled initial state kind");
}

inline EvolutionConfig evolution_config(const ResolvedConfig& r) {
  return {r.raw.hbar, r.raw.dt, static_cast<std::size_t>(r.raw.num_samples),
          static_cast<std::size_t>(r.raw.transient_cut)};
}

/// Whether pool members differ at all (H_r from a basis state does not).
inline bool seed_dependent(const ResolvedConfig& r) {
  return r.raw.hamiltonian != HamiltonianKind::Hr || r.raw.initial_state.kind == InitialKind::RandomProduct;
}

namespace detail {

inline std::vector<double> times(const EntropySeries& s) {
  std::vector<double> t(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) t[k] = s.time(k);
  return t;
}

struct SeriesStats {
  EntropySeries mean_series;
  double steady_mean = 0.0;
  double samples_to_90 = 0.0;
  double max_entropy = 0.0;
  std::optional<PowerSpectrum> mean_spectrum;
  double flatness = 0.0;
};

/// Pools per-seed series: pointwise mean series, mean steady value, mean
/// samples-to-90%, mean power spectrum and mean per-seed flatness.
inline SeriesStats pool_series(const std::vector<EntropySeries>& runs, bool with_spectrum) {
  SeriesStats st;
  st.mean_series = runs.front();
  std::fill(st.mean_series.values.begin(), st.mean_series.values.end(), 0.0);
  const double n = static_cast<double>(runs.size());
  for (const auto& s : runs) {
    for (std::size_t k = 0; k < s.size(); ++k) st.mean_series.values[k] += s.values[k] / n;
    st.steady_mean += s.steady_mean() / n;
    st.samples_to_90 += static_cast<double>(s.samples_to_reach(0.9)) / n;
    for (double v : s.values) st.max_entropy = std::max(st.max_entropy, v);
    if (with_spectrum) {
      const PowerSpectrum ps = stage("power_spectrum", [&] { return power_spectrum(s); });
      st.flatness += stage("spectral_flatness", [&] { return spectral_flatness(ps); }) / n;
      if (!st.mean_spectrum) {
        st.mean_spectrum = ps;
        std::fill(st.mean_spectrum->power.begin(), st.mean_spectrum->power.end(), 0.0);
      }
      for (std::size_t k = 0; k < ps.size(); ++k) st.mean_spectrum->power[k] += ps.power[k] / n;
    }
  }
  return st;
}

inline std::string f_tag(double f) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, f);
  return std::string(buf, res.ptr);
}

}  // namespace detail

/// Spin-system series for every pool member, reusing one run when the pool
/// is degenerate.
inline std::vector<EntropySeries> spin_series(const ResolvedConfig& r,
                                              std::optional<double> f_override = std::nullopt,
                                              std::vector<SpectralDecomposition>* decomps = nullptr) {
  std::vector<EntropySeries> runs;
  const EvolutionConfig evo = evolution_config(r);
  const bool varies = seed_dependent(r);
  for (std::int64_t i = 0; i < r.pool; ++i) {
    if (!varies && !runs.empty()) {
      runs.push_back(runs.front());
      if (decomps) decomps->push_back(decomps->front());
      continue;
    }
    const HamiltonianMatrix h = stage("build_hamiltonian", [&] { return make_hamiltonian(r, i, f_override); });
    const PureState psi0 = stage("initial_state", [&] { return make_initial(r, i); });
    SpectralDecomposition decomp = stage("eig_symmetric", [&] { return eig_symmetric(h); });
    runs.push_back(stage("entropy_series", [&] { return entropy_series(decomp, psi0, r.split, evo); }));
    if (decomps) decomps->push_back(std::move(decomp));
  }
  return runs;
}

/// Spacing histogram on [0, 5] with bin width 0.1, as a density.
inline std::pair<std::vector<double>, std::vector<double>> spacing_histogram(const std::vector<double>& spacings) {
  constexpr std::size_t bins = 50;
  constexpr double width = 0.1;
  std::vector<double> centers(bins), density(bins, 0.0);
  for (std::size_t k = 0; k < bins; ++k) centers[k] = width * (static_cast<double>(k) + 0.5);
  for (double s : spacings) {
    const auto k = static_cast<std::size_t>(s / width);
    if (k < bins) density[k] += 1.0;
  }
  const double norm = static_cast<double>(spacings.size()) * width;
  for (double& d : density) d /= norm;
  return {centers, density};
}

/// Executes the configured experiment, writing outputs under output_path.
inline RunManifest run(const ExperimentConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const ResolvedConfig r = resolve(config);
  const auto& c = r.raw;
  const std::filesystem::path dir = config.output_path;
  {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
      throw Error(ErrorKind::Io, "cannot create output directory " + dir.string());
    }
  }

  RunManifest manifest;
  manifest.config_echo = echo_config(r);
  auto emit = [&](const std::string& name, std::string_view xn, std::string_view yn,
                  const std::vector<double>& xs, const std::vector<double>& ys) {
    emit_csv(dir / name, xn, yn, xs, ys);
    manifest.files.push_back(name);
  };
  auto derive = [&](const std::string& key, double v) { manifest.derived.emplace_back(key, v); };

  switch (c.experiment) {
    case Experiment::SpinEvolve:
    case Experiment::Spectrum: {
      const bool spectrum = c.experiment == Experiment::Spectrum;
      const auto st = detail::pool_series(spin_series(r), spectrum);
      emit("entropy.csv", "t", "s_R", detail::times(st.mean_series), st.mean_series.values);
      derive("steady_state_mean_entropy", st.steady_mean);
      derive("samples_to_90pct", st.samples_to_90);
      derive("max_entropy", st.max_entropy);
      if (spectrum) {
        emit("spectrum.csv", "freq", "power", st.mean_spectrum->frequencies, st.mean_spectrum->power);
        derive("spectral_flatness", st.flatness);
      }
      break;
    }
    case Experiment::BakerEvolve: {
      const BakerUnitary u = stage("build_baker_unitary", [&] { return build_baker_unitary(r.dim, c.baker_convention); });
      std::vector<EntropySeries> runs;
      for (std::int64_t i = 0; i < r.pool; ++i) {
        if (c.initial_state.kind != InitialKind::RandomProduct && !runs.empty()) {
          runs.push_back(runs.front());
          continue;
        }
        const PureState psi0 = stage("initial_state", [&] { return make_initial(r, i); });
        runs.push_back(stage("baker_entropy_series", [&] {
          return baker_entropy_series(u, psi0, r.split, static_cast<std::size_t>(c.num_steps),
                                      static_cast<std::size_t>(c.transient_cut));
        }));
      }
      const auto st = detail::pool_series(runs, true);
      emit("entropy.csv", "step", "s_R", detail::times(st.mean_series), st.mean_series.values);
      emit("spectrum.csv", "freq", "power", st.mean_spectrum->frequencies, st.mean_spectrum->power);
      derive("steady_state_mean_entropy", st.steady_mean);
      derive("samples_to_90pct", st.samples_to_90);
      derive("max_entropy", st.max_entropy);
      derive("spectral_flatness", st.flatness);
      break;
    }
    case Experiment::Levels: {
      std::vector<double> pooled;
      for (std::int64_t i = 0; i < r.pool; ++i) {
        if (!seed_dependent(r) && i > 0) break;
        const HamiltonianMatrix h = stage("build_hamiltonian", [&] { return make_hamiltonian(r, i); });
        const auto decomp = stage("eig_symmetric", [&] { return eig_symmetric(h); });
        const auto sample = stage("level_spacings", [&] { return level_spacings(decomp); });
        pooled.insert(pooled.end(), sample.spacings.begin(), sample.spacings.end());
      }
      const auto [centers, density] = spacing_histogram(pooled);
      emit("spacings.csv", "s", "density", centers, density);
      derive("ks_wigner", stage("ks_distance", [&] { return ks_distance(pooled, SpacingReference::Wigner); }));
      derive("ks_poisson", stage("ks_distance", [&] { return ks_distance(pooled, SpacingReference::Poisson); }));
      derive("num_spacings", static_cast<double>(pooled.size()));
      break;
    }
    case Experiment::Residuals: {
      std::vector<double> mean_r(static_cast<std::size_t>(r.dim), 0.0);
      const std::int64_t members = seed_dependent(r) ? r.pool : 1;
      for (std::int64_t i = 0; i < members; ++i) {
        const HamiltonianMatrix h = stage("build_hamiltonian", [&] { return make_hamiltonian(r, i); });
        const auto decomp = stage("eig_symmetric", [&] { return eig_symmetric(h); });
        const auto report = stage("residual_parameters", [&] {
          return residual_parameters(decomp, static_cast<std::size_t>(c.bin_count));
        });
        for (std::size_t k = 0; k < mean_r.size(); ++k) mean_r[k] += report.r_values[k] / static_cast<double>(members);
      }
      std::vector<double> index(mean_r.size());
      for (std::size_t k = 0; k < index.size(); ++k) index[k] = static_cast<double>(k);
      emit("residuals.csv", "eigenvector", "r", index, mean_r);
      derive("mean_residual", std::accumulate(mean_r.begin(), mean_r.end(), 0.0) / static_cast<double>(mean_r.size()));
      break;
    }
    case Experiment::SweepF: {
      for (double f : c.f_values) {
        std::vector<SpectralDecomposition> decomps;
        const auto st = detail::pool_series(spin_series(r, f, &decomps), true);
        double mean_residual = 0.0;
        for (const auto& d : decomps) {
          mean_residual += stage("residual_parameters", [&] {
                             return residual_parameters(d, static_cast<std::size_t>(c.bin_count));
                           }).mean() / static_cast<double>(decomps.size());
        }
        const std::string tag = detail::f_tag(f);
        emit("spectrum_f" + tag + ".csv", "freq", "power", st.mean_spectrum->frequencies, st.mean_spectrum->power);
        derive("spectral_flatness_f" + tag, st.flatness);
        derive("steady_state_mean_entropy_f" + tag, st.steady_mean);
        derive("mean_residual_f" + tag, mean_residual);
      }
      break;
    }
  }

  write_atomically(dir / "manifest.txt", manifest.render());
  manifest.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return manifest;
}

/// Exit status for an error kind: 2 config, 4 i/o, 3 numeric.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Io: return 4;
    default: return 3;
  }
}

}  // namespace qchaos::runner
