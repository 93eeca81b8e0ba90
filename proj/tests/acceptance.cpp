// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qchaos/qchaos.hpp"
#include "qchaos/runner/runner.hpp"

using namespace qchaos;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kMasterSeed = 1;
constexpr int kPool = 20;
constexpr int kResidualPool = 10;
const TensorSplit kSpinSplit{32, 8};  // n = 8, p = 5
const EvolutionConfig kEvolution{0.1, 0.1, 1024, 128};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<void(Outcome&)> body;
};

RngSeed hamiltonian_seed(int i) {
  return derive_seed(RngSeed{kMasterSeed}, SeedStream::Hamiltonian, static_cast<std::uint64_t>(i));
}

HamiltonianMatrix hc(int i) { return center_mean(build_random_symmetric(256, hamiltonian_seed(i))); }
HamiltonianMatrix hr() { return center_mean(build_harper(256)); }
HamiltonianMatrix hf(double f, int i) {
  return center_mean(build_interpolated(build_harper(256), f, hamiltonian_seed(i)));
}

EntropySeries spin_run(const HamiltonianMatrix& h) {
  return entropy_series(h, PureState::basis(256, 0), kSpinSplit, kEvolution);
}

// Shared between the entropy and spectrum criteria.
struct SpinPool {
  std::vector<EntropySeries> hc;
  EntropySeries hr;
};

const SpinPool& spin_pool() {
  static const SpinPool pool = [] {
    SpinPool p;
    for (int i = 0; i < kPool; ++i) p.hc.push_back(spin_run(hc(i)));
    p.hr = spin_run(hr());
    return p;
  }();
  return pool;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// 1. Small-system oracle equivalence.
void oracle_equivalence(Outcome& out) {
  double worst_series = 0.0;
  double worst_trace = 0.0;
  int systems = 0;
  for (int total = 4; total <= 16; ++total) {
    for (int d1 = 2; d1 <= total / 2; ++d1) {
      if (total % d1 != 0 || total / d1 < 2) continue;
      const int d2 = total / d1;
      ++systems;
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(1000 * total + 10 * d1 + seed);
        const auto h = build_random_symmetric(total, RngSeed{seed * 7919 + static_cast<std::uint64_t>(total)});
        const auto psi0 = PureState::product(oracle::random_unit_vector(d1, rng), oracle::random_unit_vector(d2, rng));
        const EvolutionConfig cfg{0.1, 0.05, 24, 0};
        const auto series = entropy_series(h, psi0, {d1, d2}, cfg);
        const auto ref = oracle::entropy_series(h.matrix(), psi0.amplitudes(), d1, d2, 0.1, 0.05, 24);
        for (int k = 0; k < 24; ++k) worst_series = std::max(worst_series, std::abs(series.values[k] - ref[k]));

        const PureState generic(oracle::random_unit_vector(total, rng));
        const auto rho = partial_trace(generic, {d1, d2});
        const auto rho_ref = oracle::partial_trace_first(generic.amplitudes(), d1, d2);
        worst_trace = std::max(worst_trace, (rho.matrix() - rho_ref).cwiseAbs().maxCoeff());
      }
    }
  }
  out.detail << systems << " splits x 10 seeds; max |series - oracle| = " << worst_series
             << ", max |partial trace - oracle| = " << worst_trace;
  out.require(worst_series <= 1e-8, "series within 1e-8");
  out.require(worst_trace <= 1e-13, "partial trace within 1e-13");
}

// 2. Norm conservation and Schmidt symmetry.
void unitarity(Outcome& out) {
  double worst_step = 0.0, worst_drift = 0.0, worst_schmidt = 0.0;
  auto track = [&](auto&& step, Eigen::VectorXcd psi, const TensorSplit& split) {
    double prev = psi.norm();
    for (int k = 1; k <= 512; ++k) {
      psi = step(psi);
      const double norm = psi.norm();
      worst_step = std::max(worst_step, std::abs(norm - prev));
      prev = norm;
      const PureState state(psi);
      worst_schmidt = std::max(worst_schmidt, std::abs(von_neumann_entropy(partial_trace(state, split, Keep::First)) -
                                                       von_neumann_entropy(partial_trace(state, split, Keep::Second))));
    }
    worst_drift = std::max(worst_drift, std::abs(prev - 1.0));
  };
  for (const auto& h : {hc(0), hr(), hf(0.9, 0)}) {
    const auto decomp = eig_symmetric(h);
    track([&](const Eigen::VectorXcd& v) { return propagate(PureState(v), decomp, kEvolution.dt, kEvolution.hbar).amplitudes(); },
          PureState::basis(256, 0).amplitudes(), kSpinSplit);
  }
  const auto baker = build_baker_unitary(128);
  track([&](const Eigen::VectorXcd& v) { return Eigen::VectorXcd(baker.matrix() * v); },
        PureState::basis(128, 0).amplitudes(), TensorSplit{8, 16});
  out.detail << "max per-step norm change " << worst_step << ", max 512-step drift " << worst_drift
             << ", max Schmidt asymmetry " << worst_schmidt;
  out.require(worst_step <= 1e-10, "per-step norm within 1e-10");
  out.require(worst_drift < 1e-8, "cumulative drift < 1e-8");
  out.require(worst_schmidt <= 1e-8, "Schmidt symmetry within 1e-8");
}

// 3. Entropy production: higher steady mean and faster rise for H_c.
void entropy_claims(Outcome& out) {
  const auto& pool = spin_pool();
  std::vector<double> hc_mean, hc_rise;
  double max_entropy = 0.0;
  for (const auto& s : pool.hc) {
    hc_mean.push_back(s.steady_mean());
    hc_rise.push_back(static_cast<double>(s.samples_to_reach(0.9)));
    for (double v : s.values) max_entropy = std::max(max_entropy, v);
  }
  for (double v : pool.hr.values) max_entropy = std::max(max_entropy, v);
  const double hr_mean = pool.hr.steady_mean();
  const double hr_rise = static_cast<double>(pool.hr.samples_to_reach(0.9));
  out.detail << "steady mean Hc " << mean_of(hc_mean) << " vs Hr " << hr_mean << "; samples to 90% Hc "
             << mean_of(hc_rise) << " vs Hr " << hr_rise << "; max s_R " << max_entropy << " (ln 8 = " << std::log(8.0) << ")";
  out.require(mean_of(hc_mean) > hr_mean, "(a) steady mean Hc > Hr");
  out.require(mean_of(hc_rise) < hr_rise, "(b) Hc reaches 90% sooner");
  out.require(max_entropy <= std::log(8.0) + 1e-9, "(c) s_R <= ln 8");
}

// 4. Spectral broad-bandedness ordering.
void spectral_claims(Outcome& out) {
  const auto& pool = spin_pool();
  auto flat = [](const EntropySeries& s) { return spectral_flatness(power_spectrum(s)); };
  std::vector<double> f_hc, f_08, f_09;
  for (const auto& s : pool.hc) f_hc.push_back(flat(s));
  for (int i = 0; i < kPool; ++i) {
    f_08.push_back(flat(spin_run(hf(0.8, i))));
    f_09.push_back(flat(spin_run(hf(0.9, i))));
  }
  const double f_hr = flat(pool.hr);
  const auto baker = baker_entropy_series(build_baker_unitary(128), PureState::basis(128, 0), {8, 16}, 512, 128);
  const double f_baker = flat(baker);
  out.detail << "flatness Hc " << mean_of(f_hc) << " > H(0.8) " << mean_of(f_08) << " > H(0.9) " << mean_of(f_09)
             << " > Hr " << f_hr << "; baker " << f_baker;
  out.require(mean_of(f_hc) > mean_of(f_08), "Hc > H(0.8)");
  out.require(mean_of(f_08) > mean_of(f_09), "H(0.8) > H(0.9)");
  out.require(mean_of(f_09) > f_hr, "H(0.9) > Hr");
  out.require(f_baker > f_hr, "baker > Hr");
}

// 5. Level statistics.
void level_claims(Outcome& out) {
  std::vector<double> pooled;
  for (int i = 0; i < kPool; ++i) {
    const auto s = level_spacings(eig_symmetric(hc(i)));
    pooled.insert(pooled.end(), s.spacings.begin(), s.spacings.end());
  }
  const double hc_w = ks_distance(pooled, SpacingReference::Wigner);
  const double hc_p = ks_distance(pooled, SpacingReference::Poisson);
  const double hr_w = ks_distance(level_spacings(eig_symmetric(hr())), SpacingReference::Wigner);
  out.detail << pooled.size() << " Hc spacings: KS(Wigner) " << hc_w << ", KS(Poisson) " << hc_p
             << "; Hr KS(Wigner) " << hr_w;
  out.require(hc_w < 0.08, "Hc KS to Wigner < 0.08");
  out.require(hc_w < hc_p, "Hc closer to Wigner than Poisson");
  out.require(hr_w > hc_w, "Hr further from Wigner than Hc");
}

// 6. Residual parameters decrease with f.
void residual_claims(Outcome& out) {
  auto mean_r = [](double f) {
    double total = 0.0;
    for (int i = 0; i < kResidualPool; ++i) total += residual_parameters(eig_symmetric(hf(f, i)), 32).mean();
    return total / kResidualPool;
  };
  const double r09 = mean_r(0.9), r07 = mean_r(0.7), r0 = mean_r(0.0);
  out.detail << "mean r: f=0.9 " << r09 << ", f=0.7 " << r07 << ", f=0 " << r0;
  out.require(r09 > r07, "r(0.9) > r(0.7)");
  out.require(r07 > r0, "r(0.7) > r(0)");
}

// 7. Reference densities, Parseval, flatness scale invariance.
void diagnostic_self_tests(Outcome& out) {
  const double w0 = oracle::simpson([](double s) { return wigner_surmise(s); }, 0.0, 12.0, 20000);
  const double w1 = oracle::simpson([](double s) { return s * wigner_surmise(s); }, 0.0, 12.0, 20000);
  const double p0 = oracle::simpson([](double s) { return poisson_density(s); }, 0.0, 60.0, 60000);
  const double p1 = oracle::simpson([](double s) { return s * poisson_density(s); }, 0.0, 60.0, 60000);
  const double moment_err = std::max({std::abs(w0 - 1), std::abs(w1 - 1), std::abs(p0 - 1), std::abs(p1 - 1)});

  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::uniform_int_distribution<int> len(16, 600);
  double parseval_err = 0.0, scale_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    EntropySeries s;
    s.dt = 0.1;
    s.values.resize(static_cast<std::size_t>(len(rng)));
    for (double& x : s.values) x = u(rng);
    s.transient_cut = s.values.size() / 8;
    const auto ps = power_spectrum(s);
    const std::size_t m = ps.window;
    double mean = 0.0;
    for (std::size_t k = s.transient_cut; k < s.values.size(); ++k) mean += s.values[k] / static_cast<double>(m);
    double sumsq = 0.0;
    for (std::size_t k = s.transient_cut; k < s.values.size(); ++k) sumsq += (s.values[k] - mean) * (s.values[k] - mean);
    double two_sided = ps.power[0];
    for (std::size_t k = 1; k < ps.size(); ++k) two_sided += (m % 2 == 0 && k == m / 2) ? ps.power[k] : 2.0 * ps.power[k];
    const double expected = static_cast<double>(m) * sumsq;
    parseval_err = std::max(parseval_err, std::abs(two_sided - expected) / expected);

    PowerSpectrum scaled = ps;
    for (double& p : scaled.power) p *= 37.5;
    scale_err = std::max(scale_err, std::abs(spectral_flatness(scaled) - spectral_flatness(ps)));
  }
  out.detail << "max moment error " << moment_err << ", max Parseval rel error " << parseval_err
             << ", max flatness scale error " << scale_err;
  out.require(moment_err <= 1e-6, "densities normalized with unit mean within 1e-6");
  out.require(parseval_err <= 1e-6, "Parseval within 1e-6");
  out.require(scale_err <= 1e-12, "flatness scale invariance within 1e-12");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 8. Every shipped config reproduces byte-identical outputs.
void reproducibility(Outcome& out) {
  const fs::path root = fs::temp_directory_path() / "qchaos_acceptance_repro";
  fs::remove_all(root);
  int configs = 0, files = 0;
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(QCHAOS_CONFIG_DIR)) {
    if (entry.path().extension() == ".cfg") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  for (const auto& path : paths) {
    ++configs;
    auto cfg = runner::load_config(path);
    cfg.output_path = root / path.stem() / "a";
    const auto first = runner::run(cfg);
    cfg.output_path = root / path.stem() / "b";
    runner::run(cfg);
    auto names = first.files;
    names.push_back("manifest.txt");
    for (const auto& name : names) {
      ++files;
      const bool same = slurp(root / path.stem() / "a" / name) == slurp(root / path.stem() / "b" / name);
      out.require(same, path.filename().string() + ":" + name + " identical");
    }
  }
  out.detail << configs << " configs, " << files << " files compared";
  out.require(configs >= 9, "all shipped configs found");
  fs::remove_all(root);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence (D <= 16)", 10.0, oracle_equivalence},
      {2, "unitarity and Schmidt symmetry", 120.0, unitarity},
      {3, "entropy production: steady mean, rise time, bound", 900.0, entropy_claims},
      {4, "spectral flatness ordering", 1200.0, spectral_claims},
      {5, "level spacing statistics", 60.0, level_claims},
      {6, "residual parameter trend in f", 300.0, residual_claims},
      {7, "diagnostic self-tests", 10.0, diagnostic_self_tests},
      {8, "reproducibility of shipped configs", 1800.0, reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(secs < c.budget_seconds, "runtime under " + std::to_string(static_cast<int>(c.budget_seconds)) + " s");
    std::cout << (out.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.name << ": " << out.detail.str() << " ("
              << secs << " s)" << std::endl;
    failures += out.pass ? 0 : 1;
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
