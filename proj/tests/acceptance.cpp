// Acceptance checks: one PASS/FAIL line per criterion, non-zero exit if any fails.
#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qlg/collision.hpp"
#include "qlg/errors.hpp"
#include "qlg/experiment.hpp"
#include "qlg/initial.hpp"
#include "qlg/microscopic.hpp"
#include "qlg/sweep.hpp"
#include "qlg/theory.hpp"

using namespace qlg;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  if (!ok) ++failures;
  fmt::print("{} [{:2d}] {}: {}\n", ok ? "PASS" : "FAIL", id, name, detail);
  std::fflush(stdout);
}

template <class F>
void criterion(int id, const std::string& name, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, name, false, std::string("exception: ") + e.what());
  }
}

const std::vector<CollisionModel>& lattice_models() {
  static const std::vector<CollisionModel> models = {ClassicalBL{0.5}, ClassicalBL{0.707}, TwoBit{},
                                                     Quantum{std::numbers::pi / 4, 0.0, 0.0},
                                                     Quantum{1.5, 0.0, 0.0}, Quantum{1.1, 0.4, -0.3}};
  return models;
}

std::vector<double> rho_points() {
  std::vector<double> r;
  for (int i = 0; i < 100; ++i) r.push_back(0.05 + 1.9 * (i + 0.5) / 100.0);
  return r;
}

double mode_amplitude(const DensityProfile& p) {
  const auto n = p.size();
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = 2 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    s += p.rho[i] * std::sin(phase);
    c += p.rho[i] * std::cos(phase);
  }
  return 2.0 * std::hypot(s, c) / static_cast<double>(n);
}

// Central difference of Omega in one argument, one-sided where the step would leave [0,1].
double domega(const CollisionModel& m, double pp, double pm, bool wrt_plus) {
  const double h = 1e-6;
  auto f = [&](double d) { return wrt_plus ? omega(m, pp + d, pm) : omega(m, pp, pm + d); };
  const double p = wrt_plus ? pp : pm;
  if (p - h < 0.0) return (f(h) - f(0.0)) / h;
  if (p + h > 1.0) return (f(0.0) - f(-h)) / h;
  return (f(h) - f(-h)) / (2 * h);
}

double max_abs_diff(const Matrix2& a, const Matrix2& b) {
  double m = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  }
  return m;
}

}  // namespace

int main() {
  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);

  criterion(1, "gate unitarity", [&] {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      worst = std::max(worst, build_unitary(angle(rng), angle(rng), angle(rng)).unitarity_defect());
    }
    report(1, "gate unitarity", worst < 1e-12, fmt::format("max |U'U - I| = {:.2e} over 1000 gates (< 1e-12)", worst));
  });

  criterion(2, "closed-form quantum collision term", [&] {
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const double th = angle(rng), z = angle(rng), x = angle(rng), a = unit(rng), b = unit(rng);
      worst = std::max(worst, std::abs(omega_quantum_closed(a, b, th, z, x) -
                                       omega_quantum_expect(a, b, build_unitary(th, z, x))));
    }
    report(2, "closed-form quantum collision term", worst < 1e-12,
           fmt::format("max |closed - expectation| = {:.2e} over 1e4 inputs (< 1e-12)", worst));
  });

  criterion(3, "conservation", [&] {
    const GridSpec g(256, 1.0, 1.0);
    const auto rho0 = sine_profile(g, 1.0, 0.4);
    double site = 0.0, drift = 0.0;
    for (const auto& m : lattice_models()) {
      auto f = init_from_density(rho0, m, Split::symmetric);
      const auto c = collide(f, m);
      for (std::size_t i = 0; i < f.size(); ++i) {
        site = std::max(site, std::abs((c.plus[i] + c.minus[i]) - (f.plus[i] + f.minus[i])));
      }
      const double m0 = f.mass();
      for (int s = 0; s < 10000; ++s) f = step(f, m);
      drift = std::max(drift, std::abs(f.mass() - m0));
    }
    EnsembleSpec spec;
    spec.n_realizations = 64;
    auto e = BitEnsemble::sample(init_from_density(rho0, ClassicalBL{0.5}, Split::equilibrium), spec);
    const auto n0 = e.particle_count();
    for (int s = 0; s < 1000; ++s) classical_micro_step(e, 0.5);
    const auto n1 = e.particle_count();
    report(3, "conservation", site <= 1e-15 && drift < 1e-9 && n0 == n1,
           fmt::format("per-site {:.1e} (<= 1e-15), global drift {:.1e} over 1e4 steps (< 1e-9), "
                       "bits {} -> {}",
                       site, drift, n0, n1));
  });

  criterion(4, "equilibria are roots of the collision term", [&] {
    double worst = 0.0;
    for (double r : rho_points()) {
      for (double a : {0.1, 0.5, 0.707, 1.0}) {
        const auto e = classical_equilibrium(r, a);
        worst = std::max(worst, std::abs(omega_classical(e.d_plus, e.d_minus, a)));
      }
      for (const Quantum q : {Quantum{std::numbers::pi / 4, 0, 0}, Quantum{1.5, 0, 0}, Quantum{0.6, 0.3, -0.2},
                              Quantum{2.2, 0.0, 0.0}}) {
        const auto e = quantum_equilibrium(r, q.theta, q.zeta, q.xi).value;
        worst = std::max(worst, std::abs(omega_quantum_closed(e.d_plus, e.d_minus, q.theta, q.zeta, q.xi)));
      }
    }
    report(4, "equilibria are roots of the collision term", worst < 1e-10,
           fmt::format("max |Omega(d+, d-)| = {:.2e} on 100 densities (< 1e-10)", worst));
  });

  criterion(5, "Jacobian and generalized inverse", [&] {
    double jac = 0.0, inv = 0.0;
    for (const auto& m : lattice_models()) {
      for (double r : {0.2, 0.55, 0.9, 1.3, 1.75}) {
        const auto e = equilibrium(m, r);
        const auto j = jacobian(m, r);
        const double fp = domega(m, e.d_plus, e.d_minus, true);
        const double fm = domega(m, e.d_plus, e.d_minus, false);
        jac = std::max(jac, std::abs(j.j_plus - fp) / std::max(std::abs(fp), 1e-3));
        jac = std::max(jac, std::abs(j.j_minus - fm) / std::max(std::abs(fm), 1e-3));
        const auto jm = jacobian_matrix(j);
        const auto s = spectral(jm);
        const auto& gi = s.generalized_inverse;
        inv = std::max(inv, max_abs_diff(multiply(multiply(jm, gi), jm), jm));
        inv = std::max(inv, max_abs_diff(multiply(multiply(gi, jm), gi), gi));
        inv = std::max(inv, max_abs_diff(multiply(jm, gi), multiply(gi, jm)));
      }
    }
    report(5, "Jacobian and generalized inverse", jac < 1e-6 && inv < 1e-12,
           fmt::format("max relative FD error {:.2e} (< 1e-6), max identity defect {:.2e} (< 1e-12)", jac, inv));
  });

  criterion(6, "bit rule reproduces the classical collision term", [&] {
    const std::size_t samples = 1000000;
    int inside = 0;
    double worst_sigma = 0.0;
    for (int k = 0; k < 10; ++k) {
      const double pp = unit(rng), pm = unit(rng), a = unit(rng);
      BitRealization r(samples, RealizationRng(1000 + k, 0));
      for (std::size_t i = 0; i < samples; ++i) {
        const auto site = static_cast<std::uint32_t>(i);
        r.bits_plus[i] = r.rng.bernoulli(pp, 0, site, Draw::init_plus);
        r.bits_minus[i] = r.rng.bernoulli(pm, 0, site, Draw::init_minus);
      }
      long long before = 0, after = 0;
      for (auto b : r.bits_plus) before += b;
      classical_micro_collide(r, a, 1);
      for (auto b : r.bits_plus) after += b;
      const double mean = static_cast<double>(after - before) / static_cast<double>(samples);
      const double om = omega_classical(pp, pm, a);
      const double second = 0.5 * (1 + a) * (1 - pp) * pm + 0.5 * (1 - a) * pp * (1 - pm);
      const double sigma = std::sqrt((second - om * om) / static_cast<double>(samples));
      const double z = std::abs(mean - om) / sigma;
      worst_sigma = std::max(worst_sigma, z);
      if (z < 3.0) ++inside;
    }
    report(6, "bit rule reproduces the classical collision term", inside == 10,
           fmt::format("{}/10 points within 3 sigma (1e6 samples each), worst {:.2f} sigma", inside, worst_sigma));
  });

  criterion(7, "shot-noise scaling", [&] {
    const auto t = run_sweep(SweepKind::ensemble_noise, ExperimentSpec{});
    const double slope = *t.find_summary("slope");
    report(7, "shot-noise scaling", slope >= -0.55 && slope <= -0.45,
           fmt::format("std ~ N^{:.4f} for N in 16..1024 (in [-0.55, -0.45])", slope));
  });

  criterion(8, "zero-alpha diffusion", [&] {
    ExperimentSpec s;
    s.model = ClassicalBL{0.0};
    s.initial.amplitude = 0.1;
    s.steps = 2000;
    s.snapshot_every = 2000;
    const auto run = simulate(s);
    const double k = 2 * std::numbers::pi / 256;
    const double expected = 0.1 * std::exp(-0.5 * k * k * 2000);
    const double ratio = mode_amplitude(run.densities().back()) / expected;
    report(8, "zero-alpha diffusion", std::abs(ratio - 1.0) < 0.01,
           fmt::format("amplitude / exp(-nu k^2 t) = {:.6f} with nu = 1/2 after 2000 steps (within 1%)", ratio));
  });

  criterion(9, "Burgers consistency before breaking", [&] {
    struct Case {
      std::string name;
      CollisionModel model;
    };
    const std::vector<Case> cases = {{"quantum theta=pi/4", Quantum{std::numbers::pi / 4, 0, 0}},
                                     {"classical alpha=0.707", ClassicalBL{0.707}},
                                     {"quantum theta=1.5", Quantum{1.5, 0, 0}},
                                     {"classical alpha=0.5", ClassicalBL{0.5}}};
    bool ok = true;
    std::string detail;
    double nu_q = 0.0, nu_c = 0.0;
    for (const auto& c : cases) {
      ExperimentSpec s;
      s.model = c.model;
      const int steps = pre_shock_steps(s);
      const auto w = fit_window(s, steps);
      ok = ok && w.fit.rel_l2 < 0.05;
      detail += fmt::format("{}: {} steps c_s={:.4f} nu={:.4f} L2={:.2e}; ", c.name, w.run.steps.back(),
                            w.fit.c_s, w.fit.nu, w.fit.rel_l2);
      if (c.name == "quantum theta=1.5") nu_q = w.fit.nu;
      if (c.name == "classical alpha=0.5") nu_c = w.fit.nu;
    }
    ok = ok && nu_q < nu_c;
    detail += fmt::format("nu(theta=1.5) {} nu(alpha=0.5)", nu_q < nu_c ? "<" : ">=");
    report(9, "Burgers consistency before breaking", ok, detail);
  });

  criterion(10, "two-bit gas is not Burgers", [&] {
    ExperimentSpec s;
    s.model = TwoBit{};
    s.initial.mean = 0.4;
    s.initial.amplitude = 0.35;
    s.steps = 128;
    s.snapshot_every = 8;
    s.reference.kind = ReferenceKind::eft;
    const auto run = simulate(s);
    const auto fit = fit_run(run);
    const auto eft = compare_to_reference(run);
    const bool eft_full = eft.times.size() == run.times.size() && eft.diagnostic.empty();
    const bool ok = fit.coarse_min_rel_l2 > 0.10 && fit.rel_l2 > 0.10 && eft_full && eft.error.l2_max < 0.10;
    report(10, "two-bit gas is not Burgers", ok,
           fmt::format("best Burgers L2 {:.3f} on grid / {:.3f} refined (> 0.10); two-bit EFT L2 max {:.3f} "
                       "over {} samples (< 0.10)",
                       fit.coarse_min_rel_l2, fit.rel_l2, eft.error.l2_max, eft.times.size()));
  });

  criterion(11, "quantum theta=1.5 long run stays physical", [&] {
    const GridSpec g(256, 1.0, 1.0);
    const Quantum m{1.5, 0, 0};
    auto f = init_from_density(sine_profile(g, 1.0, 0.4), m, Split::equilibrium);
    double lo = 1.0, hi = 0.0;
    for (int s = 0; s < 10000; ++s) {
      f = step(f, m);
      for (std::size_t i = 0; i < f.size(); ++i) {
        lo = std::min({lo, f.plus[i], f.minus[i]});
        hi = std::max({hi, f.plus[i], f.minus[i]});
      }
    }
    report(11, "quantum theta=1.5 long run stays physical", lo >= 0.0 && hi <= 1.0,
           fmt::format("1e4 steps without abort, p in [{:.6f}, {:.6f}]", lo, hi));
  });

  criterion(12, "scale and complexity identities", [&] {
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double L = 0.5 + 10 * unit(rng), u = 0.01 + unit(rng), nu = 1e-4 + 1e-2 * unit(rng);
      const auto t = turbulence_scales(L, u, nu, 1.0);
      worst = std::max(worst, std::abs(t.Re - std::pow(t.L / t.lambda, 4.0 / 3.0)) / t.Re);
      worst = std::max(worst, std::abs(t.u_lambda - t.nu / t.lambda) / t.u_lambda);
      worst = std::max(worst, std::abs(t.n_x_required - std::pow(t.Re, 0.75)) / t.n_x_required);
      const double n = 1 + std::floor(1000 * unit(rng)), nx = 1 + std::floor(4096 * unit(rng));
      const double local = 2 + std::floor(30 * unit(rng));
      const auto c = complexity(n, nx, local);
      worst = std::max(worst, std::abs(c.classical - n * nx * local) / c.classical);
      worst = std::max(worst, std::abs(c.quantum_lower - n * nx * std::log2(local)) / c.quantum_lower);
    }
    const auto ex = complexity(100, 256, kClassicalBitsPerNode);
    const bool bound = ex.quantum_lower <= ex.classical;
    report(12, "scale and complexity identities", worst < 1e-12 && bound,
           fmt::format("max relative defect {:.2e} (< 1e-12); N=100, N_x=256: C_cl = {:.0f}, C_qu >= {:.2f}", worst,
                       ex.classical, ex.quantum_lower));
  });

  fmt::print("{} of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
