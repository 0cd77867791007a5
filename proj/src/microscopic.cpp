#include "qlg/microscopic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "qlg/errors.hpp"

namespace qlg {

namespace {

constexpr char kMagic[4] = {'Q', 'L', 'G', '1'};

template <class T>
void put_le(std::ostream& out, T value) {
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    out.put(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * b)) & 0xFFu));
  }
}

template <class T>
T get_le(std::istream& in) {
  std::uint64_t value = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw std::runtime_error("ensemble dump truncated");
    value |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
  }
  return static_cast<T>(value);
}

void put_bits(std::ostream& out, const std::vector<std::uint8_t>& bits) {
  const std::size_t n_bytes = (bits.size() + 7) / 8;
  for (std::size_t byte = 0; byte < n_bytes; ++byte) {
    unsigned char packed = 0;
    for (std::size_t b = 0; b < 8 && 8 * byte + b < bits.size(); ++b) {
      packed |= static_cast<unsigned char>((bits[8 * byte + b] & 1u) << b);
    }
    out.put(static_cast<char>(packed));
  }
}

void get_bits(std::istream& in, std::vector<std::uint8_t>& bits) {
  const std::size_t n_bytes = (bits.size() + 7) / 8;
  for (std::size_t byte = 0; byte < n_bytes; ++byte) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw std::runtime_error("ensemble dump truncated");
    for (std::size_t b = 0; b < 8 && 8 * byte + b < bits.size(); ++b) {
      bits[8 * byte + b] = static_cast<std::uint8_t>((static_cast<unsigned>(c) >> b) & 1u);
    }
  }
}

void rotate_plus(std::vector<std::uint8_t>& bits) { std::rotate(bits.rbegin(), bits.rbegin() + 1, bits.rend()); }
void rotate_minus(std::vector<std::uint8_t>& bits) { std::rotate(bits.begin(), bits.begin() + 1, bits.end()); }

}  // namespace

std::size_t BitRealization::particle_count() const {
  return std::accumulate(bits_plus.begin(), bits_plus.end(), std::size_t{0}) +
         std::accumulate(bits_minus.begin(), bits_minus.end(), std::size_t{0});
}

BitEnsemble::BitEnsemble(EnsembleSpec spec, std::size_t n_sites)
    : spec_(spec), n_sites_(n_sites) {
  if (spec_.n_realizations < 1) throw std::invalid_argument("ensemble.n_realizations must be >= 1");
  members_.reserve(spec_.n_realizations);
  for (std::size_t r = 0; r < spec_.n_realizations; ++r) {
    members_.emplace_back(n_sites, RealizationRng(spec_.master_seed, static_cast<std::uint32_t>(r)));
  }
}

BitEnsemble BitEnsemble::sample(const OccupancyField& field, const EnsembleSpec& spec) {
  check_probabilities(field, kProbabilityTolerance);
  BitEnsemble ensemble(spec, field.size());
  parallel_for(ensemble.size(), spec.threads, [&](std::size_t r) {
    auto& m = ensemble.members_[r];
    for (std::size_t i = 0; i < field.size(); ++i) {
      const auto site = static_cast<std::uint32_t>(i);
      m.bits_plus[i] = m.rng.bernoulli(field.plus[i], 0, site, Draw::init_plus);
      m.bits_minus[i] = m.rng.bernoulli(field.minus[i], 0, site, Draw::init_minus);
    }
  });
  return ensemble;
}

std::size_t BitEnsemble::particle_count() const {
  std::size_t total = 0;
  for (const auto& m : members_) total += m.particle_count();
  return total;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) body(i);
    });
  }
}

void classical_micro_collide(BitRealization& realization, double alpha, std::uint32_t step) {
  for (std::size_t i = 0; i < realization.n_sites(); ++i) {
    auto& plus = realization.bits_plus[i];
    auto& minus = realization.bits_minus[i];
    if ((plus ^ minus) == 0) continue;
    const auto site = static_cast<std::uint32_t>(i);
    bool go_plus = realization.rng.bernoulli(alpha, step, site, Draw::bias_bit);
    if (!go_plus) go_plus = realization.rng.bernoulli(0.5, step, site, Draw::fair_bit);
    plus = go_plus ? 1 : 0;
    minus = go_plus ? 0 : 1;
  }
}

void stream_bits(BitRealization& realization) {
  rotate_plus(realization.bits_plus);
  rotate_minus(realization.bits_minus);
}

void classical_micro_step(BitEnsemble& ensemble, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha outside [0,1]");
  const auto step = ensemble.step();
  parallel_for(ensemble.size(), ensemble.spec().threads, [&](std::size_t r) {
    auto& m = ensemble.members()[r];
    classical_micro_collide(m, alpha, step);
    stream_bits(m);
  });
  ensemble.set_step(step + 1);
}

OccupancyField quantum_micro_step(const OccupancyField& estimate, const UnitaryGate& gate,
                                  BitEnsemble& ensemble) {
  const auto n = ensemble.n_sites();
  const auto step = ensemble.step();
  if (ensemble.spec().coupling == Coupling::mean_field) {
    if (estimate.size() != n) throw std::invalid_argument("estimate size differs from ensemble");
    check_probabilities(estimate, kProbabilityTolerance);
    std::vector<double> post_plus(n), post_minus(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = omega_quantum_expect(estimate.plus[i], estimate.minus[i], gate);
      post_plus[i] = estimate.plus[i] + w;
      post_minus[i] = estimate.minus[i] - w;
    }
    parallel_for(ensemble.size(), ensemble.spec().threads, [&](std::size_t r) {
      auto& m = ensemble.members()[r];
      for (std::size_t i = 0; i < n; ++i) {
        const auto site = static_cast<std::uint32_t>(i);
        m.bits_plus[i] = m.rng.bernoulli(post_plus[i], step, site, Draw::measure_plus);
        m.bits_minus[i] = m.rng.bernoulli(post_minus[i], step, site, Draw::measure_minus);
      }
      stream_bits(m);
    });
  } else {
    // Omega for the four basis occupations.
    double table[2][2];
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) table[a][b] = omega_quantum_expect(a, b, gate);
    }
    parallel_for(ensemble.size(), ensemble.spec().threads, [&](std::size_t r) {
      auto& m = ensemble.members()[r];
      for (std::size_t i = 0; i < n; ++i) {
        const auto site = static_cast<std::uint32_t>(i);
        const int a = m.bits_plus[i];
        const int b = m.bits_minus[i];
        const double w = table[a][b];
        m.bits_plus[i] = m.rng.bernoulli(a + w, step, site, Draw::measure_plus);
        m.bits_minus[i] = m.rng.bernoulli(b - w, step, site, Draw::measure_minus);
      }
      stream_bits(m);
    });
  }
  ensemble.set_step(step + 1);
  return ensemble_average(ensemble);
}

OccupancyField ensemble_average(const BitEnsemble& ensemble) {
  const auto n = ensemble.n_sites();
  std::vector<std::uint64_t> count_plus(n, 0), count_minus(n, 0);
  for (const auto& m : ensemble.members()) {
    for (std::size_t i = 0; i < n; ++i) {
      count_plus[i] += m.bits_plus[i];
      count_minus[i] += m.bits_minus[i];
    }
  }
  const double inv = 1.0 / static_cast<double>(ensemble.size());
  OccupancyField out;
  out.plus.resize(n);
  out.minus.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.plus[i] = static_cast<double>(count_plus[i]) * inv;
    out.minus[i] = static_cast<double>(count_minus[i]) * inv;
  }
  return out;
}

NoiseStats measure_noise(const OccupancyField& estimate, const OccupancyField& reference) {
  if (estimate.size() != reference.size() || estimate.size() == 0) {
    throw std::invalid_argument("noise: field sizes differ");
  }
  NoiseStats s;
  const auto n = estimate.size();
  s.deviation_plus.resize(n);
  s.deviation_minus.resize(n);
  double sum_p = 0.0, sum_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s.deviation_plus[i] = estimate.plus[i] - reference.plus[i];
    s.deviation_minus[i] = estimate.minus[i] - reference.minus[i];
    sum_p += s.deviation_plus[i] * s.deviation_plus[i];
    sum_m += s.deviation_minus[i] * s.deviation_minus[i];
  }
  s.std_plus = std::sqrt(sum_p / n);
  s.std_minus = std::sqrt(sum_m / n);
  s.std_all = std::sqrt((sum_p + sum_m) / (2 * n));
  return s;
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::invalid_argument("log-log fit needs positive data");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

void write_ensemble(std::ostream& out, const BitEnsemble& ensemble) {
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ensemble.size()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ensemble.n_sites()));
  put_le<std::uint64_t>(out, ensemble.step());
  for (const auto& m : ensemble.members()) {
    put_bits(out, m.bits_plus);
    put_bits(out, m.bits_minus);
  }
}

BitEnsemble read_ensemble(std::istream& in, const EnsembleSpec& spec) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) {
    throw std::runtime_error("ensemble dump: bad magic");
  }
  const auto n_real = get_le<std::uint32_t>(in);
  const auto n_sites = get_le<std::uint32_t>(in);
  const auto step = get_le<std::uint64_t>(in);
  if (n_real != spec.n_realizations) {
    throw std::runtime_error(fmt::format("ensemble dump holds {} realizations, spec expects {}",
                                         n_real, spec.n_realizations));
  }
  BitEnsemble ensemble(spec, n_sites);
  ensemble.set_step(static_cast<std::uint32_t>(step));
  for (auto& m : ensemble.members()) {
    get_bits(in, m.bits_plus);
    get_bits(in, m.bits_minus);
  }
  return ensemble;
}

}  // namespace qlg
