#ifndef QLG_MICROSCOPIC_HPP_
#define QLG_MICROSCOPIC_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "qlg/collision.hpp"
#include "qlg/field.hpp"
#include "qlg/philox.hpp"

namespace qlg {

enum class EnsembleMode { classical_bits, quantum_sampled };

// How quantum_sampled realizations obtain the probabilities fed to the gate.
enum class Coupling {
  mean_field,   // every realization re-encodes the ensemble-averaged field
  independent,  // each realization encodes its own 0/1 occupations
};

struct EnsembleSpec {
  std::size_t n_realizations = 64;
  std::uint64_t master_seed = 1;
  EnsembleMode mode = EnsembleMode::classical_bits;
  Coupling coupling = Coupling::mean_field;
  unsigned threads = 1;  // 0 picks std::thread::hardware_concurrency()
};

struct BitRealization {
  std::vector<std::uint8_t> bits_plus;
  std::vector<std::uint8_t> bits_minus;
  RealizationRng rng;

  BitRealization(std::size_t n_sites, RealizationRng stream)
      : bits_plus(n_sites, 0), bits_minus(n_sites, 0), rng(stream) {}

  std::size_t n_sites() const noexcept { return bits_plus.size(); }
  std::size_t particle_count() const;
};

class BitEnsemble {
 public:
  BitEnsemble(EnsembleSpec spec, std::size_t n_sites);

  // Independent Bernoulli(p_pm) occupations in every realization (step 0 draw slots).
  static BitEnsemble sample(const OccupancyField& field, const EnsembleSpec& spec);

  const EnsembleSpec& spec() const noexcept { return spec_; }
  std::size_t n_sites() const noexcept { return n_sites_; }
  std::size_t size() const noexcept { return members_.size(); }
  std::uint32_t step() const noexcept { return step_; }
  void set_step(std::uint32_t step) noexcept { step_ = step; }

  std::vector<BitRealization>& members() noexcept { return members_; }
  const std::vector<BitRealization>& members() const noexcept { return members_; }

  std::size_t particle_count() const;

 private:
  EnsembleSpec spec_;
  std::size_t n_sites_;
  std::uint32_t step_ = 0;
  std::vector<BitRealization> members_;
};

// Runs body(i) for i in [0, n) on up to `threads` workers. Bodies must touch disjoint state.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

// Lone particles leave in the plus direction with probability (1 + alpha)/2: a bias bit with
// P = alpha forces plus, otherwise a fair bit decides. Empty and doubly occupied sites are
// untouched. Expected change of n_plus equals omega_classical(p_plus, p_minus, alpha).
void classical_micro_collide(BitRealization& realization, double alpha, std::uint32_t step);

void stream_bits(BitRealization& realization);

// One collide-and-stream step of every realization; the two-bit gas is alpha = 1.
void classical_micro_step(BitEnsemble& ensemble, double alpha);

// Projective-measurement step of the 2-qubit gas. Post-collision probabilities come from the
// gate (mean-field: from `estimate`; independent: from each realization's own bits), bits are
// resampled as Bernoulli draws, streamed, and the new ensemble average is returned.
OccupancyField quantum_micro_step(const OccupancyField& estimate, const UnitaryGate& gate,
                                  BitEnsemble& ensemble);

// p_hat(x) = (1/N) sum of bits. Counts are summed as integers, so the result does not depend on
// reduction order or thread count.
OccupancyField ensemble_average(const BitEnsemble& ensemble);

struct NoiseStats {
  std::vector<double> deviation_plus;   // p_hat_+ - p_ref_+ per site
  std::vector<double> deviation_minus;  // p_hat_- - p_ref_- per site
  double std_plus = 0.0;
  double std_minus = 0.0;
  double std_all = 0.0;  // root-mean-square over both components and all sites
};

NoiseStats measure_noise(const OccupancyField& estimate, const OccupancyField& reference);

// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

// Binary dump: "QLG1", u32 N, u32 n_sites, u64 step (little endian), then for each realization
// the plus row and the minus row packed LSB-first into ceil(n_sites / 8) bytes.
void write_ensemble(std::ostream& out, const BitEnsemble& ensemble);
BitEnsemble read_ensemble(std::istream& in, const EnsembleSpec& spec);

}  // namespace qlg

#endif  // QLG_MICROSCOPIC_HPP_
