#ifndef QLG_PHILOX_HPP_
#define QLG_PHILOX_HPP_

#include <array>
#include <cstdint>

namespace qlg {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless: the output is a pure
// function of (counter, key), so any draw can be regenerated independently of evaluation order.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static constexpr Counter generate(Counter ctr, Key key) {
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      ctr = round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;

  static constexpr Counter round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

// Draw slots within one (step, site) cell.
enum class Draw : std::uint32_t {
  init_plus = 0,
  init_minus = 1,
  bias_bit = 2,
  fair_bit = 3,
  measure_plus = 4,
  measure_minus = 5,
};

// Random stream of one ensemble member. Counter layout:
//   ctr = {site, draw_index, step, realization_index}, key = {seed_lo, seed_hi}.
// A draw is the top 53 bits of (word1:word0) scaled to [0,1).
class RealizationRng {
 public:
  constexpr RealizationRng(std::uint64_t master_seed, std::uint32_t realization)
      : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
        realization_(realization) {}

  constexpr double uniform(std::uint32_t step, std::uint32_t site, Draw draw) const {
    const auto w = Philox4x32::generate({site, static_cast<std::uint32_t>(draw), step, realization_},
                                        key_);
    const std::uint64_t bits = (static_cast<std::uint64_t>(w[1]) << 32) | w[0];
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
  }

  constexpr bool bernoulli(double p, std::uint32_t step, std::uint32_t site, Draw draw) const {
    return uniform(step, site, draw) < p;
  }

  std::uint32_t realization() const noexcept { return realization_; }

 private:
  Philox4x32::Key key_;
  std::uint32_t realization_;
};

}  // namespace qlg

#endif  // QLG_PHILOX_HPP_
