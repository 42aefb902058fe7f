#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace beamsculpt::detail {

// Distinct salts keep the channel, reliability and beamformer draws
// decorrelated when a caller reuses one seed for all three.
enum Stream : std::uint32_t {
  kChannelStream = 0x6368616e,      // "chan"
  kReliabilityStream = 0x72656c69,  // "reli"
  kPrimalStream = 0x696e6974,       // "init"
  kCheckStream = 0x6f72636c,        // "orcl"
};

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

// [0, 1) from the top 53 bits. Avoids std::uniform_real_distribution, whose
// output is implementation-defined; this stays bit-stable everywhere.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// CN(0,1) via Box-Muller in polar form: modulus^2 ~ Exp(1), phase ~ U[0,2pi).
// Real and imaginary parts each come out N(0, 1/2). Two engine draws per
// entry, no carried state.
inline std::complex<double> complex_gaussian(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1], keeps the log finite
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-std::log(u1));
  return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

}  // namespace beamsculpt::detail
