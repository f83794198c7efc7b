#include "actdis/dft.hpp"

#include <cmath>
#include <numbers>

#include "actdis/error.hpp"

namespace actdis {

MixedRadixDft::MixedRadixDft(std::size_t n) : n_(n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "DFT length must be positive");
  std::size_t rest = n;
  for (std::size_t p = 2; p * p <= rest; ++p)
    while (rest % p == 0) {
      factors_.push_back(p);
      rest /= p;
    }
  if (rest > 1) factors_.push_back(rest);

  twiddles_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddles_[k] = {std::cos(angle), std::sin(angle)};
  }
}

void MixedRadixDft::transform(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_) throw Error(ErrorCode::WrongWindowLength, "DFT input/output length mismatch");
  std::vector<std::complex<double>> cin(in.begin(), in.end());
  std::vector<std::complex<double>> scratch(n_);
  if (factors_.empty()) {  // n == 1
    out[0] = cin[0];
    return;
  }
  recurse(cin.data(), 1, out.data(), n_, 0, scratch.data());
}

std::vector<std::complex<double>> MixedRadixDft::transform(std::span<const double> in) const {
  std::vector<std::complex<double>> out(n_);
  transform(in, out);
  return out;
}

// Computes the length-n DFT of in[0], in[stride], ... into out[0..n).
void MixedRadixDft::recurse(const std::complex<double>* in, std::size_t stride, std::complex<double>* out,
                            std::size_t n, std::size_t level, std::complex<double>* scratch) const {
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t p = factors_[level];
  const std::size_t m = n / p;
  // Sub-transform r covers x[r], x[r + p], ... and lands in out[r*m .. r*m+m).
  for (std::size_t r = 0; r < p; ++r) recurse(in + r * stride, stride * p, out + r * m, m, level + 1, scratch);

  const std::size_t tw_step = n_ / n;
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t s = 0; s < p; ++s) {
      const std::size_t kk = k + s * m;
      std::complex<double> acc = out[k];
      for (std::size_t r = 1; r < p; ++r) acc += out[r * m + k] * twiddles_[((r * kk) % n) * tw_step];
      scratch[kk] = acc;
    }
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = scratch[i];
}

}  // namespace actdis
