#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace actdis {

/// Mixed-radix decimation-in-time FFT for any length, splitting on the
/// smallest prime factor at each level (60 = 2*2*3*5). Unnormalized:
/// X[k] = sum_n x[n] exp(-2*pi*i*k*n/N).
class MixedRadixDft {
 public:
  explicit MixedRadixDft(std::size_t n);

  std::size_t size() const { return n_; }
  const std::vector<std::size_t>& factors() const { return factors_; }

  void transform(std::span<const double> in, std::span<std::complex<double>> out) const;
  std::vector<std::complex<double>> transform(std::span<const double> in) const;

 private:
  void recurse(const std::complex<double>* in, std::size_t stride, std::complex<double>* out, std::size_t n,
               std::size_t level, std::complex<double>* scratch) const;

  std::size_t n_;
  std::vector<std::size_t> factors_;
  std::vector<std::complex<double>> twiddles_;  // exp(-2*pi*i*k/N)
};

}  // namespace actdis
