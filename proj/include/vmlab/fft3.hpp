#ifndef VMLAB_FFT3_HPP
#define VMLAB_FFT3_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace vml {

using cplx = std::complex<double>;

/// Complex FFT for lengths of the form 2^a * 3^b (recursive Cooley-Tukey).
/// Plans cache twiddle tables per length; transforms are deterministic.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }

  /// In-place forward transform (sign -1 in the exponent).
  void forward(cplx* data) const { transform(data, false); }
  /// In-place inverse transform, unnormalized (caller divides by n).
  void inverse(cplx* data) const { transform(data, true); }

  /// Smallest admissible length >= n.
  static std::size_t good_size(std::size_t n);

 private:
  void transform(cplx* data, bool inv) const;
  void rec(cplx* data, cplx* scratch, std::size_t n, std::size_t stride,
           bool inv) const;

  std::size_t n_;
  std::vector<cplx> tw_;      // exp(-2*pi*i*k/n), k = 0..n-1
  mutable std::vector<cplx> scratch_;
};

/// 3D complex-to-complex FFT on a cube of edge np (np = 2^a*3^b).
class Fft3 {
 public:
  explicit Fft3(std::size_t np);

  std::size_t edge() const { return np_; }
  std::size_t volume() const { return np_ * np_ * np_; }

  void forward(std::vector<cplx>& a) const { transform(a, false); }
  /// Inverse including the 1/np^3 normalization.
  void inverse(std::vector<cplx>& a) const;

 private:
  void transform(std::vector<cplx>& a, bool inv) const;

  std::size_t np_;
  Fft fft_;
  mutable std::vector<cplx> line_;
};

}  // namespace vml

#endif
