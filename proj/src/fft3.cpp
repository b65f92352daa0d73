#include "vmlab/fft3.hpp"

#include <cmath>
#include <stdexcept>

namespace vml {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;
}

Fft::Fft(std::size_t n) : n_(n) {
  std::size_t m = n;
  while (m % 2 == 0) m /= 2;
  while (m % 3 == 0) m /= 3;
  if (m != 1 || n == 0) throw std::invalid_argument("Fft: length must be 2^a*3^b");
  tw_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    double ang = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    tw_[k] = cplx(std::cos(ang), std::sin(ang));
  }
  scratch_.resize(n);
}

std::size_t Fft::good_size(std::size_t n) {
  std::size_t best = 0;
  for (std::size_t p2 = 1;; p2 *= 2) {
    std::size_t v = p2;
    while (v < n) v *= 3;
    // v = p2 * 3^b >= n with minimal 3^b
    if (best == 0 || v < best) best = v;
    if (p2 >= n) break;
  }
  return best;
}

void Fft::transform(cplx* data, bool inv) const {
  rec(data, scratch_.data(), n_, 1, inv);
}

// Decimation in time, radix 2 or 3, out-of-place shuffle through scratch.
void Fft::rec(cplx* data, cplx* scratch, std::size_t n, std::size_t stride,
              bool inv) const {
  if (n == 1) return;
  std::size_t r = (n % 2 == 0) ? 2 : 3;
  std::size_t m = n / r;

  for (std::size_t q = 0; q < r; ++q)
    for (std::size_t k = 0; k < m; ++k) scratch[q * m + k] = data[(k * r + q) * stride];
  for (std::size_t q = 0; q < r; ++q) rec(scratch + q * m, data, m, 1, inv);

  std::size_t tstep = stride * 1;  // twiddle index step in units of n_/n
  (void)tstep;
  std::size_t base = n_ / n;
  if (r == 2) {
    for (std::size_t k = 0; k < m; ++k) {
      cplx w = tw_[(k * base) % n_];
      if (inv) w = std::conj(w);
      cplx a = scratch[k];
      cplx b = scratch[m + k] * w;
      data[k * stride] = a + b;
      data[(k + m) * stride] = a - b;
    }
  } else {
    // radix-3 butterfly with w3 = exp(-2*pi*i/3)
    cplx w3(-0.5, inv ? std::sqrt(3.0) / 2.0 : -std::sqrt(3.0) / 2.0);
    cplx w3c = std::conj(w3);
    for (std::size_t k = 0; k < m; ++k) {
      cplx w1 = tw_[(k * base) % n_];
      cplx w2 = tw_[(2 * k * base) % n_];
      if (inv) {
        w1 = std::conj(w1);
        w2 = std::conj(w2);
      }
      cplx a = scratch[k];
      cplx b = scratch[m + k] * w1;
      cplx c = scratch[2 * m + k] * w2;
      data[k * stride] = a + b + c;
      data[(k + m) * stride] = a + b * w3 + c * w3c;
      data[(k + 2 * m) * stride] = a + b * w3c + c * w3;
    }
  }
}

Fft3::Fft3(std::size_t np) : np_(np), fft_(np) { line_.resize(np); }

void Fft3::transform(std::vector<cplx>& a, bool inv) const {
  const std::size_t n = np_;
  if (a.size() != n * n * n) throw std::invalid_argument("Fft3: size mismatch");
  cplx* d = a.data();
  // axis 0 (fastest): contiguous lines
  for (std::size_t z = 0; z < n; ++z)
    for (std::size_t y = 0; y < n; ++y) {
      cplx* p = d + (z * n + y) * n;
      if (inv)
        fft_.inverse(p);
      else
        fft_.forward(p);
    }
  // axis 1
  for (std::size_t z = 0; z < n; ++z)
    for (std::size_t x = 0; x < n; ++x) {
      cplx* base = d + z * n * n + x;
      for (std::size_t y = 0; y < n; ++y) line_[y] = base[y * n];
      if (inv)
        fft_.inverse(line_.data());
      else
        fft_.forward(line_.data());
      for (std::size_t y = 0; y < n; ++y) base[y * n] = line_[y];
    }
  // axis 2
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x) {
      cplx* base = d + y * n + x;
      for (std::size_t z = 0; z < n; ++z) line_[z] = base[z * n * n];
      if (inv)
        fft_.inverse(line_.data());
      else
        fft_.forward(line_.data());
      for (std::size_t z = 0; z < n; ++z) base[z * n * n] = line_[z];
    }
}

void Fft3::inverse(std::vector<cplx>& a) const {
  transform(a, true);
  double s = 1.0 / static_cast<double>(volume());
  for (auto& v : a) v *= s;
}

}  // namespace vml
