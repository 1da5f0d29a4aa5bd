#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace primelab::fft {

using cvec = std::vector<std::complex<double>>;

// Forward transform with the e(-xj/N) sign convention:
//   out[j] = sum_x in[x] * exp(-2*pi*i*j*x/N),  unnormalized.
cvec forward(const cvec& in);

// Inverse: out[x] = (1/N) * sum_j in[j] * exp(+2*pi*i*j*x/N).
cvec inverse(const cvec& in);

bool is_pow2(uint64_t n);

} // namespace primelab::fft
