#include "primelab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace primelab::fft {

namespace {

// Plan creation is not thread-safe in FFTW; execution with the new-array
// interface is. Plans are cached per (size, sign) with FFTW_ESTIMATE so the
// chosen algorithm (and therefore the roundoff pattern) is reproducible.
class PlanCache {
  public:
    fftw_plan get(uint64_t n, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> a(n), b(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n),
                                       reinterpret_cast<fftw_complex*>(a.data()),
                                       reinterpret_cast<fftw_complex*>(b.data()),
                                       sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_[key] = p;
        return p;
    }

  private:
    std::mutex mu_;
    std::map<std::pair<uint64_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

cvec run(const cvec& in, int sign) {
    if (in.empty()) throw std::invalid_argument("fft: empty input");
    cvec out(in.size());
    fftw_plan p = cache().get(in.size(), sign);
    fftw_execute_dft(p,
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

} // namespace

cvec forward(const cvec& in) { return run(in, FFTW_FORWARD); }

cvec inverse(const cvec& in) {
    cvec out = run(in, FFTW_BACKWARD);
    double inv = 1.0 / static_cast<double>(in.size());
    for (auto& z : out) z *= inv;
    return out;
}

bool is_pow2(uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

} // namespace primelab::fft
