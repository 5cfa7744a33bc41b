#pragma once

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <vector>

namespace couette {

/// Thin FFTW wrapper (complex-to-complex, one length, reusable buffers).
/// Plan creation is serialized; execution on the owned buffers is meant
/// for single-threaded use per instance.
class Fft1D {
  public:
    explicit Fft1D(int n) : n_(n) {
        buf_ = fftw_alloc_complex(n);
        static std::mutex planner;
        std::lock_guard<std::mutex> lock(planner);
        fwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Fft1D() {
        static std::mutex planner;
        std::lock_guard<std::mutex> lock(planner);
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    Fft1D(const Fft1D&) = delete;
    Fft1D& operator=(const Fft1D&) = delete;

    int size() const { return n_; }
    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(buf_); }

    /// spectral -> physical (unnormalized inverse)
    void backward() { fftw_execute(bwd_); }
    /// physical -> spectral; caller divides by n
    void forward() { fftw_execute(fwd_); }

  private:
    int n_;
    fftw_complex* buf_;
    fftw_plan fwd_, bwd_;
};

}  // namespace couette
