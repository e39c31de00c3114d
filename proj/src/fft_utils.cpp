#include "fracschrod/fft_utils.hpp"

#include <fftw3.h>

#include <cstring>

namespace fracschrod::detail {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

void FftwFree::operator()(void* p) const { fftw_free(p); }

ComplexBuffer alloc_complex(std::size_t n) {
    auto* p = static_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n));
    std::memset(p, 0, sizeof(fftw_complex) * n);
    return ComplexBuffer(p);
}

namespace {
fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }
}  // namespace

BatchPlan::BatchPlan(int length, int batch) : length_(length), batch_(batch) {
    ComplexBuffer proto = alloc_complex(static_cast<std::size_t>(length) * batch);
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    const int n[1] = {length};
    // FFTW_ESTIMATE keeps planning deterministic, which the output
    // reproducibility contract depends on.
    fwd_ = fftw_plan_many_dft(1, n, batch, as_fftw(proto.get()), nullptr, 1, length,
                              as_fftw(proto.get()), nullptr, 1, length, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_many_dft(1, n, batch, as_fftw(proto.get()), nullptr, 1, length,
                              as_fftw(proto.get()), nullptr, 1, length, FFTW_BACKWARD, FFTW_ESTIMATE);
}

BatchPlan::~BatchPlan() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (fwd_) fftw_destroy_plan(fwd_);
    if (bwd_) fftw_destroy_plan(bwd_);
}

void BatchPlan::forward(std::complex<double>* buf) const {
    fftw_execute_dft(fwd_, as_fftw(buf), as_fftw(buf));
}

void BatchPlan::backward(std::complex<double>* buf) const {
    fftw_execute_dft(bwd_, as_fftw(buf), as_fftw(buf));
}

Plan2d::Plan2d(int rows, int cols) {
    ComplexBuffer proto = alloc_complex(static_cast<std::size_t>(rows) * cols);
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fwd_ = fftw_plan_dft_2d(rows, cols, as_fftw(proto.get()), as_fftw(proto.get()),
                            FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_2d(rows, cols, as_fftw(proto.get()), as_fftw(proto.get()),
                            FFTW_BACKWARD, FFTW_ESTIMATE);
}

Plan2d::~Plan2d() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (fwd_) fftw_destroy_plan(fwd_);
    if (bwd_) fftw_destroy_plan(bwd_);
}

void Plan2d::forward(std::complex<double>* buf) const {
    fftw_execute_dft(fwd_, as_fftw(buf), as_fftw(buf));
}

void Plan2d::backward(std::complex<double>* buf) const {
    fftw_execute_dft(bwd_, as_fftw(buf), as_fftw(buf));
}

}  // namespace fracschrod::detail
