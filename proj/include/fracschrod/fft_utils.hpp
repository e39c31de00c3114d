#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>

// FFTW plan handles used by the operator and solver modules.  Planning is not
// thread-safe, so every plan is created and destroyed under a shared mutex;
// execution uses the new-array interface, which is safe to call concurrently.

struct fftw_plan_s;

namespace fracschrod::detail {

std::mutex& fftw_planner_mutex();

struct FftwFree {
    void operator()(void* p) const;
};

using ComplexBuffer = std::unique_ptr<std::complex<double>[], FftwFree>;

/// SIMD-aligned buffer of n complex values, zero-initialized.
ComplexBuffer alloc_complex(std::size_t n);

/// Batched in-place 1D complex transforms: `batch` contiguous rows of
/// `length` values each.
class BatchPlan {
public:
    BatchPlan(int length, int batch);
    ~BatchPlan();
    BatchPlan(const BatchPlan&) = delete;
    BatchPlan& operator=(const BatchPlan&) = delete;

    void forward(std::complex<double>* buf) const;
    void backward(std::complex<double>* buf) const;

    int length() const { return length_; }
    int batch() const { return batch_; }

private:
    fftw_plan_s* fwd_ = nullptr;
    fftw_plan_s* bwd_ = nullptr;
    int length_ = 0;
    int batch_ = 0;
};

/// In-place 2D complex transform on a rows x cols row-major array.
class Plan2d {
public:
    Plan2d(int rows, int cols);
    ~Plan2d();
    Plan2d(const Plan2d&) = delete;
    Plan2d& operator=(const Plan2d&) = delete;

    void forward(std::complex<double>* buf) const;
    void backward(std::complex<double>* buf) const;

private:
    fftw_plan_s* fwd_ = nullptr;
    fftw_plan_s* bwd_ = nullptr;
};

}  // namespace fracschrod::detail
