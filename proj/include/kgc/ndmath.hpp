#pragma once
// Dense float32 vector/matrix primitives with float64 accumulation.
//
// Storage is 32-bit everywhere (embedding tables get large), but every
// reduction (dot products, sums, exp/log pipelines) accumulates in 64-bit.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace kgc {

using Vec = std::vector<float>;

// Row-major dense matrix.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<float> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0f) {}

    std::span<float> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const float> row(std::size_t i) const {
        return {data.data() + i * cols, cols};
    }
    float& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    float at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    std::size_t size() const { return data.size(); }
};

double dot(std::span<const float> a, std::span<const float> b);

// out[k] = sum_i a[i] * b[(k+i) mod d]. Direct O(d^2); d stays <= 500 here.
void circular_correlation(std::span<const float> a, std::span<const float> b,
                          std::span<float> out);
void circular_correlation(std::span<const float> a, std::span<const double> b,
                          std::span<double> out);
Vec circular_correlation(const Vec& a, const Vec& b);

// Max-subtracted, overflow-safe. Output sums to 1 within 1e-6.
void softmax(std::span<const float> in, std::span<float> out);
void softmax(std::span<const double> in, std::span<double> out);
Vec softmax(const Vec& in);

double sigmoid(double x);
float relu(float x);

// Central-difference gradient check. `f` re-evaluates the objective against
// the current contents of `theta`; entries are perturbed in place by +-eps
// and restored. Returns max_i |g_fd - g_an| / max(1e-8, |g_fd| + |g_an|),
// or +inf if any evaluation is non-finite.
double grad_check(const std::function<double()>& f, std::span<float> theta,
                  std::span<const double> analytic, double eps = 1e-3);

// Project rows of `points` onto the top-2 principal components.
// Power iteration with deflation (tol 1e-6, max 1000 iters); each component's
// sign is fixed so its largest-magnitude loading is positive. Rank-deficient
// directions project to zero.
Mat pca2(const Mat& points);

}  // namespace kgc
