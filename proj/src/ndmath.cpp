#include "kgc/ndmath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace kgc {

double dot(std::span<const float> a, std::span<const float> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("dot: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return acc;
}

void circular_correlation(std::span<const float> a, std::span<const float> b,
                          std::span<float> out) {
    const std::size_t d = a.size();
    if (b.size() != d || out.size() != d)
        throw std::invalid_argument("circular_correlation: length mismatch");
    for (std::size_t k = 0; k < d; ++k) {
        double acc = 0.0;
        std::size_t j = k;
        for (std::size_t i = 0; i < d; ++i) {
            acc += static_cast<double>(a[i]) * static_cast<double>(b[j]);
            if (++j == d) j = 0;
        }
        out[k] = static_cast<float>(acc);
    }
}

void circular_correlation(std::span<const float> a, std::span<const double> b,
                          std::span<double> out) {
    const std::size_t d = a.size();
    if (b.size() != d || out.size() != d)
        throw std::invalid_argument("circular_correlation: length mismatch");
    for (std::size_t k = 0; k < d; ++k) {
        double acc = 0.0;
        std::size_t j = k;
        for (std::size_t i = 0; i < d; ++i) {
            acc += static_cast<double>(a[i]) * b[j];
            if (++j == d) j = 0;
        }
        out[k] = acc;
    }
}

Vec circular_correlation(const Vec& a, const Vec& b) {
    Vec out(a.size());
    circular_correlation(a, b, out);
    return out;
}

void softmax(std::span<const float> in, std::span<float> out) {
    if (in.size() != out.size())
        throw std::invalid_argument("softmax: length mismatch");
    if (in.empty()) return;
    float mx = in[0];
    for (float v : in) mx = std::max(mx, v);
    double sum = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        const double e = std::exp(static_cast<double>(in[i]) - static_cast<double>(mx));
        out[i] = static_cast<float>(e);
        sum += e;
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<float>(out[i] / sum);
}

void softmax(std::span<const double> in, std::span<double> out) {
    if (in.size() != out.size())
        throw std::invalid_argument("softmax: length mismatch");
    if (in.empty()) return;
    double mx = in[0];
    for (double v : in) mx = std::max(mx, v);
    double sum = 0.0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        const double e = std::exp(in[i] - mx);
        out[i] = e;
        sum += e;
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= sum;
}

Vec softmax(const Vec& in) {
    Vec out(in.size());
    softmax(in, out);
    return out;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

float relu(float x) { return x > 0.0f ? x : 0.0f; }

double grad_check(const std::function<double()>& f, std::span<float> theta,
                  std::span<const double> analytic, double eps) {
    if (theta.size() != analytic.size())
        throw std::invalid_argument("grad_check: length mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const float saved = theta[i];
        theta[i] = static_cast<float>(saved + eps);
        const double fp = f();
        const double actual_hi = theta[i];
        theta[i] = static_cast<float>(saved - eps);
        const double fm = f();
        // divide by the realized float-grid step, not the requested one
        const double step = actual_hi - theta[i];
        theta[i] = saved;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            return std::numeric_limits<double>::infinity();
        const double g_fd = (fp - fm) / step;
        const double g_an = analytic[i];
        const double rel =
            std::abs(g_fd - g_an) / std::max(1e-8, std::abs(g_fd) + std::abs(g_an));
        worst = std::max(worst, rel);
    }
    return worst;
}

namespace {

// One dominant eigenvector of the symmetric d x d matrix `s`. Returns the
// eigenvalue; `v` holds the unit eigenvector, or zeros when s is (numerically)
// the zero map in the remaining subspace.
double power_iteration(const std::vector<double>& s, std::size_t d,
                       std::vector<double>& v) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    v.assign(d, 0.0);
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        // hand-rolled uniform in [-0.5, 0.5): stable across libstdc++ versions
        v[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
        norm += v[i] * v[i];
    }
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;

    std::vector<double> w(d);
    for (int iter = 0; iter < 1000; ++iter) {
        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc += s[i * d + j] * v[j];
            w[i] = acc;
        }
        double wn = 0.0;
        for (double x : w) wn += x * x;
        wn = std::sqrt(wn);
        if (wn < 1e-12) {
            v.assign(d, 0.0);
            return 0.0;
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            w[i] /= wn;
            delta = std::max(delta, std::abs(w[i] - v[i]));
        }
        v = w;
        if (delta < 1e-6) break;
    }
    // Rayleigh quotient with the converged unit vector
    double lambda = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < d; ++j) acc += s[i * d + j] * v[j];
        lambda += v[i] * acc;
    }
    return lambda;
}

void fix_sign(std::vector<double>& v) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
    if (v[arg] < 0.0)
        for (auto& x : v) x = -x;
}

}  // namespace

Mat pca2(const Mat& points) {
    const std::size_t m = points.rows, d = points.cols;
    if (m < 2) throw std::invalid_argument("pca2: need at least 2 points");

    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j) mean[j] += points.at(i, j);
    for (auto& x : mean) x /= static_cast<double>(m);

    std::vector<double> centered(m * d);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < d; ++j)
            centered[i * d + j] = static_cast<double>(points.at(i, j)) - mean[j];

    std::vector<double> scatter(d * d, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t a = 0; a < d; ++a) {
            const double xa = centered[i * d + a];
            if (xa == 0.0) continue;
            for (std::size_t b = 0; b < d; ++b)
                scatter[a * d + b] += xa * centered[i * d + b];
        }

    Mat out(m, 2);
    std::vector<double> v;
    for (int comp = 0; comp < 2; ++comp) {
        const double lambda = power_iteration(scatter, d, v);
        fix_sign(v);
        for (std::size_t i = 0; i < m; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < d; ++j) acc += centered[i * d + j] * v[j];
            out.at(i, static_cast<std::size_t>(comp)) = static_cast<float>(acc);
        }
        // deflate before extracting the next component
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b)
                scatter[a * d + b] -= lambda * v[a] * v[b];
    }
    return out;
}

}  // namespace kgc
