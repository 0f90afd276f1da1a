#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sarkit/raster.hpp"

namespace sarkit {

/// A row-major matrix of feature vectors: n samples of dimension d.
struct FeatureSet {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> values;  // n * d, row-major

    double at(std::size_t row, std::size_t col) const { return values[row * d + col]; }
    /// Checks shape consistency and that every entry is finite.
    void validate() const;
};

/// Sample mean and unbiased (n-1) covariance. Requires n >= 2.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> mean_cov(const FeatureSet& fs);

/// Symmetric positive-semidefinite square root via eigendecomposition.
/// Eigenvalues within -1e-8 of zero are clamped; anything more negative
/// throws NotPSD. Asymmetric input (max deviation > 1e-8) throws NotSymmetric.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m);

/// Frechet distance between the Gaussian fits of two feature sets:
/// |mu_r - mu_g|^2 + Tr(S_r + S_g - 2 (S_r^{1/2} S_g S_r^{1/2})^{1/2}).
/// Tiny negative results (>= -1e-6) from rounding are clamped to zero.
double fid(const FeatureSet& real, const FeatureSet& generated);

/// Block-average feature embedding: splits the image into d_side x d_side
/// cells, averages each cell, and scales to [0, 1]. Produces d_side^2 values.
std::vector<double> baseline_features(const GrayRaster& img, int d_side);

/// Replaces exactly round(fraction * pixels) distinct pixels with uniform
/// random values in [0, 255], drawn from a seeded generator.
GrayRaster inject_noise(const GrayRaster& img, double fraction, std::uint64_t seed);

/// The pixel indices (row-major) that inject_noise(img, fraction, seed)
/// rewrites, in selection order.
std::vector<std::size_t> noise_positions(std::size_t pixel_count, double fraction,
                                         std::uint64_t seed);

}  // namespace sarkit
