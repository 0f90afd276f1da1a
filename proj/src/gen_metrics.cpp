#include "sarkit/gen_metrics.hpp"

#include <cmath>
#include <cstdint>

#include <Eigen/Eigenvalues>

#include "sarkit/errors.hpp"
#include "sarkit/rng.hpp"

namespace sarkit {

namespace {

constexpr double kEigClamp = 1e-8;
constexpr double kFidClamp = 1e-6;

// Shared by inject_noise and noise_positions so both walk the generator the
// same way: a partial Fisher-Yates draw of k distinct indices.
std::vector<std::size_t> draw_positions(std::size_t pixel_count, double fraction, Rng& rng) {
    if (pixel_count == 0)
        throw InvalidSize("cannot sample positions from an empty image");
    if (!(fraction >= 0.0) || fraction > 1.0)
        throw InvalidSize("noise fraction must lie in [0, 1]");
    const auto k = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(pixel_count)));

    std::vector<std::size_t> pool(pixel_count);
    for (std::size_t i = 0; i < pixel_count; ++i)
        pool[i] = i;
    std::vector<std::size_t> picked;
    picked.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(pixel_count - i));
        std::swap(pool[i], pool[j]);
        picked.push_back(pool[i]);
    }
    return picked;
}

}  // namespace

void FeatureSet::validate() const {
    if (n == 0 || d == 0)
        throw InvalidSize("feature set must have positive sample count and dimension");
    if (values.size() != n * d)
        throw ShapeMismatch("feature buffer does not match n * d");
    for (double v : values)
        if (!std::isfinite(v))
            throw InvalidSize("feature set contains a non-finite value");
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> mean_cov(const FeatureSet& fs) {
    fs.validate();
    if (fs.n < 2)
        throw TooFewSamples("covariance needs at least two samples");

    const auto n = static_cast<Eigen::Index>(fs.n);
    const auto d = static_cast<Eigen::Index>(fs.d);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
        X(fs.values.data(), n, d);

    Eigen::VectorXd mu = X.colwise().mean();
    Eigen::MatrixXd centered = X.rowwise() - mu.transpose();
    Eigen::MatrixXd cov =
        (centered.transpose() * centered) / static_cast<double>(fs.n - 1);
    cov = ((cov + cov.transpose()) / 2.0).eval();
    return {std::move(mu), std::move(cov)};
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw DimensionMismatch("matrix square root needs a non-empty square matrix");
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > kEigClamp)
        throw NotSymmetric("matrix deviates from symmetry by " + std::to_string(asym));

    const Eigen::MatrixXd sym = (m + m.transpose()) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    if (es.info() != Eigen::Success)
        throw NotPSD("eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] < -kEigClamp)
            throw NotPSD("eigenvalue " + std::to_string(ev[i]) + " below tolerance");
        if (ev[i] < 0.0)
            ev[i] = 0.0;
    }
    const Eigen::MatrixXd root =
        es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    return (root + root.transpose()) / 2.0;
}

double fid(const FeatureSet& real, const FeatureSet& generated) {
    if (real.d != generated.d)
        throw DimensionMismatch("feature dimensions differ");
    const auto [mu_r, cov_r] = mean_cov(real);
    const auto [mu_g, cov_g] = mean_cov(generated);

    const Eigen::MatrixXd root_r = psd_sqrt(cov_r);
    Eigen::MatrixXd inner = root_r * cov_g * root_r;
    inner = ((inner + inner.transpose()) / 2.0).eval();
    const double tr_cross = psd_sqrt(inner).trace();

    const double dist = (mu_r - mu_g).squaredNorm() + cov_r.trace() + cov_g.trace() -
                        2.0 * tr_cross;
    if (dist < 0.0) {
        if (dist < -kFidClamp)
            throw NotPSD("distance evaluated to " + std::to_string(dist));
        return 0.0;
    }
    return dist;
}

std::vector<double> baseline_features(const GrayRaster& img, int d_side) {
    if (d_side <= 0 || d_side > img.width || d_side > img.height)
        throw InvalidSize("block grid must fit inside the image");

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(d_side) * d_side);
    for (int by = 0; by < d_side; ++by) {
        const int y0 = by * img.height / d_side;
        const int y1 = (by + 1) * img.height / d_side;
        for (int bx = 0; bx < d_side; ++bx) {
            const int x0 = bx * img.width / d_side;
            const int x1 = (bx + 1) * img.width / d_side;
            std::uint64_t sum = 0;
            for (int y = y0; y < y1; ++y)
                for (int x = x0; x < x1; ++x)
                    sum += img.at(x, y);
            const auto area = static_cast<double>(x1 - x0) * (y1 - y0);
            out.push_back(static_cast<double>(sum) / area / 255.0);
        }
    }
    return out;
}

GrayRaster inject_noise(const GrayRaster& img, double fraction, std::uint64_t seed) {
    Rng rng(seed);
    const std::vector<std::size_t> picked =
        draw_positions(static_cast<std::size_t>(img.width) * img.height, fraction, rng);
    GrayRaster out = img;
    for (std::size_t pos : picked)
        out.data[pos] = static_cast<std::uint8_t>(rng.below(256));
    return out;
}

std::vector<std::size_t> noise_positions(std::size_t pixel_count, double fraction,
                                         std::uint64_t seed) {
    Rng rng(seed);
    return draw_positions(pixel_count, fraction, rng);
}

}  // namespace sarkit
