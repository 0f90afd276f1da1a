#include "sarkit/raster_ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace sarkit {

namespace {

std::array<std::size_t, 256> histogram(const GrayRaster& img) {
    std::array<std::size_t, 256> hist{};
    for (std::uint8_t v : img.data) ++hist[v];
    return hist;
}

// Compare a*b vs c*d exactly, where a, c are 128-bit and b, d are 64-bit.
// Products are up to 192 bits wide, held as (high, low64) after carrying.
int cmp_product(unsigned __int128 a, std::uint64_t b, unsigned __int128 c, std::uint64_t d) {
    auto split = [](unsigned __int128 x, std::uint64_t m) {
        const std::uint64_t xhi = static_cast<std::uint64_t>(x >> 64);
        const std::uint64_t xlo = static_cast<std::uint64_t>(x);
        unsigned __int128 hi = static_cast<unsigned __int128>(xhi) * m;
        unsigned __int128 lo = static_cast<unsigned __int128>(xlo) * m;
        hi += lo >> 64;
        return std::pair<unsigned __int128, std::uint64_t>(hi, static_cast<std::uint64_t>(lo));
    };
    const auto [h1, l1] = split(a, b);
    const auto [h2, l2] = split(c, d);
    if (h1 != h2) return h1 < h2 ? -1 : 1;
    if (l1 != l2) return l1 < l2 ? -1 : 1;
    return 0;
}

BinaryMask erode_or_dilate(const BinaryMask& mask, const StructuringElement& se, bool erode) {
    const int r = se.radius();
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            bool acc = erode;
            for (int dy = -r; dy <= r && acc == erode; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const int nx = x + dx;
                    const int ny = y + dy;
                    // out-of-bounds counts as background
                    const bool v = nx >= 0 && nx < mask.width && ny >= 0 && ny < mask.height &&
                                   mask.at(nx, ny);
                    if (erode ? !v : v) {
                        acc = !erode;
                        break;
                    }
                }
            }
            out.set(x, y, acc);
        }
    }
    return out;
}

}  // namespace

int default_blur_side(const GrayRaster& img) {
    const double target = std::min(img.width, img.height) / 25.0;
    int side = 2 * static_cast<int>(std::lround((target - 1.0) / 2.0)) + 1;
    side = std::clamp(side, 3, 9);
    // never exceed the image
    const int min_dim = std::min(img.width, img.height);
    if (side > min_dim) side = (min_dim % 2 == 1) ? min_dim : min_dim - 1;
    return std::max(side, 1);
}

double default_blur_sigma(int kernel_side) {
    return 0.3 * ((kernel_side - 1) * 0.5 - 1.0) + 0.8;
}

GrayRaster gaussian_blur(const GrayRaster& img, int kernel_side, double sigma) {
    if (kernel_side < 1 || kernel_side % 2 == 0) {
        throw InvalidKernel("blur kernel side must be odd, got " + std::to_string(kernel_side));
    }
    if (kernel_side > std::min(img.width, img.height)) {
        throw InvalidKernel("blur kernel side " + std::to_string(kernel_side) +
                            " exceeds image " + std::to_string(img.width) + "x" +
                            std::to_string(img.height));
    }
    if (!(sigma > 0.0)) {
        throw InvalidKernel("blur sigma must be positive");
    }

    const int r = kernel_side / 2;
    std::vector<double> kernel(static_cast<std::size_t>(kernel_side) * kernel_side);
    double sum = 0.0;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            const double w = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
            kernel[static_cast<std::size_t>(dy + r) * kernel_side + (dx + r)] = w;
            sum += w;
        }
    }
    for (double& w : kernel) w /= sum;

    GrayRaster out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                const int ny = std::clamp(y + dy, 0, img.height - 1);
                for (int dx = -r; dx <= r; ++dx) {
                    const int nx = std::clamp(x + dx, 0, img.width - 1);
                    acc += kernel[static_cast<std::size_t>(dy + r) * kernel_side + (dx + r)] *
                           img.at(nx, ny);
                }
            }
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp<long>(std::lround(acc), 0, 255));
        }
    }
    return out;
}

std::uint8_t percentile_threshold(const GrayRaster& img, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw InvalidSize("percentile fraction must be in (0,1), got " + std::to_string(fraction));
    }
    const auto hist = histogram(img);
    const std::size_t total = img.size();
    std::size_t required = static_cast<std::size_t>(fraction * static_cast<double>(total));
    if (required < 1) required = 1;

    std::size_t cumulative = 0;
    for (int p = 0; p < 256; ++p) {
        cumulative += hist[p];
        if (cumulative >= required) return static_cast<std::uint8_t>(p);
    }
    return 255;  // unreachable: cumulative reaches total
}

BinaryMask binarize(const GrayRaster& img, std::uint8_t p) {
    BinaryMask out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        out.data[i] = img.data[i] > p ? 1 : 0;
    }
    return out;
}

std::uint8_t otsu_threshold(const GrayRaster& img) {
    const auto hist = histogram(img);
    const std::uint64_t total = img.size();
    std::uint64_t total_sum = 0;
    int distinct = 0;
    for (int v = 0; v < 256; ++v) {
        total_sum += static_cast<std::uint64_t>(hist[v]) * v;
        if (hist[v] > 0) ++distinct;
    }
    if (distinct < 2) {
        throw DegenerateImage("otsu needs at least two distinct intensities");
    }

    // Between-class variance at threshold t is proportional to
    // (sum0*total - total_sum*w0)^2 / (w0*w1); comparing candidates with
    // integer arithmetic keeps the smallest-threshold tie rule exact.
    int best_t = 0;
    unsigned __int128 best_num = 0;
    std::uint64_t best_den = 1;
    bool have_best = false;
    std::uint64_t w0 = 0;
    std::uint64_t sum0 = 0;
    for (int t = 0; t < 256; ++t) {
        w0 += hist[t];
        sum0 += static_cast<std::uint64_t>(hist[t]) * t;
        const std::uint64_t w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;

        const unsigned __int128 lhs = static_cast<unsigned __int128>(sum0) * total;
        const unsigned __int128 rhs = static_cast<unsigned __int128>(total_sum) * w0;
        const unsigned __int128 diff = lhs > rhs ? lhs - rhs : rhs - lhs;
        // diff <= 255 * total^2 fits in 128 bits for any realistic raster,
        // but diff^2 may not; keep diff under 64 bits so the square stays
        // in range (holds for images up to ~2^28 total intensity-pixels).
        const unsigned __int128 num = diff * diff;
        const std::uint64_t den = w0 * w1;
        if (!have_best || cmp_product(num, best_den, best_num, den) > 0) {
            have_best = true;
            best_num = num;
            best_den = den;
            best_t = t;
        }
    }
    return static_cast<std::uint8_t>(best_t);
}

BinaryMask morph(const BinaryMask& mask, MorphOp op, const StructuringElement& se) {
    if (se.side > std::min(mask.width, mask.height)) {
        throw InvalidKernel("structuring element side " + std::to_string(se.side) +
                            " exceeds mask " + std::to_string(mask.width) + "x" +
                            std::to_string(mask.height));
    }
    switch (op) {
        case MorphOp::Erode:
            return erode_or_dilate(mask, se, true);
        case MorphOp::Dilate:
            return erode_or_dilate(mask, se, false);
        case MorphOp::Open:
            return erode_or_dilate(erode_or_dilate(mask, se, true), se, false);
        case MorphOp::Close:
            return erode_or_dilate(erode_or_dilate(mask, se, false), se, true);
    }
    throw Error("unknown morphological operation");
}

GrayRaster compose(const GrayRaster& chip, const GrayRaster& scene_cut, const BinaryMask& mask) {
    if (!chip.same_shape(scene_cut) || chip.width != mask.width || chip.height != mask.height) {
        throw ShapeMismatch("compose operands must share dimensions");
    }
    GrayRaster out(chip.width, chip.height);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] = mask.data[i] ? chip.data[i] : scene_cut.data[i];
    }
    return out;
}

GrayRaster invert(const GrayRaster& img) {
    GrayRaster out = img;
    for (auto& v : out.data) v = static_cast<std::uint8_t>(255 - v);
    return out;
}

GrayRaster crop(const GrayRaster& img, int x, int y, int w, int h) {
    if (x < 0 || y < 0 || w <= 0 || h <= 0 || x + w > img.width || y + h > img.height) {
        throw InvalidSize("crop rectangle out of bounds");
    }
    GrayRaster out(w, h);
    for (int row = 0; row < h; ++row) {
        std::copy_n(img.data.begin() + static_cast<std::size_t>(y + row) * img.width + x, w,
                    out.data.begin() + static_cast<std::size_t>(row) * w);
    }
    return out;
}

void blit(GrayRaster& img, const GrayRaster& patch, int x, int y) {
    if (x < 0 || y < 0 || x + patch.width > img.width || y + patch.height > img.height) {
        throw InvalidSize("blit rectangle out of bounds");
    }
    for (int row = 0; row < patch.height; ++row) {
        std::copy_n(patch.data.begin() + static_cast<std::size_t>(row) * patch.width, patch.width,
                    img.data.begin() + static_cast<std::size_t>(y + row) * img.width + x);
    }
}

}  // namespace sarkit
