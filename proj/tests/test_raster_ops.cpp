#include "doctest.h"

#include <algorithm>

#include "sarkit/errors.hpp"
#include "sarkit/raster.hpp"
#include "sarkit/raster_ops.hpp"

#include "oracle_helpers.hpp"

using namespace sarkit;

TEST_CASE("gaussian blur: side 1 is the identity") {
    Rng rng(11);
    const GrayRaster img = oracle::random_image(rng, 9, 7);
    CHECK(gaussian_blur(img, 1, 0.8) == img);
}

TEST_CASE("gaussian blur: constant images stay constant") {
    GrayRaster img(12, 12);
    std::fill(img.data.begin(), img.data.end(), 143);
    for (int side : {3, 5, 9})
        CHECK(gaussian_blur(img, side, default_blur_sigma(side)) == img);
}

TEST_CASE("gaussian blur: output stays inside the input value range") {
    Rng rng(12);
    const GrayRaster img = oracle::random_image(rng, 17, 13, 40, 200);
    const GrayRaster out = gaussian_blur(img, 5, 1.1);
    const auto [lo, hi] = std::minmax_element(img.data.begin(), img.data.end());
    for (std::uint8_t v : out.data) {
        CHECK(v >= *lo);
        CHECK(v <= *hi);
    }
}

TEST_CASE("gaussian blur: rejects bad kernels") {
    const GrayRaster img(8, 8);
    CHECK_THROWS_AS(gaussian_blur(img, 4, 1.0), InvalidKernel);
    CHECK_THROWS_AS(gaussian_blur(img, 3, 0.0), InvalidKernel);
    CHECK_THROWS_AS(gaussian_blur(img, 9, 1.0), InvalidKernel);  // exceeds min dim
}

TEST_CASE("percentile threshold: 0..255 ramp at 0.90 gives 229") {
    GrayRaster img(16, 16);
    for (int i = 0; i < 256; ++i)
        img.data[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    CHECK(percentile_threshold(img, 0.90) == 229);
}

TEST_CASE("percentile threshold: agrees with the sorted-scan reference") {
    Rng rng(13);
    for (int it = 0; it < 50; ++it) {
        const GrayRaster img = oracle::random_image(rng, 13, 11);
        const double fraction = 0.05 + 0.9 * rng.unit();
        CHECK(percentile_threshold(img, fraction) ==
              oracle::percentile_reference(img, fraction));
    }
}

TEST_CASE("percentile threshold: tiny fractions clamp to the first pixel") {
    Rng rng(14);
    const GrayRaster img = oracle::random_image(rng, 8, 8);
    const int smallest = *std::min_element(img.data.begin(), img.data.end());
    CHECK(percentile_threshold(img, 1e-9) == smallest);
}

TEST_CASE("binarize: foreground is strictly above the threshold") {
    GrayRaster img(4, 1);
    img.data = {10, 11, 12, 13};
    const BinaryMask mask = binarize(img, 11);
    CHECK(mask.at(0, 0) == 0);
    CHECK(mask.at(1, 0) == 0);
    CHECK(mask.at(2, 0) == 1);
    CHECK(mask.at(3, 0) == 1);
}

TEST_CASE("otsu: matches the exhaustive exact-arithmetic reference") {
    Rng rng(15);
    for (int it = 0; it < 200; ++it) {
        const GrayRaster img = oracle::random_image(rng, 8, 8);
        const auto expected = oracle::otsu_exhaustive(img);
        if (!expected) {
            CHECK_THROWS_AS(otsu_threshold(img), DegenerateImage);
            continue;
        }
        CHECK(otsu_threshold(img) == *expected);
    }
}

TEST_CASE("otsu: constant image is degenerate") {
    GrayRaster img(6, 6);
    std::fill(img.data.begin(), img.data.end(), 77);
    CHECK_THROWS_AS(otsu_threshold(img), DegenerateImage);
}

TEST_CASE("otsu: two-value histogram splits at the lower value") {
    GrayRaster img(10, 1);
    img.data = {30, 30, 30, 30, 30, 200, 200, 200, 200, 200};
    // every t in [30,199] separates the classes identically; smallest wins
    CHECK(otsu_threshold(img) == 30);
}

TEST_CASE("otsu: symmetric extremal histogram ties break to the smallest threshold") {
    GrayRaster img(8, 1);
    img.data = {0, 0, 0, 0, 255, 255, 255, 255};
    CHECK(otsu_threshold(img) == 0);
}

TEST_CASE("morphology: hand-checked erosion and dilation") {
    // 5x5 plus sign: the square 3x3 element erodes it away completely (no
    // pixel of a plus has all eight neighbors), while dilation fills the
    // 5x5 square minus its corners
    BinaryMask cross(5, 5);
    for (int k = 1; k <= 3; ++k) {
        cross.set(k, 2, true);
        cross.set(2, k, true);
    }
    const BinaryMask eroded = morph(cross, MorphOp::Erode, StructuringElement{3});
    CHECK(eroded.foreground_count() == 0);

    const BinaryMask dilated = morph(cross, MorphOp::Dilate, StructuringElement{3});
    CHECK(dilated.foreground_count() == 21);  // 25 minus 4 corners
    CHECK(dilated.at(0, 0) == 0);
    CHECK(dilated.at(4, 4) == 0);
    CHECK(dilated.at(0, 1) == 1);

    // a solid 3x3 block erodes down to exactly its center
    BinaryMask block(5, 5);
    for (int y = 1; y <= 3; ++y)
        for (int x = 1; x <= 3; ++x)
            block.set(x, y, true);
    const BinaryMask core = morph(block, MorphOp::Erode, StructuringElement{3});
    CHECK(core.foreground_count() == 1);
    CHECK(core.at(2, 2) == 1);
}

TEST_CASE("morphology: erosion is the dual of dilation away from the border") {
    const auto complement = [](const BinaryMask& m) {
        BinaryMask out(m.width, m.height);
        for (std::size_t k = 0; k < m.data.size(); ++k) out.data[k] = m.data[k] ? 0 : 1;
        return out;
    };
    Rng rng(16);
    for (int it = 0; it < 20; ++it) {
        // margin >= structuring element radius keeps the out-of-bounds
        // convention from breaking the duality
        const BinaryMask mask = oracle::random_mask(rng, 14, 12, 1);
        const BinaryMask lhs = morph(mask, MorphOp::Erode, StructuringElement{3});
        const BinaryMask rhs =
            complement(morph(complement(mask), MorphOp::Dilate, StructuringElement{3}));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("morphology: opening and closing are idempotent") {
    Rng rng(17);
    for (int it = 0; it < 20; ++it) {
        const BinaryMask mask = oracle::random_mask(rng, 15, 11);
        for (MorphOp op : {MorphOp::Open, MorphOp::Close}) {
            const BinaryMask once = morph(mask, op, StructuringElement{3});
            CHECK(morph(once, op, StructuringElement{3}) == once);
        }
    }
}

TEST_CASE("morphology: opening shrinks, closing grows") {
    Rng rng(18);
    // closing is only extensive away from the border: out-of-bounds counts
    // as background, so foreground hugging the edge can erode away again
    const BinaryMask mask = oracle::random_mask(rng, 15, 11, 1);
    const BinaryMask opened = morph(mask, MorphOp::Open, StructuringElement{3});
    const BinaryMask closed = morph(mask, MorphOp::Close, StructuringElement{3});
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x) {
            if (opened.at(x, y))
                CHECK(mask.at(x, y));
            if (mask.at(x, y))
                CHECK(closed.at(x, y));
        }
}

TEST_CASE("morphology: kernel larger than the image is rejected") {
    const BinaryMask mask(4, 4);
    CHECK_THROWS_AS(morph(mask, MorphOp::Erode, StructuringElement{5}), InvalidKernel);
}

TEST_CASE("structuring element: side must be odd and positive") {
    CHECK_THROWS_AS(StructuringElement{2}, InvalidKernel);
    CHECK_THROWS_AS(StructuringElement{-3}, InvalidKernel);
    CHECK(StructuringElement{5}.radius() == 2);
}

TEST_CASE("compose: mask picks foreground pixels, shape errors throw") {
    GrayRaster fg(3, 1), bg(3, 1);
    fg.data = {1, 2, 3};
    bg.data = {9, 9, 9};
    BinaryMask mask(3, 1);
    mask.set(1, 0, true);
    const GrayRaster out = compose(fg, bg, mask);
    CHECK(out.data == std::vector<std::uint8_t>{9, 2, 9});

    const BinaryMask wrong(2, 1);
    CHECK_THROWS_AS(compose(fg, bg, wrong), ShapeMismatch);
}

TEST_CASE("invert is an involution that mirrors every value") {
    Rng rng(19);
    const GrayRaster img = oracle::random_image(rng, 9, 9);
    const GrayRaster flipped = invert(img);
    for (std::size_t k = 0; k < img.data.size(); ++k)
        CHECK(flipped.data[k] == 255 - img.data[k]);
    CHECK(invert(flipped) == img);
}

TEST_CASE("crop/blit round trip") {
    Rng rng(20);
    GrayRaster img = oracle::random_image(rng, 20, 16);
    const GrayRaster cut = crop(img, 3, 5, 7, 6);
    CHECK(cut.width == 7);
    CHECK(cut.height == 6);
    CHECK(cut.at(0, 0) == img.at(3, 5));

    GrayRaster copy = img;
    blit(copy, cut, 3, 5);
    CHECK(copy == img);

    CHECK_THROWS_AS(crop(img, 15, 0, 7, 3), InvalidSize);
    CHECK_THROWS_AS(blit(img, cut, 18, 0), InvalidSize);
}

TEST_CASE("gaussian blur: a single bright pixel keeps its mass within rounding") {
    GrayRaster img(5, 5, 0);
    img.at(2, 2) = 255;
    const GrayRaster out = gaussian_blur(img, 3, 0.8);

    CHECK(out.at(2, 2) < 255);  // the spike spreads out
    CHECK(out.at(1, 2) > 0);
    CHECK(out.at(2, 1) > 0);

    long long mass = 0;
    for (std::uint8_t v : out.data) mass += v;
    // each of the 9 touched pixels rounds by at most 1/2
    CHECK(std::abs(mass - 255) <= 5);
}

TEST_CASE("gaussian blur: smoothing reduces the variance of a random image") {
    Rng rng(606);
    const GrayRaster img = oracle::random_image(rng, 64, 64);
    const GrayRaster out = gaussian_blur(img, 5, 1.0);

    const auto variance = [](const GrayRaster& r) {
        double sum = 0.0, sq = 0.0;
        for (std::uint8_t v : r.data) {
            sum += v;
            sq += static_cast<double>(v) * v;
        }
        const double n = static_cast<double>(r.data.size());
        const double mean = sum / n;
        return sq / n - mean * mean;
    };
    CHECK(variance(out) < variance(img));
}

TEST_CASE("otsu: ten 50s and ten 200s split at 50") {
    GrayRaster img(4, 5);
    for (int k = 0; k < 20; ++k) img.data[static_cast<std::size_t>(k)] = k < 10 ? 50 : 200;
    CHECK(otsu_threshold(img) == 50);
}

TEST_CASE("morphology: closing bridges a one-pixel gap between blocks") {
    BinaryMask m(12, 8);
    for (int y = 2; y < 5; ++y) {
        for (int x = 2; x < 5; ++x) m.set(x, y, true);
        for (int x = 6; x < 9; ++x) m.set(x, y, true);
    }
    REQUIRE(oracle::component_count(m) == 2);

    const BinaryMask closed = morph(m, MorphOp::Close, StructuringElement(3));
    CHECK(oracle::component_count(closed) == 1);
    // the original foreground survives closing here (it sits off the border)
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            if (m.at(x, y)) CHECK(closed.at(x, y));
}

TEST_CASE("mask raster encoding round-trips through binarize") {
    Rng rng(31415);
    const BinaryMask m = oracle::random_mask(rng, 17, 13);
    const GrayRaster img = mask_to_raster(m);
    for (std::uint8_t v : img.data) CHECK((v == 0 || v == 255));
    CHECK(binarize(img, 0) == m);
}

TEST_CASE("default blur kernel tracks the image size") {
    CHECK(default_blur_side(GrayRaster(128, 128, 0)) == 5);   // 128/25 = 5.12
    CHECK(default_blur_side(GrayRaster(300, 50, 0)) == 3);    // 50/25 = 2, clamped up
    CHECK(default_blur_side(GrayRaster(500, 500, 0)) == 9);   // 20, clamped down
    CHECK(default_blur_side(GrayRaster(4, 4, 0)) == 3);
    CHECK(default_blur_side(GrayRaster(2, 2, 0)) == 1);       // never exceeds the image

    CHECK(default_blur_sigma(3) == doctest::Approx(0.8));
    CHECK(default_blur_sigma(5) == doctest::Approx(1.1));
    CHECK(default_blur_sigma(9) == doctest::Approx(1.7));
}
