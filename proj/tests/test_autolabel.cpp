#include "doctest.h"
#include <unistd.h>

#include <filesystem>
#include <map>
#include <string>

#include "oracle_helpers.hpp"
#include "sarkit/autolabel.hpp"
#include "sarkit/errors.hpp"
#include "sarkit/image_io.hpp"

using namespace sarkit;
namespace fs = std::filesystem;

namespace {

GrayRaster rect_chip(int size, int x0, int y0, int x1, int y1, std::uint8_t bg = 10,
                     std::uint8_t fg = 200) {
    GrayRaster chip(size, size, bg);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) chip.at(x, y) = fg;
    return chip;
}

BinaryMask rect_only(int w, int h, int x0, int y0, int x1, int y1) {
    BinaryMask m(w, h);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) m.set(x, y, true);
    return m;
}

AutoLabelParams exact_params(int white, double expand) {
    AutoLabelParams p;
    p.white_pixel_threshold = white;
    p.expand_fraction = expand;
    p.binarize.blur_side = 1;  // identity blur keeps the mask exact
    p.binarize.fraction = 0.9;
    return p;
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("sarkit_label_test_" + std::to_string(::getpid()) +
                                            "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("raw traversal finds the tight line-count rectangle") {
    const BinaryMask mask = rect_only(128, 128, 49, 54, 79, 74);
    const LabeledBox box = auto_label_raw(mask, 0, 10);
    CHECK(box == LabeledBox{0, 49, 54, 30, 20, std::nullopt});
}

TEST_CASE("traversal counts pixels per line, not connected shapes") {
    // A horizontal bar decides the row range, a separate vertical bar decides
    // the column range; the resulting box matches neither shape.
    BinaryMask mask(32, 32);
    for (int x = 8; x < 28; ++x) {
        mask.set(x, 5, true);
        mask.set(x, 6, true);
    }
    for (int y = 10; y < 26; ++y) {
        mask.set(2, y, true);
        mask.set(3, y, true);
    }
    const LabeledBox box = auto_label_raw(mask, 7, 5);
    CHECK(box == LabeledBox{7, 2, 5, 2, 2, std::nullopt});
}

TEST_CASE("a line with exactly the threshold count stops the scan") {
    const BinaryMask mask = rect_only(32, 32, 10, 8, 20, 24);  // rows carry 10 pixels
    CHECK(auto_label_raw(mask, 0, 10) == LabeledBox{0, 10, 8, 10, 16, std::nullopt});
    CHECK_THROWS_AS(auto_label_raw(mask, 0, 11), NoTarget);
}

TEST_CASE("auto_label expands the raw rectangle concentrically") {
    // Raw box (49,54,30,20); growing by half adds 15 and 10 pixels, split
    // evenly around the centre: (42,49,45,30).
    const GrayRaster chip = rect_chip(128, 49, 54, 79, 74);
    const LabeledBox box = auto_label(chip, 2, exact_params(10, 0.5));
    CHECK(box == LabeledBox{2, 42, 49, 45, 30, std::nullopt});
}

TEST_CASE("expansion rounds half up and gives the odd pixel to the far side") {
    // w = 5 grows to lround(7.5) = 8: one pixel added on the left, two on the
    // right.
    const GrayRaster chip = rect_chip(32, 10, 10, 15, 15);
    const LabeledBox box = auto_label(chip, 0, exact_params(5, 0.5));
    CHECK(box == LabeledBox{0, 9, 9, 8, 8, std::nullopt});
}

TEST_CASE("expand_fraction zero returns the raw rectangle") {
    const GrayRaster chip = rect_chip(128, 49, 54, 79, 74);
    const LabeledBox box = auto_label(chip, 0, exact_params(10, 0.0));
    CHECK(box == LabeledBox{0, 49, 54, 30, 20, std::nullopt});
}

TEST_CASE("expanded boxes are clamped to the image") {
    // Raw box (0,0,20,16) doubled would reach (-10,-8,40,32); the clamp trims
    // it back to the visible part.
    const GrayRaster chip = rect_chip(64, 0, 0, 20, 16);
    const LabeledBox box = auto_label(chip, 0, exact_params(10, 1.0));
    CHECK(box == LabeledBox{0, 0, 0, 30, 24, std::nullopt});
}

TEST_CASE("auto_label reports NoTarget on a uniform chip") {
    const GrayRaster chip(64, 64, 50);
    CHECK_THROWS_AS(auto_label(chip, 0, exact_params(10, 0.5)), NoTarget);
}

TEST_CASE("auto_label validates parameters") {
    const GrayRaster chip = rect_chip(32, 10, 10, 15, 15);
    AutoLabelParams p = exact_params(5, 0.5);
    p.white_pixel_threshold = 0;
    CHECK_THROWS_AS(auto_label(chip, 0, p), InvalidSize);
    p = exact_params(5, -0.1);
    CHECK_THROWS_AS(auto_label(chip, 0, p), InvalidSize);
    p = exact_params(5, 0.5);
    p.binarize.fraction = 0.0;
    CHECK_THROWS_AS(auto_label(chip, 0, p), InvalidSize);
}

TEST_CASE("batch_autolabel tracks per-class error rates with an unweighted mean") {
    TempDir dir;
    const fs::path t0 = dir.path / "t0.png";
    const fs::path t1 = dir.path / "t1.png";
    const fs::path u0 = dir.path / "u0.png";
    save_image(rect_chip(32, 10, 10, 15, 15), t0);
    save_image(rect_chip(32, 10, 10, 15, 15), t1);
    save_image(GrayRaster(32, 32, 90), u0);  // uniform: no target

    const std::vector<ChipEntry> manifest = {{t0, "tank"}, {t1, "tank"}, {u0, "truck"}};
    const std::map<std::string, int> class_ids = {{"tank", 3}};
    // t1 gets a reference box nowhere near the target, so it fails the match.
    const std::map<std::string, LabeledBox> refs = {
        {t1.string(), LabeledBox{3, 0, 0, 5, 5, std::nullopt}}};

    const AutoLabelParams params = exact_params(5, 0.0);
    const BatchAutoLabelResult res = batch_autolabel(manifest, params, class_ids, refs, 0.5);

    REQUIRE(res.items.size() == 3);
    CHECK(res.items[0].error.empty());
    REQUIRE(res.items[0].box.has_value());
    CHECK(*res.items[0].box == LabeledBox{3, 10, 10, 5, 5, std::nullopt});
    CHECK(res.items[0].matches_ref);
    CHECK(res.items[1].error.empty());
    CHECK_FALSE(res.items[1].matches_ref);  // IoU against the reference is 0
    CHECK_FALSE(res.items[2].error.empty());

    REQUIRE(res.classes.size() == 2);
    CHECK(res.classes[0].class_name == "tank");
    CHECK(res.classes[0].total == 2);
    CHECK(res.classes[0].failed == 1);
    CHECK(res.classes[0].error_rate_percent() == doctest::Approx(50.0));
    CHECK(res.classes[1].class_name == "truck");
    CHECK(res.classes[1].total == 1);
    CHECK(res.classes[1].failed == 1);
    CHECK(res.classes[1].error_rate_percent() == doctest::Approx(100.0));

    // Unweighted mean of {50, 100}, not the pooled 2/3 rate.
    CHECK(res.average_error_rate_percent == doctest::Approx(75.0));

    const BatchAutoLabelResult par = batch_autolabel(manifest, params, class_ids, refs, 0.5, 4);
    REQUIRE(par.items.size() == res.items.size());
    for (std::size_t i = 0; i < res.items.size(); ++i) {
        CHECK(par.items[i].error == res.items[i].error);
        CHECK(par.items[i].matches_ref == res.items[i].matches_ref);
        CHECK(par.items[i].box == res.items[i].box);
    }
    CHECK(par.average_error_rate_percent == doctest::Approx(res.average_error_rate_percent));
}
