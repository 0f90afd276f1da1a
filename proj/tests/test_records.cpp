#include "doctest.h"
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "oracle_helpers.hpp"
#include "sarkit/errors.hpp"
#include "sarkit/records.hpp"

using namespace sarkit;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("sarkit_rec_test_" + std::to_string(::getpid()) +
                                            "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("label rows survive a write/read cycle") {
    TempDir dir;
    const std::string path = dir.file("labels.jsonl");
    const std::vector<LabelRecord> rows = {
        {"scene_0_0.png", LabeledBox{3, 10, 20, 30, 40, std::nullopt}},
        {"scene_0_1.png", LabeledBox{0, 0, 0, 1, 1, std::nullopt}},
    };
    write_labels_jsonl(path, rows);
    const auto back = read_labels_jsonl(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].image == rows[0].image);
    CHECK(back[0].box == rows[0].box);
    CHECK(back[1].box == rows[1].box);
}

TEST_CASE("detection rows keep slice references and scene ids") {
    TempDir dir;
    const std::string path = dir.file("dets.jsonl");

    Detection with_slice;
    with_slice.box = LabeledBox{1, 5, 6, 7, 8, 0.75};
    with_slice.source = SliceRef{"big_scene", 2, 3, 512};
    Detection plain;
    plain.box = LabeledBox{0, 1, 2, 3, 4, 0.5};

    write_detections_jsonl(path, {with_slice, plain}, "fallback_scene");

    const auto records = read_detection_records(path);
    REQUIRE(records.size() == 2);
    CHECK(records[0].scene == "big_scene");
    REQUIRE(records[0].det.source.has_value());
    CHECK(records[0].det.source->i == 2);
    CHECK(records[0].det.source->j == 3);
    CHECK(records[0].det.source->stride == 512);
    CHECK(records[0].det.box == with_slice.box);
    CHECK(records[1].scene == "fallback_scene");
    CHECK_FALSE(records[1].det.source.has_value());
    CHECK(records[1].det.box == plain.box);

    const auto dets = read_detections_jsonl(path);
    REQUIRE(dets.size() == 2);
    CHECK(dets[0].box == with_slice.box);

    // record-level writer reproduces the same file
    const std::string copy = dir.file("copy.jsonl");
    write_detection_records(copy, records);
    CHECK(read_text_file(copy) == read_text_file(path));
}

TEST_CASE("malformed JSONL reports the file and line") {
    TempDir dir;
    const std::string path = dir.file("bad.jsonl");
    write_text_file(path,
                    R"({"image":"a.png","class":0,"x":1,"y":2,"w":3,"h":4})" "\n"
                    "not json at all\n");
    try {
        read_labels_jsonl(path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find(path) != std::string::npos);
        CHECK(msg.find(":2") != std::string::npos);
    }
}

TEST_CASE("a JSONL row missing a field is a parse error") {
    TempDir dir;
    const std::string path = dir.file("short.jsonl");
    write_text_file(path, R"({"image":"a.png","class":0,"x":1,"y":2,"w":3})" "\n");
    CHECK_THROWS_AS(read_labels_jsonl(path), ParseError);
}

TEST_CASE("blank lines in JSONL are skipped") {
    TempDir dir;
    const std::string path = dir.file("gaps.jsonl");
    write_text_file(path, "\n" R"({"image":"a.png","class":1,"x":1,"y":2,"w":3,"h":4})" "\n\n");
    CHECK(read_labels_jsonl(path).size() == 1);
}

TEST_CASE("normalized label lines use center fractions with six decimals") {
    const LabeledBox box{3, 10, 20, 30, 40, std::nullopt};
    CHECK(to_normalized_line(box, 100, 200) == "3 0.250000 0.200000 0.300000 0.200000");
    CHECK_THROWS_AS(to_normalized_line(box, 0, 200), InvalidSize);
}

TEST_CASE("normalized labels round-trip exactly for pixel boxes") {
    TempDir dir;
    const std::string path = dir.file("labels.txt");
    Rng rng(345);
    std::vector<LabeledBox> boxes;
    for (int k = 0; k < 50; ++k) {
        LabeledBox b = oracle::random_box(rng, 0, 500, 100, 5);
        boxes.push_back(b);
    }
    write_normalized_labels(path, boxes, 640, 480);
    const auto back = read_normalized_labels(path, 640, 480);
    REQUIRE(back.size() == boxes.size());
    for (std::size_t k = 0; k < boxes.size(); ++k) CHECK(back[k] == boxes[k]);

    write_text_file(path, "0 0.5 0.5 0.1\n");
    CHECK_THROWS_AS(read_normalized_labels(path, 640, 480), ParseError);
}

TEST_CASE("placement plans round-trip through JSON") {
    PlacementPlan plan;
    plan.scene_id = "scene_7";
    plan.rng_seed = (1ull << 63) + 5;  // force the full unsigned range
    plan.entries = {{"chipA", 2, 10, 20, 128, 128}, {"chipB", 0, 300, 400, 128, 128}};

    const PlacementPlan back = plan_from_json(plan_to_json(plan));
    CHECK(back.scene_id == plan.scene_id);
    CHECK(back.rng_seed == plan.rng_seed);
    REQUIRE(back.entries.size() == 2);
    CHECK(back.entries[0].chip_id == "chipA");
    CHECK(back.entries[0].class_id == 2);
    CHECK(back.entries[1].x == 300);
    CHECK(back.entries[1].chip_h == 128);

    nlohmann::json broken = plan_to_json(plan);
    broken.erase("seed");
    CHECK_THROWS_AS(plan_from_json(broken), ParseError);
}

TEST_CASE("slice indexes round-trip through JSON") {
    SliceRecord rec;
    rec.scene_id = "s";
    rec.i = 1;
    rec.j = 2;
    rec.x = 512;
    rec.y = 1024;
    rec.w = 512;
    rec.h = 488;
    rec.labels = {LabeledBox{4, 10, 20, 30, 40, std::nullopt}};

    const nlohmann::json j = slice_index_to_json({rec}, 512, 512);
    CHECK(j.at("size") == 512);
    CHECK(j.at("stride") == 512);

    const auto back = slice_index_from_json(j);
    REQUIRE(back.size() == 1);
    CHECK(back[0].scene_id == "s");
    CHECK(back[0].i == 1);
    CHECK(back[0].j == 2);
    CHECK(back[0].x == 512);
    CHECK(back[0].h == 488);
    REQUIRE(back[0].labels.size() == 1);
    CHECK(back[0].labels[0] == rec.labels[0]);

    CHECK_THROWS_AS(slice_index_from_json(nlohmann::json::object()), ParseError);
}

TEST_CASE("feature CSV holds doubles exactly") {
    TempDir dir;
    const std::string path = dir.file("f.csv");
    FeatureSet fs;
    fs.n = 2;
    fs.d = 3;
    fs.values = {3.141592653589793, 1.0 / 3.0, 1e-300, -2.5, 0.0, 6.02214076e23};
    write_features_csv(path, fs);

    const FeatureSet back = read_features_csv(path);
    CHECK(back.n == 2);
    CHECK(back.d == 3);
    for (std::size_t k = 0; k < fs.values.size(); ++k) CHECK(back.values[k] == fs.values[k]);

    write_text_file(path, "1.0,2.0\n3.0\n");
    CHECK_THROWS_AS(read_features_csv(path), ParseError);
    write_text_file(path, "1.0,banana\n");
    CHECK_THROWS_AS(read_features_csv(path), ParseError);
    write_text_file(path, "");
    CHECK_THROWS_AS(read_features_csv(path), InvalidSize);
}

TEST_CASE("raw feature files round-trip and detect truncation") {
    TempDir dir;
    const std::string path = dir.file("f.bin");
    FeatureSet fs;
    fs.n = 4;
    fs.d = 2;
    fs.values = {1, 2, 3, 4, 5, 6, 7, 0.125};
    write_features_raw(path, fs);

    const FeatureSet back = read_features_raw(path);
    CHECK(back.n == 4);
    CHECK(back.d == 2);
    CHECK(back.values == fs.values);

    fs::resize_file(path, 3 * sizeof(double));
    CHECK_THROWS_AS(read_features_raw(path), ParseError);

    fs::remove(path + ".json");
    CHECK_THROWS_AS(read_features_raw(path), IoError);
}

TEST_CASE("fnv1a64 matches the published test vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
    CHECK(fnv1a64("hello world") == 0x779a65e7023cd2e7ull);
}

TEST_CASE("run metadata is deterministic and timestamp-free") {
    const nlohmann::json config = {{"size", 512}, {"stride", 256}};
    const nlohmann::json meta = run_metadata("slice", config, {42, 7});

    std::vector<std::string> keys;
    for (auto it = meta.begin(); it != meta.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"config", "config_hash", "seeds", "tool", "version"});

    CHECK(meta.at("tool") == "slice");
    CHECK(meta.at("config") == config);
    CHECK(meta.at("seeds") == nlohmann::json({42, 7}));

    char expected[19];
    std::snprintf(expected, sizeof(expected), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config.dump())));
    CHECK(meta.at("config_hash") == std::string(expected));

    // reruns must be byte-identical
    CHECK(run_metadata("slice", config, {42, 7}).dump() == meta.dump());
}

TEST_CASE("text and JSON helpers report the right error types") {
    TempDir dir;
    CHECK_THROWS_AS(read_text_file(dir.file("absent.txt")), IoError);
    const std::string path = dir.file("broken.json");
    write_text_file(path, "{ not json");
    CHECK_THROWS_AS(read_json_file(path), ParseError);

    const std::string good = dir.file("good.json");
    write_json_file(good, {{"k", 1}});
    CHECK(read_json_file(good).at("k") == 1);
}
