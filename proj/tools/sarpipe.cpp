// sarpipe: dataset construction and scoring pipeline driver.
//
// Subcommands cover the whole offline flow: segment chips into masks,
// auto-label them, composite them into large scenes, slice scenes into
// training windows, corrupt images with seeded noise, post-process detector
// output (coordinate mapping + NMS), score detections against ground truth,
// and compare feature populations with a Frechet distance.
//
// Every artifact gets a "<artifact>.meta.json" stamp holding the tool name,
// effective configuration hash, and seeds, so identical runs are verifiable
// as bit-identical. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 acceptance-gate failure.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <cxxabi.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "sarkit/autolabel.hpp"
#include "sarkit/boxes.hpp"
#include "sarkit/detect_post.hpp"
#include "sarkit/errors.hpp"
#include "sarkit/eval.hpp"
#include "sarkit/gen_metrics.hpp"
#include "sarkit/image_io.hpp"
#include "sarkit/parallel.hpp"
#include "sarkit/records.hpp"
#include "sarkit/scene_synth.hpp"
#include "sarkit/segmentation.hpp"
#include "sarkit/slicer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitGate = 3;

std::string error_type(const std::exception& e) {
    int status = 0;
    char* demangled = abi::__cxa_demangle(typeid(e).name(), nullptr, nullptr, &status);
    std::string name = status == 0 && demangled ? demangled : typeid(e).name();
    std::free(demangled);
    if (const auto pos = name.rfind("::"); pos != std::string::npos)
        name = name.substr(pos + 2);
    return name;
}

void emit_error(const std::string& type, const std::string& message) {
    std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
}

// Effective configuration: the file named by --config (pre-scanned from
// argv) or the SARKIT_CONFIG environment variable; flags override its values.
json load_config(int argc, char** argv) {
    std::string path;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc)
            path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0)
            path = arg.substr(9);
    }
    if (path.empty()) {
        if (const char* env = std::getenv("SARKIT_CONFIG"))
            path = env;
    }
    if (path.empty())
        return json::object();
    const json cfg = sarkit::read_json_file(path);
    if (!cfg.is_object())
        throw sarkit::ParseError(path + ": config root must be an object");
    return cfg;
}

json section(const json& cfg, const std::string& name) {
    if (cfg.contains(name) && cfg.at(name).is_object())
        return cfg.at(name);
    return json::object();
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (j.contains(key))
        return j.at(key).get<T>();
    return fallback;
}

void stamp(const std::string& artifact, const std::string& tool, const json& config,
           const std::vector<std::uint64_t>& seeds) {
    sarkit::write_json_file(artifact + ".meta.json",
                            sarkit::run_metadata(tool, config, seeds));
}

std::vector<std::string> class_table(const json& cfg, const std::string& flag_list) {
    std::vector<std::string> names;
    if (!flag_list.empty()) {
        std::string cur;
        for (char c : flag_list + ",") {
            if (c == ',') {
                if (!cur.empty())
                    names.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
    } else if (cfg.contains("classes")) {
        for (const json& n : cfg.at("classes"))
            names.push_back(n.get<std::string>());
    }
    return names;
}

sarkit::SegmentationParams segment_params(const json& sec) {
    sarkit::SegmentationParams p;
    p.fraction = get_or(sec, "fraction", p.fraction);
    p.shadow_value = static_cast<std::uint8_t>(get_or(sec, "shadow_value", int{p.shadow_value}));
    p.blur_side = get_or(sec, "blur_side", p.blur_side);
    p.blur_sigma = get_or(sec, "blur_sigma", p.blur_sigma);
    p.se_side = get_or(sec, "se_side", p.se_side);
    return p;
}

std::map<std::string, double> fraction_table(const json& sec) {
    std::map<std::string, double> fractions = sarkit::default_class_fractions();
    if (sec.contains("class_fractions"))
        for (const auto& [name, value] : sec.at("class_fractions").items())
            fractions[name] = value.get<double>();
    return fractions;
}

std::vector<sarkit::ChipEntry> manifest_chips(const json& m, const std::string& path) {
    if (!m.contains("chips") || !m.at("chips").is_array())
        throw sarkit::ParseError(path + ": manifest needs a 'chips' array");
    std::vector<sarkit::ChipEntry> chips;
    for (const json& c : m.at("chips")) {
        sarkit::ChipEntry e;
        e.image = c.at("image").get<std::string>();
        if (c.contains("class"))
            e.class_name = c.at("class").get<std::string>();
        chips.push_back(std::move(e));
    }
    return chips;
}

// ---------------------------------------------------------------- segment --

struct SegmentArgs {
    std::string image, class_name, manifest, out_dir, object_mask, shadow_mask;
    sarkit::SegmentationParams params;
    int jobs = 0;
    json sec;
};

int run_segment(const SegmentArgs& a) {
    const std::map<std::string, double> fractions = fraction_table(a.sec);

    if (!a.manifest.empty()) {
        const json m = sarkit::read_json_file(a.manifest);
        const std::vector<sarkit::ChipEntry> chips = manifest_chips(m, a.manifest);
        if (a.out_dir.empty())
            throw sarkit::InvalidSize("batch segmentation needs --out-dir");
        fs::create_directories(a.out_dir);

        const sarkit::BatchSegmentResult res =
            sarkit::batch_segment(chips, a.params, fractions, a.jobs);
        for (const sarkit::SegmentOutcome& item : res.items) {
            if (!item.object_mask)
                continue;
            const std::string stem = item.entry.image.stem().string();
            sarkit::save_mask(*item.object_mask,
                              fs::path(a.out_dir) / (stem + "_object.png"));
            sarkit::save_mask(*item.object_shadow_mask,
                              fs::path(a.out_dir) / (stem + "_full.png"));
        }
        json classes = json::array();
        for (const sarkit::ClassSegmentSummary& c : res.classes)
            classes.push_back({{"class", c.class_name},
                               {"total", c.total},
                               {"success", c.success},
                               {"fraction", c.fraction},
                               {"success_percent", c.success_percent()}});
        json failures = json::array();
        for (const sarkit::SegmentOutcome& item : res.items)
            if (!item.error.empty())
                failures.push_back({{"image", item.entry.image.string()},
                                    {"error", item.error}});
        const json report = {{"average_success_percent", res.average_success_percent},
                             {"classes", classes},
                             {"failures", failures}};
        const std::string report_path = (fs::path(a.out_dir) / "segment_report.json").string();
        sarkit::write_json_file(report_path, report);
        stamp(report_path, "sarpipe segment", a.sec, {});
        std::cout << "segmented " << res.items.size() << " chips, success "
                  << res.average_success_percent << "%\n";
        return 0;
    }

    if (a.image.empty() || a.object_mask.empty())
        throw sarkit::InvalidSize("segment needs --image and --object-mask (or --manifest)");
    sarkit::SegmentationParams params = a.params;
    if (auto it = fractions.find(a.class_name); !a.class_name.empty() && it != fractions.end())
        params.fraction = it->second;

    const sarkit::GrayRaster chip = sarkit::load_image(a.image);
    const sarkit::BinaryMask object = sarkit::segment_object(chip, params);
    sarkit::save_mask(object, a.object_mask);
    stamp(a.object_mask, "sarpipe segment", a.sec, {});
    if (!a.shadow_mask.empty()) {
        const sarkit::BinaryMask full = sarkit::segment_object_shadow(chip, object, params);
        sarkit::save_mask(full, a.shadow_mask);
        stamp(a.shadow_mask, "sarpipe segment", a.sec, {});
    }
    return 0;
}

// -------------------------------------------------------------- autolabel --

struct AutoLabelArgs {
    std::string image, manifest, output, report;
    int class_id = 0;
    double iou_min = 0.5;
    sarkit::AutoLabelParams params;
    int jobs = 0;
    std::string classes_flag;
    json cfg, sec;
};

int run_autolabel(const AutoLabelArgs& a) {
    if (!a.manifest.empty()) {
        const json m = sarkit::read_json_file(a.manifest);
        const std::vector<sarkit::ChipEntry> chips = manifest_chips(m, a.manifest);

        std::map<std::string, int> class_ids;
        const std::vector<std::string> names = class_table(a.cfg, a.classes_flag);
        for (std::size_t i = 0; i < names.size(); ++i)
            class_ids[names[i]] = static_cast<int>(i);

        std::map<std::string, sarkit::LabeledBox> references;
        if (m.contains("references"))
            for (const auto& [path, b] : m.at("references").items()) {
                sarkit::LabeledBox box;
                box.class_id = get_or(b, "class", 0);
                box.x = b.at("x").get<int>();
                box.y = b.at("y").get<int>();
                box.w = b.at("w").get<int>();
                box.h = b.at("h").get<int>();
                references[path] = box;
            }

        const sarkit::BatchAutoLabelResult res = sarkit::batch_autolabel(
            chips, a.params, class_ids, references, a.iou_min, a.jobs);

        if (!a.output.empty()) {
            std::vector<sarkit::LabelRecord> rows;
            for (const sarkit::AutoLabelItem& item : res.items)
                if (item.box)
                    rows.push_back({item.entry.image.string(), *item.box});
            sarkit::write_labels_jsonl(a.output, rows);
            stamp(a.output, "sarpipe autolabel", a.sec, {});
        }
        json classes = json::array();
        for (const sarkit::ClassLabelSummary& c : res.classes)
            classes.push_back({{"class", c.class_name},
                               {"total", c.total},
                               {"failed", c.failed},
                               {"error_rate_percent", c.error_rate_percent()}});
        const json report = {{"average_error_rate_percent", res.average_error_rate_percent},
                             {"classes", classes}};
        if (!a.report.empty()) {
            sarkit::write_json_file(a.report, report);
            stamp(a.report, "sarpipe autolabel", a.sec, {});
        }
        std::cout << report.dump(2) << "\n";
        return 0;
    }

    if (a.image.empty())
        throw sarkit::InvalidSize("autolabel needs --image or --manifest");
    const sarkit::GrayRaster chip = sarkit::load_image(a.image);
    const sarkit::LabeledBox box = sarkit::auto_label(chip, a.class_id, a.params);
    const json row = {{"image", a.image}, {"class", box.class_id}, {"x", box.x},
                      {"y", box.y},      {"w", box.w},             {"h", box.h}};
    if (!a.output.empty()) {
        sarkit::write_labels_jsonl(a.output, {{a.image, box}});
        stamp(a.output, "sarpipe autolabel", a.sec, {});
    }
    std::cout << row.dump() << "\n";
    return 0;
}

// ------------------------------------------------------------------ synth --

struct SynthArgs {
    std::string background, chips, plan_in, out_image, out_labels, out_plan, exclusion;
    std::string scene_id = "scene";
    std::uint64_t seed = 42;
    int max_attempts = 1000;
    json sec;
};

int run_synth(const SynthArgs& a) {
    const sarkit::GrayRaster background = sarkit::load_image(a.background);
    const json m = sarkit::read_json_file(a.chips);

    std::map<std::string, sarkit::ChipAsset> assets;
    if (!m.contains("chips") || !m.at("chips").is_array())
        throw sarkit::ParseError(a.chips + ": manifest needs a 'chips' array");
    for (const json& c : m.at("chips")) {
        sarkit::ChipAsset asset;
        asset.image = sarkit::load_image(c.at("image").get<std::string>());
        asset.mask = sarkit::load_mask(c.at("mask").get<std::string>());
        const json& lb = c.at("label");
        asset.label.class_id = get_or(lb, "class", 0);
        asset.label.x = lb.at("x").get<int>();
        asset.label.y = lb.at("y").get<int>();
        asset.label.w = lb.at("w").get<int>();
        asset.label.h = lb.at("h").get<int>();
        assets[c.at("id").get<std::string>()] = std::move(asset);
    }
    if (assets.empty())
        throw sarkit::InvalidSize(a.chips + ": no chips in manifest");

    sarkit::PlacementPlan plan;
    if (!a.plan_in.empty()) {
        plan = sarkit::plan_from_json(sarkit::read_json_file(a.plan_in));
    } else {
        if (!m.contains("requests"))
            throw sarkit::ParseError(a.chips + ": planning needs a 'requests' array");
        std::vector<sarkit::PlacementRequest> requests;
        for (const json& r : m.at("requests")) {
            sarkit::PlacementRequest req;
            req.class_id = r.at("class").get<int>();
            req.count = r.at("count").get<int>();
            if (r.contains("chips"))
                for (const json& id : r.at("chips"))
                    req.chip_ids.push_back(id.get<std::string>());
            requests.push_back(std::move(req));
        }
        const sarkit::ChipAsset& first = assets.begin()->second;
        for (const auto& [id, asset] : assets)
            if (asset.image.width != first.image.width ||
                asset.image.height != first.image.height)
                throw sarkit::InvalidSize("planning requires chips of identical size");

        sarkit::BinaryMask exclusion(background.width, background.height);
        if (!a.exclusion.empty())
            exclusion = sarkit::load_mask(a.exclusion);
        plan = sarkit::plan_placements(background.width, background.height, exclusion,
                                       requests, first.image.width, first.image.height,
                                       a.seed, a.max_attempts, a.scene_id);
    }

    const sarkit::SynthesizedScene out = sarkit::synthesize_scene(background, plan, assets);
    sarkit::save_image(out.scene, a.out_image);
    stamp(a.out_image, "sarpipe synth", a.sec, {plan.rng_seed});
    if (!a.out_labels.empty()) {
        std::vector<sarkit::LabelRecord> rows;
        for (const sarkit::LabeledBox& box : out.labels)
            rows.push_back({plan.scene_id, box});
        sarkit::write_labels_jsonl(a.out_labels, rows);
        stamp(a.out_labels, "sarpipe synth", a.sec, {plan.rng_seed});
    }
    if (!a.out_plan.empty()) {
        sarkit::write_json_file(a.out_plan, sarkit::plan_to_json(plan));
        stamp(a.out_plan, "sarpipe synth", a.sec, {plan.rng_seed});
    }
    std::cout << "synthesized " << plan.entries.size() << " targets into " << a.out_image
              << "\n";
    return 0;
}

// ------------------------------------------------------------------ slice --

struct SliceArgs {
    std::string image, labels, out_dir, scene_id;
    int size = 1024;
    int stride = 512;
    bool no_images = false;
    json sec;
};

int run_slice(const SliceArgs& a) {
    const sarkit::GrayRaster scene = sarkit::load_image(a.image);
    std::vector<sarkit::LabeledBox> boxes;
    std::string scene_id = a.scene_id;
    if (!a.labels.empty()) {
        for (const sarkit::LabelRecord& row : sarkit::read_labels_jsonl(a.labels)) {
            if (!a.scene_id.empty() && row.image != a.scene_id)
                continue;
            if (scene_id.empty())
                scene_id = row.image;
            boxes.push_back(row.box);
        }
    }
    if (scene_id.empty())
        scene_id = fs::path(a.image).stem().string();

    const std::vector<sarkit::SliceRecord> records =
        sarkit::slide(scene, scene_id, boxes, a.size, a.stride);
    fs::create_directories(a.out_dir);
    for (const sarkit::SliceRecord& rec : records) {
        const std::string stem =
            scene_id + "_" + std::to_string(rec.i) + "_" + std::to_string(rec.j);
        if (!a.no_images)
            sarkit::save_image(sarkit::cut_slice(scene, rec),
                               fs::path(a.out_dir) / (stem + ".png"));
        sarkit::write_normalized_labels((fs::path(a.out_dir) / (stem + ".txt")).string(),
                                        rec.labels, rec.w, rec.h);
    }
    const std::string index_path = (fs::path(a.out_dir) / "slice_index.json").string();
    sarkit::write_json_file(index_path,
                            sarkit::slice_index_to_json(records, a.size, a.stride));
    stamp(index_path, "sarpipe slice", a.sec, {});
    std::cout << "kept " << records.size() << " slices\n";
    return 0;
}

// ------------------------------------------------------------------ noise --

struct NoiseArgs {
    std::vector<std::string> inputs;
    std::string input_dir, output, out_dir;
    double fraction = 0.2;
    std::uint64_t seed = 42;
    int jobs = 0;
    json sec;
};

int run_noise(const NoiseArgs& a) {
    std::vector<std::string> files = a.inputs;
    if (!a.input_dir.empty()) {
        for (const fs::directory_entry& e : fs::directory_iterator(a.input_dir)) {
            const std::string ext = e.path().extension().string();
            if (ext == ".png" || ext == ".pgm")
                files.push_back(e.path().string());
        }
        std::sort(files.begin(), files.end());
    }
    if (files.empty())
        throw sarkit::InvalidSize("noise needs --input files or --input-dir");
    if (files.size() == 1 && !a.output.empty()) {
        const sarkit::GrayRaster img = sarkit::load_image(files[0]);
        sarkit::save_image(sarkit::inject_noise(img, a.fraction, a.seed), a.output);
        stamp(a.output, "sarpipe noise", a.sec, {a.seed});
        return 0;
    }
    if (a.out_dir.empty())
        throw sarkit::InvalidSize("multiple noise inputs need --out-dir");
    fs::create_directories(a.out_dir);

    std::vector<std::string> outputs(files.size());
    sarkit::parallel_indices(files.size(), a.jobs, [&](std::size_t i) {
        // per-file seed mixes the base seed with the file name so results do
        // not depend on traversal order
        const std::uint64_t file_seed =
            a.seed ^ sarkit::fnv1a64(fs::path(files[i]).filename().string());
        const sarkit::GrayRaster img = sarkit::load_image(files[i]);
        const std::string out =
            (fs::path(a.out_dir) / fs::path(files[i]).filename()).string();
        sarkit::save_image(sarkit::inject_noise(img, a.fraction, file_seed), out);
        outputs[i] = out;
    });
    for (const std::string& out : outputs)
        stamp(out, "sarpipe noise", a.sec, {a.seed});
    std::cout << "corrupted " << files.size() << " images\n";
    return 0;
}

// -------------------------------------------------------------------- nms --

struct NmsArgs {
    std::string input, output;
    double iou = 0.7;
    bool per_class = false;
    bool keep_local = false;
    json sec;
};

int run_nms(const NmsArgs& a) {
    std::vector<sarkit::DetectionRecord> rows = sarkit::read_detection_records(a.input);
    // group per scene, map slice-local boxes into the scene frame, suppress
    std::map<std::string, std::vector<sarkit::Detection>> by_scene;
    for (sarkit::DetectionRecord& row : rows) {
        std::string key = row.scene;
        if (row.det.source && !a.keep_local) {
            key = row.det.source->scene_id;
            row.det = sarkit::map_to_scene(row.det);
        }
        by_scene[key].push_back(std::move(row.det));
    }
    std::vector<sarkit::DetectionRecord> kept;
    for (auto& [scene, dets] : by_scene)
        for (sarkit::Detection& d : sarkit::nms(std::move(dets), a.iou, a.per_class))
            kept.push_back({scene, std::move(d)});
    sarkit::write_detection_records(a.output, kept);
    stamp(a.output, "sarpipe nms", a.sec, {});
    std::cout << "kept " << kept.size() << " of " << rows.size() << " detections\n";
    return 0;
}

// ------------------------------------------------------------------- eval --

struct EvalArgs {
    std::string detections, truth, report_path, classes_flag;
    double iou_min = 0.5;
    long long background_units = 0;
    double min_acc = -1.0;
    bool table = true;
    json cfg, sec;
};

int run_eval(const EvalArgs& a) {
    const std::vector<std::string> names = class_table(a.cfg, a.classes_flag);
    if (names.empty())
        throw sarkit::InvalidSize("eval needs a class table (--classes or config)");
    const int num_classes = static_cast<int>(names.size());

    std::map<std::string, std::vector<sarkit::LabeledBox>> truth;
    for (const sarkit::LabelRecord& row : sarkit::read_labels_jsonl(a.truth))
        truth[row.image].push_back(row.box);

    std::map<std::string, std::vector<sarkit::Detection>> dets;
    for (sarkit::DetectionRecord& row : sarkit::read_detection_records(a.detections)) {
        std::string key = row.scene;
        if (row.det.source) {
            key = row.det.source->scene_id;
            row.det = sarkit::map_to_scene(row.det);
        }
        dets[key].push_back(std::move(row.det));
    }

    sarkit::MatchCounts merged;
    merged.num_classes = num_classes;
    merged.matrix.assign(num_classes, std::vector<long long>(num_classes, 0));
    merged.missed.assign(num_classes, 0);

    std::vector<std::string> scenes;
    for (const auto& [scene, boxes] : truth)
        scenes.push_back(scene);
    for (const auto& [scene, d] : dets)
        if (!truth.count(scene))
            scenes.push_back(scene);
    for (const std::string& scene : scenes) {
        static const std::vector<sarkit::LabeledBox> no_boxes;
        static const std::vector<sarkit::Detection> no_dets;
        const auto* gt = truth.count(scene) ? &truth.at(scene) : &no_boxes;
        const auto* dd = dets.count(scene) ? &dets.at(scene) : &no_dets;
        const sarkit::MatchCounts counts =
            sarkit::match_detections(*gt, *dd, num_classes, a.iou_min);
        for (int c = 0; c < num_classes; ++c) {
            merged.missed[c] += counts.missed[c];
            for (int p = 0; p < num_classes; ++p)
                merged.matrix[c][p] += counts.matrix[c][p];
        }
        merged.false_positives += counts.false_positives;
    }

    const sarkit::EvalReport rep = sarkit::metrics(merged, a.background_units, names);
    if (a.table)
        std::cout << sarkit::confusion_to_table(rep);

    json jclasses = json::array();
    for (std::size_t c = 0; c < names.size(); ++c) {
        json row = {{"class", names[c]},
                    {"ground_truth", rep.gt_total[c]},
                    {"matrix", rep.matrix[c]},
                    {"missed", rep.missed[c]}};
        if (rep.gt_total[c] > 0) {
            row["acc_percent"] = rep.acc_percent[c];
            row["fnr_percent"] = rep.fnr_percent[c];
        }
        jclasses.push_back(std::move(row));
    }
    json jrep = {{"classes", jclasses},
                 {"average_acc_percent", rep.average_acc},
                 {"average_fnr_percent", rep.average_fnr},
                 {"overall_acc_percent", rep.overall_acc},
                 {"overall_fnr_percent", rep.overall_fnr},
                 {"true_positives", rep.true_positives},
                 {"false_negatives", rep.false_negatives},
                 {"false_positives", rep.false_positives},
                 {"true_negatives", rep.true_negatives},
                 {"background_units", rep.background_units},
                 {"fpr_percent", rep.fpr_percent}};
    if (!a.report_path.empty()) {
        sarkit::write_json_file(a.report_path, jrep);
        stamp(a.report_path, "sarpipe eval", a.sec, {});
    }
    if (a.min_acc >= 0.0 && !(rep.average_acc >= a.min_acc)) {
        emit_error("AcceptanceGate", "average ACC " + std::to_string(rep.average_acc) +
                                         "% below gate " + std::to_string(a.min_acc) + "%");
        return kExitGate;
    }
    return 0;
}

// -------------------------------------------------------------------- fid --

struct FidArgs {
    std::string a, b, output;
    int d_side = 8;
    json sec;
};

sarkit::FeatureSet load_features(const std::string& path, int d_side) {
    if (fs::is_directory(path)) {
        std::vector<std::string> files;
        for (const fs::directory_entry& e : fs::directory_iterator(path)) {
            const std::string ext = e.path().extension().string();
            if (ext == ".png" || ext == ".pgm")
                files.push_back(e.path().string());
        }
        std::sort(files.begin(), files.end());
        if (files.size() < 2)
            throw sarkit::TooFewSamples(path + ": need at least two images");
        sarkit::FeatureSet fs_out;
        fs_out.d = static_cast<std::size_t>(d_side) * d_side;
        for (const std::string& f : files) {
            const std::vector<double> feat =
                sarkit::baseline_features(sarkit::load_image(f), d_side);
            fs_out.values.insert(fs_out.values.end(), feat.begin(), feat.end());
            ++fs_out.n;
        }
        return fs_out;
    }
    if (fs::path(path).extension() == ".csv")
        return sarkit::read_features_csv(path);
    return sarkit::read_features_raw(path);
}

int run_fid(const FidArgs& a) {
    const sarkit::FeatureSet fa = load_features(a.a, a.d_side);
    const sarkit::FeatureSet fb = load_features(a.b, a.d_side);
    const double value = sarkit::fid(fa, fb);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    std::cout << buf << "\n";
    if (!a.output.empty()) {
        sarkit::write_json_file(a.output, {{"fid", value},
                                           {"n_a", fa.n},
                                           {"n_b", fb.n},
                                           {"d", fa.d}});
        stamp(a.output, "sarpipe fid", a.sec, {});
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    json cfg;
    try {
        cfg = load_config(argc, argv);
    } catch (const sarkit::Error& e) {
        emit_error(error_type(e), e.what());
        return kExitData;
    }

    CLI::App app{"SAR large-scene dataset construction and scoring pipeline"};
    app.require_subcommand(1);
    app.fallthrough();  // accept global flags like --config after the subcommand too
    std::string config_path;
    app.add_option("--config", config_path, "configuration JSON (or $SARKIT_CONFIG)");

    SegmentArgs seg;
    seg.sec = section(cfg, "segment");
    seg.params = segment_params(seg.sec);
    seg.jobs = get_or(cfg, "jobs", 0);
    CLI::App* c_seg = app.add_subcommand("segment", "segment target chips into masks");
    c_seg->add_option("--image", seg.image, "single chip image");
    c_seg->add_option("--class", seg.class_name, "class name for per-class thresholds");
    c_seg->add_option("--object-mask", seg.object_mask, "output object mask");
    c_seg->add_option("--shadow-mask", seg.shadow_mask, "output object+shadow mask");
    c_seg->add_option("--manifest", seg.manifest, "batch manifest JSON");
    c_seg->add_option("--out-dir", seg.out_dir, "batch output directory");
    c_seg->add_option("--fraction", seg.params.fraction, "percentile fraction");
    c_seg->add_option("--shadow-value", seg.params.shadow_value, "darkening value");
    c_seg->add_option("--blur-side", seg.params.blur_side, "blur kernel side (0 = adaptive)");
    c_seg->add_option("--blur-sigma", seg.params.blur_sigma, "blur sigma (<= 0 = derived)");
    c_seg->add_option("--se-side", seg.params.se_side, "structuring element side");
    c_seg->add_option("--jobs", seg.jobs, "batch parallelism (0 = all cores)");

    AutoLabelArgs al;
    al.cfg = cfg;
    al.sec = section(cfg, "autolabel");
    al.params.white_pixel_threshold =
        get_or(al.sec, "white_threshold", al.params.white_pixel_threshold);
    al.params.expand_fraction = get_or(al.sec, "expand", al.params.expand_fraction);
    al.params.binarize = segment_params(section(cfg, "segment"));
    al.jobs = get_or(cfg, "jobs", 0);
    CLI::App* c_al = app.add_subcommand("autolabel", "derive bounding boxes for chips");
    c_al->add_option("--image", al.image, "single chip image");
    c_al->add_option("--class-id", al.class_id, "class id for the single chip");
    c_al->add_option("--manifest", al.manifest, "batch manifest JSON");
    c_al->add_option("--classes", al.classes_flag, "comma-separated class table");
    c_al->add_option("--output", al.output, "labels JSONL output");
    c_al->add_option("--report", al.report, "batch report JSON");
    c_al->add_option("--white-threshold", al.params.white_pixel_threshold,
                     "per-line stop threshold");
    c_al->add_option("--expand", al.params.expand_fraction, "concentric expansion fraction");
    c_al->add_option("--fraction", al.params.binarize.fraction, "binarization fraction");
    c_al->add_option("--iou-min", al.iou_min, "reference IoU below which a label fails");
    c_al->add_option("--jobs", al.jobs, "batch parallelism (0 = all cores)");

    SynthArgs sy;
    sy.sec = section(cfg, "synth");
    sy.seed = get_or(cfg, "seed", sy.seed);
    sy.seed = get_or(sy.sec, "seed", sy.seed);
    sy.max_attempts = get_or(sy.sec, "max_attempts", sy.max_attempts);
    CLI::App* c_sy = app.add_subcommand("synth", "composite chips into a large scene");
    c_sy->add_option("--background", sy.background, "background scene image")->required();
    c_sy->add_option("--chips", sy.chips, "chip asset manifest JSON")->required();
    c_sy->add_option("--plan", sy.plan_in, "existing placement plan JSON");
    c_sy->add_option("--exclusion", sy.exclusion, "mask of forbidden placement pixels");
    c_sy->add_option("--scene-id", sy.scene_id, "scene identifier");
    c_sy->add_option("--seed", sy.seed, "placement RNG seed");
    c_sy->add_option("--max-attempts", sy.max_attempts, "placement attempts per chip");
    c_sy->add_option("--out-image", sy.out_image, "output scene image")->required();
    c_sy->add_option("--out-labels", sy.out_labels, "output labels JSONL");
    c_sy->add_option("--out-plan", sy.out_plan, "output placement plan JSON");

    SliceArgs sl;
    sl.sec = section(cfg, "slice");
    sl.size = get_or(sl.sec, "size", sl.size);
    sl.stride = get_or(sl.sec, "stride", sl.stride);
    CLI::App* c_sl = app.add_subcommand("slice", "tile a labeled scene into windows");
    c_sl->add_option("--image", sl.image, "scene image")->required();
    c_sl->add_option("--labels", sl.labels, "scene labels JSONL");
    c_sl->add_option("--scene-id", sl.scene_id, "restrict to one scene id");
    c_sl->add_option("--size", sl.size, "window size");
    c_sl->add_option("--stride", sl.stride, "window stride");
    c_sl->add_option("--out-dir", sl.out_dir, "output directory")->required();
    c_sl->add_flag("--no-images", sl.no_images, "write only the slice index");

    NoiseArgs no;
    no.sec = section(cfg, "noise");
    no.fraction = get_or(no.sec, "fraction", no.fraction);
    no.seed = get_or(cfg, "seed", no.seed);
    no.seed = get_or(no.sec, "seed", no.seed);
    no.jobs = get_or(cfg, "jobs", 0);
    CLI::App* c_no = app.add_subcommand("noise", "replace a fraction of pixels with noise");
    c_no->add_option("--input", no.inputs, "input image (repeatable)");
    c_no->add_option("--input-dir", no.input_dir, "directory of input images");
    c_no->add_option("--output", no.output, "output image (single input)");
    c_no->add_option("--out-dir", no.out_dir, "output directory");
    c_no->add_option("--fraction", no.fraction, "fraction of pixels to replace");
    c_no->add_option("--seed", no.seed, "noise RNG seed");
    c_no->add_option("--jobs", no.jobs, "parallelism (0 = all cores)");

    NmsArgs nm;
    nm.sec = section(cfg, "nms");
    nm.iou = get_or(nm.sec, "iou", nm.iou);
    nm.per_class = get_or(nm.sec, "per_class", nm.per_class);
    CLI::App* c_nm = app.add_subcommand("nms", "map detections to scenes and suppress");
    c_nm->add_option("--input", nm.input, "detections JSONL")->required();
    c_nm->add_option("--output", nm.output, "surviving detections JSONL")->required();
    c_nm->add_option("--iou", nm.iou, "suppression IoU threshold (strict)");
    c_nm->add_flag("--per-class", nm.per_class, "suppress only within the same class");
    c_nm->add_flag("--keep-local", nm.keep_local, "skip slice-to-scene coordinate mapping");

    EvalArgs ev;
    ev.cfg = cfg;
    ev.sec = section(cfg, "eval");
    ev.iou_min = get_or(ev.sec, "iou_min", ev.iou_min);
    CLI::App* c_ev = app.add_subcommand("eval", "score detections against ground truth");
    c_ev->add_option("--detections", ev.detections, "detections JSONL")->required();
    c_ev->add_option("--truth", ev.truth, "ground-truth labels JSONL")->required();
    c_ev->add_option("--classes", ev.classes_flag, "comma-separated class table");
    c_ev->add_option("--iou-min", ev.iou_min, "matching IoU threshold");
    c_ev->add_option("--background-units", ev.background_units,
                     "target-free units for the FPR denominator");
    c_ev->add_option("--min-acc", ev.min_acc, "fail (exit 3) below this average ACC");
    c_ev->add_option("--report", ev.report_path, "report JSON output");
    c_ev->add_flag("!--no-table", ev.table, "suppress the text table");

    FidArgs fi;
    fi.sec = section(cfg, "fid");
    fi.d_side = get_or(fi.sec, "d_side", fi.d_side);
    CLI::App* c_fi = app.add_subcommand("fid", "Frechet distance between feature sets");
    c_fi->add_option("a", fi.a, "feature file or image directory")->required();
    c_fi->add_option("b", fi.b, "feature file or image directory")->required();
    c_fi->add_option("--d-side", fi.d_side, "block grid side for image directories");
    c_fi->add_option("--output", fi.output, "score JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        emit_error("Usage", e.what());
        return kExitUsage;
    }

    try {
        if (c_seg->parsed())
            return run_segment(seg);
        if (c_al->parsed())
            return run_autolabel(al);
        if (c_sy->parsed())
            return run_synth(sy);
        if (c_sl->parsed())
            return run_slice(sl);
        if (c_no->parsed())
            return run_noise(no);
        if (c_nm->parsed())
            return run_nms(nm);
        if (c_ev->parsed())
            return run_eval(ev);
        if (c_fi->parsed())
            return run_fid(fi);
    } catch (const sarkit::Error& e) {
        emit_error(error_type(e), e.what());
        return kExitData;
    } catch (const std::exception& e) {
        emit_error(error_type(e), e.what());
        return kExitData;
    }
    return 0;
}
