#include "sarkit/records.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sarkit/errors.hpp"

namespace sarkit {

namespace {

nlohmann::json box_fields(const LabeledBox& box) {
    return {{"class", box.class_id}, {"x", box.x}, {"y", box.y}, {"w", box.w}, {"h", box.h}};
}

LabeledBox box_from_fields(const nlohmann::json& j) {
    LabeledBox box;
    box.class_id = j.at("class").get<int>();
    box.x = j.at("x").get<int>();
    box.y = j.at("y").get<int>();
    box.w = j.at("w").get<int>();
    box.h = j.at("h").get<int>();
    return box;
}

nlohmann::json parse_line(const std::string& line, const std::string& path, std::size_t no) {
    try {
        return nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ":" + std::to_string(no) + ": " + e.what());
    }
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw IoError("read failed on " + path);
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out.flush())
        throw IoError("write failed on " + path);
}

nlohmann::json read_json_file(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

void write_labels_jsonl(const std::string& path, const std::vector<LabelRecord>& rows) {
    std::string out;
    for (const LabelRecord& row : rows) {
        nlohmann::json j = box_fields(row.box);
        j["image"] = row.image;
        out += j.dump() + "\n";
    }
    write_text_file(path, out);
}

std::vector<LabelRecord> read_labels_jsonl(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::vector<LabelRecord> rows;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty())
            continue;
        const nlohmann::json j = parse_line(line, path, no);
        try {
            LabelRecord row;
            row.image = j.at("image").get<std::string>();
            row.box = box_from_fields(j);
            rows.push_back(std::move(row));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path + ":" + std::to_string(no) + ": " + e.what());
        }
    }
    return rows;
}

void write_detections_jsonl(const std::string& path, const std::vector<Detection>& dets,
                            const std::string& scene_id) {
    std::string out;
    for (const Detection& det : dets) {
        nlohmann::json j = box_fields(det.box);
        j["conf"] = det.confidence();
        if (det.source) {
            j["slice"] = {{"scene", det.source->scene_id},
                          {"i", det.source->i},
                          {"j", det.source->j},
                          {"stride", det.source->stride}};
        } else if (!scene_id.empty()) {
            j["scene"] = scene_id;
        }
        out += j.dump() + "\n";
    }
    write_text_file(path, out);
}

std::vector<DetectionRecord> read_detection_records(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::vector<DetectionRecord> rows;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty())
            continue;
        const nlohmann::json j = parse_line(line, path, no);
        try {
            DetectionRecord row;
            row.det.box = box_from_fields(j);
            row.det.box.confidence = j.at("conf").get<double>();
            if (j.contains("slice")) {
                const nlohmann::json& s = j.at("slice");
                SliceRef ref;
                ref.scene_id = s.at("scene").get<std::string>();
                ref.i = s.at("i").get<int>();
                ref.j = s.at("j").get<int>();
                ref.stride = s.at("stride").get<int>();
                row.scene = ref.scene_id;
                row.det.source = std::move(ref);
            } else if (j.contains("scene")) {
                row.scene = j.at("scene").get<std::string>();
            }
            rows.push_back(std::move(row));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path + ":" + std::to_string(no) + ": " + e.what());
        }
    }
    return rows;
}

std::vector<Detection> read_detections_jsonl(const std::string& path) {
    std::vector<Detection> dets;
    for (DetectionRecord& row : read_detection_records(path))
        dets.push_back(std::move(row.det));
    return dets;
}

void write_detection_records(const std::string& path,
                             const std::vector<DetectionRecord>& rows) {
    std::string out;
    for (const DetectionRecord& row : rows) {
        nlohmann::json j = box_fields(row.det.box);
        j["conf"] = row.det.confidence();
        if (row.det.source) {
            j["slice"] = {{"scene", row.det.source->scene_id},
                          {"i", row.det.source->i},
                          {"j", row.det.source->j},
                          {"stride", row.det.source->stride}};
        } else if (!row.scene.empty()) {
            j["scene"] = row.scene;
        }
        out += j.dump() + "\n";
    }
    write_text_file(path, out);
}

std::string to_normalized_line(const LabeledBox& box, int image_w, int image_h) {
    if (image_w <= 0 || image_h <= 0)
        throw InvalidSize("image dimensions must be positive");
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d %.6f %.6f %.6f %.6f", box.class_id,
                  (box.x + box.w / 2.0) / image_w, (box.y + box.h / 2.0) / image_h,
                  static_cast<double>(box.w) / image_w, static_cast<double>(box.h) / image_h);
    return buf;
}

void write_normalized_labels(const std::string& path, const std::vector<LabeledBox>& boxes,
                             int image_w, int image_h) {
    std::string out;
    for (const LabeledBox& box : boxes)
        out += to_normalized_line(box, image_w, image_h) + "\n";
    write_text_file(path, out);
}

std::vector<LabeledBox> read_normalized_labels(const std::string& path, int image_w,
                                               int image_h) {
    std::istringstream in(read_text_file(path));
    std::vector<LabeledBox> boxes;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty())
            continue;
        std::istringstream ls(line);
        LabeledBox box;
        double cx, cy, w, h;
        if (!(ls >> box.class_id >> cx >> cy >> w >> h))
            throw ParseError(path + ":" + std::to_string(no) + ": expected 5 fields");
        box.w = static_cast<int>(std::lround(w * image_w));
        box.h = static_cast<int>(std::lround(h * image_h));
        box.x = static_cast<int>(std::lround(cx * image_w - w * image_w / 2.0));
        box.y = static_cast<int>(std::lround(cy * image_h - h * image_h / 2.0));
        boxes.push_back(box);
    }
    return boxes;
}

nlohmann::json plan_to_json(const PlacementPlan& plan) {
    nlohmann::json entries = nlohmann::json::array();
    for (const PlacementEntry& e : plan.entries)
        entries.push_back({{"chip", e.chip_id},
                           {"class", e.class_id},
                           {"x", e.x},
                           {"y", e.y},
                           {"w", e.chip_w},
                           {"h", e.chip_h}});
    return {{"scene_id", plan.scene_id}, {"seed", plan.rng_seed}, {"entries", entries}};
}

PlacementPlan plan_from_json(const nlohmann::json& j) {
    try {
        PlacementPlan plan;
        plan.scene_id = j.at("scene_id").get<std::string>();
        plan.rng_seed = j.at("seed").get<std::uint64_t>();
        for (const nlohmann::json& e : j.at("entries")) {
            PlacementEntry entry;
            entry.chip_id = e.at("chip").get<std::string>();
            entry.class_id = e.at("class").get<int>();
            entry.x = e.at("x").get<int>();
            entry.y = e.at("y").get<int>();
            entry.chip_w = e.at("w").get<int>();
            entry.chip_h = e.at("h").get<int>();
            plan.entries.push_back(std::move(entry));
        }
        return plan;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("placement plan: ") + e.what());
    }
}

nlohmann::json slice_index_to_json(const std::vector<SliceRecord>& records, int size,
                                   int stride) {
    nlohmann::json slices = nlohmann::json::array();
    for (const SliceRecord& rec : records) {
        nlohmann::json labels = nlohmann::json::array();
        for (const LabeledBox& box : rec.labels)
            labels.push_back(box_fields(box));
        slices.push_back({{"scene", rec.scene_id},
                          {"i", rec.i},
                          {"j", rec.j},
                          {"x", rec.x},
                          {"y", rec.y},
                          {"w", rec.w},
                          {"h", rec.h},
                          {"labels", labels}});
    }
    return {{"size", size}, {"stride", stride}, {"slices", slices}};
}

std::vector<SliceRecord> slice_index_from_json(const nlohmann::json& j) {
    try {
        std::vector<SliceRecord> records;
        for (const nlohmann::json& s : j.at("slices")) {
            SliceRecord rec;
            rec.scene_id = s.at("scene").get<std::string>();
            rec.i = s.at("i").get<int>();
            rec.j = s.at("j").get<int>();
            rec.x = s.at("x").get<int>();
            rec.y = s.at("y").get<int>();
            rec.w = s.at("w").get<int>();
            rec.h = s.at("h").get<int>();
            for (const nlohmann::json& b : s.at("labels"))
                rec.labels.push_back(box_from_fields(b));
            records.push_back(std::move(rec));
        }
        return records;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("slice index: ") + e.what());
    }
}

void write_features_csv(const std::string& path, const FeatureSet& fs) {
    fs.validate();
    std::string out;
    char buf[48];
    for (std::size_t r = 0; r < fs.n; ++r) {
        for (std::size_t c = 0; c < fs.d; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", fs.at(r, c));
            if (c)
                out += ',';
            out += buf;
        }
        out += '\n';
    }
    write_text_file(path, out);
}

FeatureSet read_features_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    FeatureSet fs;
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
        ++no;
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string field;
        std::size_t d = 0;
        while (std::getline(ls, field, ',')) {
            try {
                fs.values.push_back(std::stod(field));
            } catch (const std::exception&) {
                throw ParseError(path + ":" + std::to_string(no) + ": bad number '" + field +
                                 "'");
            }
            ++d;
        }
        if (fs.n == 0)
            fs.d = d;
        else if (d != fs.d)
            throw ParseError(path + ":" + std::to_string(no) + ": ragged row");
        ++fs.n;
    }
    fs.validate();
    return fs;
}

void write_features_raw(const std::string& path, const FeatureSet& fs) {
    static_assert(std::endian::native == std::endian::little,
                  "raw feature files assume a little-endian host");
    fs.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(fs.values.data()),
              static_cast<std::streamsize>(fs.values.size() * sizeof(double)));
    if (!out.flush())
        throw IoError("write failed on " + path);
    write_json_file(path + ".json", {{"n", fs.n}, {"d", fs.d}});
}

FeatureSet read_features_raw(const std::string& path) {
    const nlohmann::json side = read_json_file(path + ".json");
    FeatureSet fs;
    try {
        fs.n = side.at("n").get<std::size_t>();
        fs.d = side.at("d").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ".json: " + e.what());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    fs.values.resize(fs.n * fs.d);
    in.read(reinterpret_cast<char*>(fs.values.data()),
            static_cast<std::streamsize>(fs.values.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(fs.values.size() * sizeof(double)))
        throw ParseError(path + ": truncated feature file");
    fs.validate();
    return fs;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

nlohmann::json run_metadata(const std::string& tool, const nlohmann::json& config,
                            const std::vector<std::uint64_t>& seeds) {
    char hash[19];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config.dump())));
    return {{"tool", tool},
            {"version", "1.0.0"},
            {"config_hash", std::string(hash)},
            {"seeds", seeds},
            {"config", config}};
}

}  // namespace sarkit
