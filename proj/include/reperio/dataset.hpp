#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "reperio/clip.hpp"
#include "reperio/signal.hpp"
#include "reperio/synth.hpp"
#include "reperio/tensor.hpp"

namespace reperio {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline std::vector<ManifestRow> read_manifest(const std::filesystem::path& dataset_dir) {
    const auto path = dataset_dir / "manifest.csv";
    std::ifstream is(path);
    if (!is) throw std::runtime_error("dataset: missing manifest: " + path.string());
    std::string line;
    if (!std::getline(is, line) || split_csv_line(line) != std::vector<std::string>{"id", "fps", "hr_bpm", "seed"})
        throw std::runtime_error("dataset: bad manifest header in " + path.string());
    std::vector<ManifestRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw std::runtime_error("dataset: bad manifest row: " + line);
        ManifestRow row;
        row.id = fields[0];
        row.fps = std::stod(fields[1]);
        row.hr_bpm = std::stod(fields[2]);
        row.seed = std::stoull(fields[3]);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Clip load_clip(const std::filesystem::path& dataset_dir, const std::string& id, double fps) {
    const auto path = dataset_dir / "clips" / id / "video.rptf";
    TensorF t = read_tensor(path);
    if (t.shape.size() != 4 || t.shape[3] != 3)
        throw std::runtime_error("dataset: video tensor must be [T,H,W,3]: " + path.string());
    Clip clip;
    clip.T = t.shape[0];
    clip.H = t.shape[1];
    clip.W = t.shape[2];
    clip.fps = fps;
    clip.data = std::move(t.data);
    clip.validate();
    return clip;
}

inline BvpSeries load_bvp(const std::filesystem::path& dataset_dir, const std::string& id,
                          double fps) {
    const auto path = dataset_dir / "clips" / id / "bvp.rptf";
    TensorF t = read_tensor(path);
    if (t.shape.size() != 1)
        throw std::runtime_error("dataset: bvp tensor must be 1-D: " + path.string());
    return BvpSeries(std::move(t.data), fps);
}

}  // namespace reperio
