#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "reperio/augment.hpp"
#include "reperio/neural.hpp"
#include "reperio/train.hpp"

namespace reperio {

// INI-style run configuration with a closed schema: unknown sections or keys
// are rejected so typos cannot silently fall back to defaults.
struct RunConfig {
    ModelConfig model;
    TrainHyper hyper;
    std::string dataset_path;
    std::string out_path;
    std::string checkpoint_path;
    std::string preds_path;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

inline const std::map<std::string, std::set<std::string>>& config_schema() {
    static const std::map<std::string, std::set<std::string>> schema = {
        {"model",
         {"patch", "embed_dim", "swin_layers", "swin_heads", "window", "node_dim", "rgcn_hidden",
          "gt_hidden", "gt_heads", "att_dim", "past_window", "future_window", "delta_min",
          "delta_max", "relu_after_rgcn", "check_finite", "blur_sigma"}},
        {"train", {"lr", "steps", "batch", "flip_prob", "seed", "wall_times"}},
        {"tcm", {"p", "r_min", "r_max"}},
        {"paths", {"dataset", "out", "checkpoint", "preds"}},
    };
    return schema;
}

}  // namespace detail

inline RunConfig parse_run_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path.string());
    RunConfig cfg;
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = path.string() + ":" + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw std::runtime_error("config: bad section at " + where);
            section = detail::trim(line.substr(1, line.size() - 2));
            if (!detail::config_schema().count(section))
                throw std::runtime_error("config: unknown section [" + section + "] at " + where);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::runtime_error("config: expected key=value at " + where);
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty()) throw std::runtime_error("config: key outside section at " + where);
        if (!detail::config_schema().at(section).count(key))
            throw std::runtime_error("config: unknown key '" + key + "' in [" + section + "] at " +
                                     where);

        const auto as_int = [&] { return std::stoi(value); };
        const auto as_double = [&] { return std::stod(value); };
        const auto as_bool = [&] {
            if (value == "1" || value == "true") return true;
            if (value == "0" || value == "false") return false;
            throw std::runtime_error("config: boolean expected at " + where);
        };

        if (section == "model") {
            if (key == "patch") cfg.model.patch = as_int();
            else if (key == "embed_dim") cfg.model.embed_dim = as_int();
            else if (key == "swin_layers") cfg.model.swin_layers = as_int();
            else if (key == "swin_heads") cfg.model.swin_heads = as_int();
            else if (key == "window") cfg.model.window = as_int();
            else if (key == "node_dim") cfg.model.node_dim = as_int();
            else if (key == "rgcn_hidden") cfg.model.rgcn_hidden = as_int();
            else if (key == "gt_hidden") cfg.model.gt_hidden = as_int();
            else if (key == "gt_heads") cfg.model.gt_heads = as_int();
            else if (key == "att_dim") cfg.model.att_dim = as_int();
            else if (key == "past_window") cfg.model.past_window = as_int();
            else if (key == "future_window") cfg.model.future_window = as_int();
            else if (key == "delta_min") cfg.model.delta_min = as_int();
            else if (key == "delta_max") cfg.model.delta_max = as_int();
            else if (key == "relu_after_rgcn") cfg.model.relu_after_rgcn = as_bool();
            else if (key == "check_finite") cfg.model.check_finite = as_bool();
            else if (key == "blur_sigma") cfg.model.blur_sigma = as_double();
        } else if (section == "train") {
            if (key == "lr") cfg.hyper.lr = as_double();
            else if (key == "steps") cfg.hyper.steps = as_int();
            else if (key == "batch") cfg.hyper.batch = as_int();
            else if (key == "flip_prob") cfg.hyper.flip_prob = as_double();
            else if (key == "seed") {
                cfg.hyper.seed = std::stoull(value);
                cfg.model.seed = cfg.hyper.seed;
            } else if (key == "wall_times") cfg.hyper.wall_times = as_bool();
        } else if (section == "tcm") {
            if (key == "p") cfg.hyper.tcm.p = as_double();
            else if (key == "r_min") cfg.hyper.tcm.r_min = as_double();
            else if (key == "r_max") cfg.hyper.tcm.r_max = as_double();
        } else if (section == "paths") {
            if (key == "dataset") cfg.dataset_path = value;
            else if (key == "out") cfg.out_path = value;
            else if (key == "checkpoint") cfg.checkpoint_path = value;
            else if (key == "preds") cfg.preds_path = value;
        }
    }
    return cfg;
}

}  // namespace reperio
