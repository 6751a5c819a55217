#include "lcv/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lcv {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::istringstream ss(v);
    std::string part;
    while (std::getline(ss, part, ','))
        out.push_back(std::stod(trim(part)));
    if (out.empty())
        throw std::invalid_argument("empty list value");
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"course_kind", [](auto& c, auto& v) { c.course_kind = v; }},
        {"course_length",
         [](auto& c, auto& v) { c.course_length = std::stoi(v); }},
        {"sigma_xy", [](auto& c, auto& v) { c.sigma_xy = std::stod(v); }},
        {"sigma_theta",
         [](auto& c, auto& v) { c.sigma_theta = std::stod(v); }},
        {"n_candidates",
         [](auto& c, auto& v) { c.n_candidates = std::stoi(v); }},
        {"window", [](auto& c, auto& v) { c.window = std::stoi(v); }},
        {"k_per_step", [](auto& c, auto& v) { c.k_per_step = std::stoi(v); }},
        {"consistency_threshold",
         [](auto& c, auto& v) { c.consistency_threshold = std::stod(v); }},
        {"revisit_radius",
         [](auto& c, auto& v) { c.revisit_radius = std::stod(v); }},
        {"triviality_cutoff",
         [](auto& c, auto& v) { c.triviality_cutoff = std::stod(v); }},
        {"p_true_accept",
         [](auto& c, auto& v) { c.p_true_accept = std::stod(v); }},
        {"p_false_accept",
         [](auto& c, auto& v) { c.p_false_accept = std::stod(v); }},
        {"score_noise_sigma",
         [](auto& c, auto& v) { c.score_noise_sigma = std::stod(v); }},
        {"mu_true", [](auto& c, auto& v) { c.mu_true = std::stod(v); }},
        {"mu_alias", [](auto& c, auto& v) { c.mu_alias = std::stod(v); }},
        {"mu_distractor",
         [](auto& c, auto& v) { c.mu_distractor = std::stod(v); }},
        {"score_sigma",
         [](auto& c, auto& v) { c.score_sigma = std::stod(v); }},
        {"constraint_mix", [](auto& c, auto& v) { c.constraint_mix = v; }},
        {"hypothesis_mix", [](auto& c, auto& v) { c.hypothesis_mix = v; }},
        {"verify_threshold",
         [](auto& c, auto& v) { c.verify_threshold = std::stod(v); }},
        {"thresholds", [](auto& c, auto& v) { c.thresholds = parse_list(v); }},
        {"loop_info_scale",
         [](auto& c, auto& v) { c.loop_info_scale = std::stod(v); }},
        {"seed", [](auto& c, auto& v) { c.seed = std::stoull(v); }},
        {"dump_consistency",
         [](auto& c, auto& v) { c.dump_consistency = (v == "true" || v == "1"); }},
    };
    return table;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " +
                                        std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        auto it = setters().find(key);
        if (it == setters().end())
            throw std::invalid_argument("unknown config key: " + key);
        it->second(config, value);
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open config: " + path);
    return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& c) {
    out << "course_kind = " << c.course_kind << '\n'
        << "course_length = " << c.course_length << '\n'
        << "sigma_xy = " << fmt(c.sigma_xy) << '\n'
        << "sigma_theta = " << fmt(c.sigma_theta) << '\n'
        << "n_candidates = " << c.n_candidates << '\n'
        << "window = " << c.window << '\n'
        << "k_per_step = " << c.k_per_step << '\n'
        << "consistency_threshold = " << fmt(c.consistency_threshold) << '\n'
        << "revisit_radius = " << fmt(c.revisit_radius) << '\n'
        << "triviality_cutoff = " << fmt(c.triviality_cutoff) << '\n'
        << "p_true_accept = " << fmt(c.p_true_accept) << '\n'
        << "p_false_accept = " << fmt(c.p_false_accept) << '\n'
        << "score_noise_sigma = " << fmt(c.score_noise_sigma) << '\n'
        << "mu_true = " << fmt(c.mu_true) << '\n'
        << "mu_alias = " << fmt(c.mu_alias) << '\n'
        << "mu_distractor = " << fmt(c.mu_distractor) << '\n'
        << "score_sigma = " << fmt(c.score_sigma) << '\n'
        << "constraint_mix = " << c.constraint_mix << '\n'
        << "hypothesis_mix = " << c.hypothesis_mix << '\n'
        << "verify_threshold = " << fmt(c.verify_threshold) << '\n';
    out << "thresholds = ";
    for (std::size_t i = 0; i < c.thresholds.size(); ++i)
        out << (i ? "," : "") << fmt(c.thresholds[i]);
    out << '\n'
        << "loop_info_scale = " << fmt(c.loop_info_scale) << '\n'
        << "seed = " << c.seed << '\n'
        << "dump_consistency = " << (c.dump_consistency ? "true" : "false")
        << '\n';
}

void save_config(const std::string& path, const ExperimentConfig& config) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path);
    write_config(out, config);
}

}  // namespace lcv
