#include "toricding/config.hpp"

#include <sstream>
#include <stdexcept>

namespace toric {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "polytope") {
            cfg.polytope = value;
        } else if (key == "raw") {
            cfg.raw = (value == "1" || value == "true" || value == "yes");
        } else if (key == "h") {
            cfg.h = parse_rational(value);
        } else if (key == "radius") {
            cfg.radius = parse_rational(value);
        } else if (key == "nhalf") {
            cfg.nhalf = std::stoll(value);
        } else if (key == "eps") {
            cfg.epsilons = parse_list(value);
        } else if (key == "family") {
            std::istringstream fs(value);
            std::string kind;
            fs >> kind;
            cfg.family = kind;
            if (kind == "spike") {
                std::size_t v;
                if (fs >> v) cfg.spike_vertex = v;
            }
        } else if (key == "spike_width") {
            cfg.spike_width = parse_rational(value);
        } else if (key == "params") {
            cfg.family_params = parse_list(value);
        } else if (key == "seed") {
            cfg.seed = static_cast<unsigned>(std::stoul(value));
        } else if (key == "count") {
            cfg.count = static_cast<std::size_t>(std::stoul(value));
        } else if (key == "tau") {
            cfg.tau = std::stod(value);
        } else if (key == "out") {
            cfg.out = value;
        } else if (key == "format") {
            if (value != "json" && value != "csv")
                throw std::runtime_error("config: format must be json or csv");
            cfg.format = value;
        } else {
            throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key '" +
                                     key + "'");
        }
    }
    return cfg;
}

}  // namespace toric
