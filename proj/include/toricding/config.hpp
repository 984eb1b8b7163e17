#ifndef TORICDING_CONFIG_HPP
#define TORICDING_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toricding/rational.hpp"

namespace toric {

/// Declarative experiment description, "key = value" per line, '#' comments.
struct ExperimentConfig {
    std::optional<std::string> polytope;
    bool raw = false;
    std::optional<Rational> h;
    std::optional<Rational> radius;   // dual box override
    std::optional<long long> nhalf;
    std::vector<double> epsilons;
    std::optional<std::string> family;  // "scaling" | "spike <vertex>" | "random"
    std::optional<std::size_t> spike_vertex;
    std::optional<Rational> spike_width;
    std::vector<double> family_params;  // scale factors or spike heights
    unsigned seed = 1;
    std::size_t count = 16;
    double tau = 1.0;
    std::optional<std::string> out;
    std::string format = "json";  // json | csv

    static ExperimentConfig parse(const std::string& text);
};

}  // namespace toric

#endif
