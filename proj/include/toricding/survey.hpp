#ifndef TORICDING_SURVEY_HPP
#define TORICDING_SURVEY_HPP

#include <string>
#include <utility>
#include <vector>

#include "toricding/stability.hpp"

namespace toric {

struct SurveyRow {
    std::string id;
    std::size_t dim = 0;
    std::size_t vertex_count = 0;
    Rational volume;
    Rational alpha;
    StabilityClass cls = StabilityClass::UniformStable;
    double wall_ms = 0;  // advisory; kept out of the deterministic outputs
};

struct SurveyResult {
    std::vector<SurveyRow> rows;  // sorted by id
    std::vector<std::string> diagnostics;
    std::size_t count_stable = 0;
    std::size_t count_boundary = 0;  // alpha exactly 1
    std::size_t count_unstable = 0;
};

using Database = std::vector<std::pair<std::string, Polytope>>;

/// The anticanonical moment polytopes of the five smooth toric del Pezzo
/// surfaces.
Database bundled_database();

struct LoadResult {
    Database entries;
    std::vector<std::string> diagnostics;
};

/// Loads a directory of .poly files or a single multi-record file (records
/// separated by blank lines, optional "id: NAME" header per record).
/// Parse and validation failures are collected per record; an empty result
/// throws. In survey mode non-reflexive bodies are rejected.
LoadResult load_database(const std::string& path, bool survey_mode = true);

SurveyResult run_survey(const Database& db, int jobs = 1);

std::string survey_csv(const SurveyResult& r);
std::string survey_json(const SurveyResult& r);

}  // namespace toric

#endif
