#include "toricding/survey.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace toric {

Database bundled_database() {
    Database db;
    db.emplace_back("bl1p2", Polytope::from_vertices({{-1, 0}, {0, -1}, {2, -1}, {-1, 2}}));
    db.emplace_back("bl2p2",
                    Polytope::from_vertices({{-1, 0}, {0, -1}, {1, -1}, {1, 0}, {-1, 2}}));
    db.emplace_back("bl3p2", Polytope::from_vertices(
                                 {{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}));
    db.emplace_back("p1xp1", Polytope::from_vertices({{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}));
    db.emplace_back("p2", Polytope::from_vertices({{2, -1}, {-1, 2}, {-1, -1}}));
    return db;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void load_record(const std::string& text, const std::string& fallback_id, bool survey_mode,
                 LoadResult& out) {
    std::string body = text;
    std::string id = fallback_id;
    // optional "id: NAME" header line
    std::istringstream lines(text);
    std::string first;
    std::getline(lines, first);
    auto pos = first.find("id:");
    if (pos != std::string::npos && first.find_first_not_of(" \t") == pos) {
        id = first.substr(pos + 3);
        id.erase(0, id.find_first_not_of(" \t"));
        id.erase(id.find_last_not_of(" \t\r") + 1);
        body = text.substr(text.find('\n') + 1);
    }
    try {
        Polytope p = parse_polytope(body);
        if (survey_mode && !p.reflexive())
            throw PolytopeError("not reflexive (survey mode rejects raw bodies)");
        out.entries.emplace_back(id, std::move(p));
    } catch (const std::exception& e) {
        out.diagnostics.push_back(id + ": " + e.what());
    }
}

}  // namespace

LoadResult load_database(const std::string& path, bool survey_mode) {
    namespace fs = std::filesystem;
    LoadResult out;
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path))
            if (entry.is_regular_file() && entry.path().extension() == ".poly")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) load_record(read_file(f.string()), f.stem().string(),
                                                survey_mode, out);
    } else if (fs::is_regular_file(path)) {
        std::string text = read_file(path);
        std::vector<std::string> records;
        std::istringstream in(text);
        std::string line, cur;
        auto flush = [&]() {
            if (cur.find_first_not_of(" \t\r\n") != std::string::npos) records.push_back(cur);
            cur.clear();
        };
        while (std::getline(in, line)) {
            std::string trimmed = line;
            trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
            if (trimmed.empty() || trimmed[0] == '\r')
                flush();
            else
                cur += line + "\n";
        }
        flush();
        std::size_t k = 0;
        for (const auto& rec : records) load_record(rec, "record" + std::to_string(k++),
                                                    survey_mode, out);
    } else {
        throw std::runtime_error("no such file or directory: '" + path + "'");
    }
    if (out.entries.empty())
        throw std::runtime_error("empty database at '" + path + "'" +
                                 (out.diagnostics.empty() ? "" : " (all records failed)"));
    return out;
}

SurveyResult run_survey(const Database& db, int jobs) {
    SurveyResult res;
    res.rows.resize(db.size());
    if (jobs < 1) jobs = 1;
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= db.size()) return;
            auto t0 = std::chrono::steady_clock::now();
            const auto& [id, p] = db[i];
            StabilityReport rep = alpha_invariant(p, solve_l(moments(p)), id);
            auto t1 = std::chrono::steady_clock::now();
            SurveyRow row;
            row.id = id;
            row.dim = p.dim();
            row.vertex_count = p.vertices().size();
            row.volume = rep.volume;
            row.alpha = rep.alpha;
            row.cls = rep.cls;
            row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            res.rows[i] = std::move(row);
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::sort(res.rows.begin(), res.rows.end(),
              [](const SurveyRow& a, const SurveyRow& b) { return a.id < b.id; });
    for (const auto& r : res.rows) {
        switch (r.cls) {
            case StabilityClass::UniformStable: ++res.count_stable; break;
            case StabilityClass::SemistableBoundary: ++res.count_boundary; break;
            case StabilityClass::Unstable: ++res.count_unstable; break;
        }
    }
    return res;
}

std::string survey_csv(const SurveyResult& r) {
    std::ostringstream out;
    out << "polytope_id,dim,vertex_count,volume,alpha,class\n";
    for (const auto& row : r.rows)
        out << row.id << "," << row.dim << "," << row.vertex_count << ","
            << rational_to_string(row.volume) << "," << rational_to_string(row.alpha) << ","
            << to_string(row.cls) << "\n";
    return out.str();
}

std::string survey_json(const SurveyResult& r) {
    nlohmann::json j;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json e;
        e["polytope_id"] = row.id;
        e["dim"] = row.dim;
        e["vertex_count"] = row.vertex_count;
        e["volume"] = rational_to_string(row.volume);
        e["alpha"] = rational_to_string(row.alpha);
        e["class"] = to_string(row.cls);
        rows.push_back(e);
    }
    j["rows"] = rows;
    j["summary"]["uniform_stable"] = r.count_stable;
    j["summary"]["semistable_boundary"] = r.count_boundary;
    j["summary"]["unstable"] = r.count_unstable;
    j["diagnostics"] = r.diagnostics;
    return j.dump(2);
}

}  // namespace toric
