// Command line front end: stability analysis, batch surveys, functional
// evaluation, pseudo-boundedness probes, and Ding-functional descent on
// lattice polytope inputs. JSON goes to stdout; the human summary goes to
// stderr so the tool composes in pipelines.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "toricding/config.hpp"
#include "toricding/functional.hpp"
#include "toricding/minimize.hpp"
#include "toricding/probe.hpp"
#include "toricding/survey.hpp"

using namespace toric;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

int default_jobs() {
    if (const char* env = std::getenv("TORIC_DING_JOBS")) {
        int j = std::atoi(env);
        if (j > 0) return j;
    }
    return 1;
}

Polytope load_polytope(const std::string& path, bool raw) {
    return parse_polytope(read_file(path), raw);
}

std::shared_ptr<GridContext> make_grid(const Polytope& p, const Rational& h) {
    return std::make_shared<GridContext>(p, h);
}

// grid potential file: "n h" then one line per node: n indices and a value
DiscretePotential read_potential(const std::string& path, const Polytope& p) {
    std::istringstream in(read_file(path));
    std::size_t n;
    std::string hs;
    if (!(in >> n >> hs)) throw std::runtime_error("bad potential header in '" + path + "'");
    if (n != p.dim()) throw std::runtime_error("potential dimension mismatch");
    auto ctx = make_grid(p, parse_rational(hs));
    DiscretePotential u = DiscretePotential::zero(ctx);
    std::vector<bool> seen(ctx->node_count(), false);
    VecZ idx(n);
    double value;
    while (in >> idx[0]) {
        for (std::size_t j = 1; j < n; ++j)
            if (!(in >> idx[j])) throw std::runtime_error("truncated potential row");
        if (!(in >> value)) throw std::runtime_error("truncated potential row");
        auto node = ctx->node_at(idx);
        if (!node) throw std::runtime_error("potential row outside the grid");
        u.values[*node] = value;
        seen[*node] = true;
    }
    for (bool s : seen)
        if (!s) throw std::runtime_error("potential file misses grid nodes");
    u.normalized = false;
    return u;
}

std::string write_potential(const DiscretePotential& u) {
    std::ostringstream out;
    const auto& ctx = *u.ctx;
    out << ctx.dim() << " " << rational_to_string(ctx.spec().h) << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < ctx.node_count(); ++i) {
        for (auto c : ctx.node_indices()[i]) out << c << " ";
        out << u.values[i] << "\n";
    }
    return out.str();
}

int cmd_analyze(const std::string& path, bool raw, const std::string& out_path, bool csv) {
    Polytope p = load_polytope(path, raw);
    if (!raw && !p.reflexive()) {
        std::cerr << "error: input is not reflexive; rerun with --raw to analyze anyway\n";
        return 1;
    }
    std::string id = std::filesystem::path(path).stem().string();
    StabilityReport rep = alpha_invariant(p, solve_l(moments(p)), id);
    std::string payload = csv ? StabilityReport::csv_header(p.dim()) + "\n" + rep.to_csv_row() + "\n"
                              : rep.to_json() + "\n";
    if (out_path.empty())
        std::cout << payload;
    else
        write_file(out_path, payload);
    std::cerr << id << ": alpha = " << rational_to_string(rep.alpha) << " ("
              << to_string(rep.cls) << ")\n";
    if (!raw && rep.cls == StabilityClass::Unstable) return 2;
    return 0;
}

int cmd_survey(const std::string& path, int jobs, const std::string& out_path,
               const std::string& format) {
    auto loaded = load_database(path, /*survey_mode=*/true);
    auto res = run_survey(loaded.entries, jobs);
    res.diagnostics = loaded.diagnostics;
    std::string payload = format == "csv" ? survey_csv(res) : survey_json(res);
    if (out_path.empty())
        std::cout << payload;
    else
        write_file(out_path, payload);
    std::cerr << "survey: " << res.rows.size() << " polytopes, " << res.count_stable
              << " uniformly stable, " << res.count_boundary << " boundary, "
              << res.count_unstable << " unstable";
    if (!loaded.diagnostics.empty())
        std::cerr << ", " << loaded.diagnostics.size() << " records skipped";
    std::cerr << "\n";
    for (const auto& d : loaded.diagnostics) std::cerr << "  skipped " << d << "\n";
    if (res.count_unstable > 0) return 2;
    return 0;
}

int cmd_eval(const std::string& path, bool raw, const std::string& potential, double tau,
             const std::string& h, const std::string& radius, long long nhalf) {
    Polytope p = load_polytope(path, raw);
    auto ctx = make_grid(p, parse_rational(h));
    DiscretePotential u = DiscretePotential::zero(ctx);
    if (potential == "zero") {
        // already there
    } else if (potential == "guillemin") {
        u = normalize(guillemin_potential(ctx, tau));
    } else {
        u = normalize(read_potential(potential, p));
    }
    AffineDensity l = solve_l(moments(p));
    NonlinearOptions opts;
    if (nhalf > 0) opts.nhalf = nhalf;
    if (!radius.empty())
        opts.spec =
            DualGridSpec{parse_rational(radius), nhalf > 0 ? nhalf : auto_dual_spec(u).nhalf};
    auto nl = nonlinear_term(u, opts);
    double lin = linear_term(u, l);
    double d = nl.value - u.at_origin() + lin;
    double j = j_toric(u);

    nlohmann::json out;
    out["polytope"] = std::filesystem::path(path).stem().string();
    out["potential"] = potential;
    out["h"] = rational_to_string(ctx->spec().h);
    out["dual_radius"] = rational_to_string(nl.spec.radius);
    out["nonlinear_term"] = nl.value;
    out["ding_futaki"] = -u.at_origin() + lin;
    out["modified_ding"] = d;
    out["j_toric"] = j;
    out["covers_gradients"] = nl.covers_gradients;
    std::cout << out.dump(2) << "\n";
    std::cerr << "D = " << d << ", I = " << (-u.at_origin() + lin) << ", J = " << j
              << ", nonlinear = " << nl.value << "\n";
    return 0;
}

int cmd_probe(const std::string& path, bool raw, const ExperimentConfig& cfg) {
    Polytope p = load_polytope(path, raw || cfg.raw);
    auto ctx = make_grid(p, cfg.h.value_or(parse_rational("1/8")));
    AffineDensity l = solve_l(moments(p));
    auto base = normalize(guillemin_potential(ctx, cfg.tau));
    std::string kind = cfg.family.value_or("scaling");
    ProbeFamily fam;
    if (kind == "scaling") {
        std::vector<double> ts = cfg.family_params;
        if (ts.empty())
            for (int t = 1; t <= 16; ++t) ts.push_back(t);
        fam = scaling_family(base, ts);
    } else if (kind == "spike") {
        if (!cfg.spike_vertex) throw std::runtime_error("spike family needs a vertex index");
        std::vector<double> ks = cfg.family_params;
        if (ks.empty())
            for (int k = 0; k < 10; ++k) ks.push_back(static_cast<double>(1 << k));
        Rational width = cfg.spike_width.value_or(Rational(1) / 4);
        fam = spike_family(base, *cfg.spike_vertex, width, ks);
    } else if (kind == "random") {
        fam = random_family(base, cfg.count, cfg.seed);
    } else {
        throw std::runtime_error("unknown family '" + kind + "'");
    }
    std::vector<double> eps = cfg.epsilons;
    if (eps.empty()) eps = {0.5, 0.25, 0.1, 0.05};
    NonlinearOptions opts;
    if (cfg.nhalf) opts.nhalf = *cfg.nhalf;
    if (cfg.radius)
        opts.spec = DualGridSpec{*cfg.radius, cfg.nhalf.value_or(auto_dual_spec(base).nhalf)};
    auto res = pseudo_bound_probe(fam, l, eps, opts);
    std::string payload = cfg.format == "csv" ? res.to_csv() : res.to_json() + "\n";
    if (cfg.out)
        write_file(*cfg.out, payload);
    else
        std::cout << payload;
    for (const auto& v : res.verdicts)
        std::cerr << "eps = " << v.eps << ": C = " << v.c_eps << " "
                  << (v.finite ? "FINITE" : "DIVERGING") << "\n";
    return 0;
}

int cmd_minimize(const std::string& path, bool raw, const std::string& h, int steps,
                 const std::string& out_prefix) {
    Polytope p = load_polytope(path, raw);
    auto ctx = make_grid(p, parse_rational(h));
    AffineDensity l = solve_l(moments(p));
    auto init = normalize(guillemin_potential(ctx));
    MinimizeOptions opts;
    opts.max_steps = steps;
    auto res = minimize_ding(init, l, opts);
    if (!out_prefix.empty()) {
        write_file(out_prefix + ".potential", write_potential(res.minimizer));
        std::ostringstream trace;  // gnuplot-friendly two columns
        trace.precision(17);
        for (std::size_t i = 0; i < res.trace.size(); ++i)
            trace << i << " " << res.trace[i] << "\n";
        write_file(out_prefix + ".trace", trace.str());
    }
    nlohmann::json out;
    out["steps_accepted"] = res.accepted;
    out["steps_rejected"] = res.rejected;
    out["converged"] = res.converged;
    out["initial"] = res.trace.front();
    out["final"] = res.trace.back();
    std::cout << out.dump(2) << "\n";
    std::cerr << "descent: D " << res.trace.front() << " -> " << res.trace.back() << " in "
              << res.accepted << " steps" << (res.converged ? "" : " (did not converge)")
              << "\n";
    return 0;
}

int cmd_gen_bundled(const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [id, p] : bundled_database())
        write_file(dir + "/" + id + ".poly", serialize_polytope(p));
    std::cerr << "wrote 5 polytopes to " << dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ding stability toolkit for toric Fano polytopes"};
    app.require_subcommand(1);
    // --h is a real option below, so help lives on --help only
    app.set_help_flag("--help", "print help");

    std::string path, out_path, format = "json", potential = "zero", h = "1/8", radius,
                out_prefix, config_path;
    bool raw = false, csv = false;
    int jobs = default_jobs(), steps = 60;
    long long nhalf = 0;
    double tau = 1.0;

    auto* analyze = app.add_subcommand("analyze", "stability report for one polytope");
    analyze->add_option("path", path)->required();
    analyze->add_flag("--raw", raw, "accept non-reflexive bodies; class exit codes advisory");
    analyze->add_flag("--csv", csv, "emit CSV instead of JSON");
    analyze->add_option("--out", out_path, "write the report to a file");

    auto* survey = app.add_subcommand("survey", "batch analysis of a polytope database");
    survey->add_option("path", path)->required();
    survey->add_option("--jobs", jobs, "worker threads (env TORIC_DING_JOBS)");
    survey->add_option("--out", out_path, "output file");
    survey->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    auto* eval = app.add_subcommand("eval", "evaluate D, I, J and the nonlinear term");
    eval->add_option("path", path)->required();
    eval->add_flag("--raw", raw);
    eval->add_option("--potential", potential, "zero | guillemin | potential file");
    eval->add_option("--tau", tau, "guillemin scale");
    eval->add_option("--h", h, "grid spacing (rational)");
    eval->add_option("--R", radius, "dual box radius (rational)");
    eval->add_option("--nhalf", nhalf, "dual nodes per half axis");

    auto* probe = app.add_subcommand("probe", "pseudo-boundedness probe along a family");
    probe->add_option("path", path)->required();
    probe->add_flag("--raw", raw);
    probe->add_option("--config", config_path, "key = value experiment file");
    std::string family;
    std::vector<double> eps_list, params;
    long long spike_vertex = -1;
    std::string spike_width, probe_h;
    unsigned seed = 0;
    std::size_t count = 0;
    probe->add_option("--family", family, "scaling | spike | random");
    probe->add_option("--vertex", spike_vertex, "spike vertex index");
    probe->add_option("--width", spike_width, "spike width (rational)");
    probe->add_option("--eps", eps_list, "epsilon list");
    probe->add_option("--params", params, "family growth parameters");
    probe->add_option("--h", probe_h, "grid spacing (rational)");
    probe->add_option("--seed", seed);
    probe->add_option("--count", count, "random family size");
    probe->add_option("--out", out_path);
    std::string probe_format;
    probe->add_option("--format", probe_format)->check(CLI::IsMember({"csv", "json"}));

    auto* minimize = app.add_subcommand("minimize", "descend the modified Ding functional");
    minimize->add_option("path", path)->required();
    minimize->add_flag("--raw", raw);
    minimize->add_option("--h", h, "grid spacing (rational)");
    minimize->add_option("--steps", steps, "maximum descent steps");
    minimize->add_option("--out-prefix", out_prefix, "write PREFIX.potential and PREFIX.trace");

    auto* gen = app.add_subcommand("gen-bundled", "write the bundled polygon database");
    std::string gen_dir = "bundled";
    gen->add_option("--dir", gen_dir, "target directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(path, raw, out_path, csv);
        if (app.got_subcommand(survey)) return cmd_survey(path, jobs, out_path, format);
        if (app.got_subcommand(eval)) {
            if (parse_rational(h) <= 0) throw std::runtime_error("grid spacing must be positive");
            return cmd_eval(path, raw, potential, tau, h, radius, nhalf);
        }
        if (app.got_subcommand(probe)) {
            ExperimentConfig cfg;
            if (!config_path.empty()) cfg = ExperimentConfig::parse(read_file(config_path));
            if (!family.empty()) cfg.family = family;
            if (spike_vertex >= 0) cfg.spike_vertex = static_cast<std::size_t>(spike_vertex);
            if (!spike_width.empty()) cfg.spike_width = parse_rational(spike_width);
            if (!eps_list.empty()) cfg.epsilons = eps_list;
            if (!params.empty()) cfg.family_params = params;
            if (!probe_h.empty()) cfg.h = parse_rational(probe_h);
            if (seed != 0) cfg.seed = seed;
            if (count != 0) cfg.count = count;
            if (!out_path.empty()) cfg.out = out_path;
            if (!probe_format.empty()) cfg.format = probe_format;
            return cmd_probe(path, raw, cfg);
        }
        if (app.got_subcommand(minimize)) return cmd_minimize(path, raw, h, steps, out_prefix);
        if (app.got_subcommand(gen)) return cmd_gen_bundled(gen_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
