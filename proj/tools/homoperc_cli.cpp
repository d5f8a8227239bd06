#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "homoperc/csv_io.hpp"
#include "homoperc/ensemble.hpp"
#include "homoperc/errors.hpp"
#include "homoperc/estimators.hpp"
#include "homoperc/homology.hpp"
#include "homoperc/newman_ziff.hpp"
#include "homoperc/surface_graph.hpp"
#include "homoperc/tiling.hpp"
#include "homoperc/todd_coxeter.hpp"

using json = nlohmann::json;
using namespace homoperc;

namespace {

std::string fd(double v) { return format_double(v); }

std::string stem_of(const std::string& path) {
    return std::filesystem::path(path).stem().string();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open for reading: " + path);
    return is;
}

DualPair load_pair(const std::string& path) {
    return build_dual(load_graph_file(path));
}

json params_json(const CodeParams& cp, std::size_t trials) {
    json j;
    j["n"] = cp.n;
    j["k"] = cp.k;
    j["dZ"] = cp.dZ ? json(*cp.dZ) : json(nullptr);
    j["dX"] = cp.dX ? json(*cp.dX) : json(nullptr);
    j["dZ_exact"] = cp.dZ_exact;
    j["dX_exact"] = cp.dX_exact;
    j["dZ_confirmations"] = cp.dZ_confirmations;
    j["dX_confirmations"] = cp.dX_confirmations;
    j["trials"] = trials;
    return j;
}

json fit_json(const FitResult& r) {
    json j;
    j["p0"] = r.p0;
    j["A0"] = r.A0;
    j["B"] = r.B;
    j["sigma_p0"] = r.sigma_p0;
    j["residual"] = r.residual;
    j["degree"] = r.degree;
    j["window"] = {r.window_lo, r.window_hi};
    j["shifted"] = r.shifted;
    j["coeffs"] = r.coeffs;
    j["warnings"] = r.warnings;
    return j;
}

// Curve files carry n in their meta block; an optional JSON side file maps
// curve path, basename, or graph id to {n, d} for graphs whose degree the
// shift term needs.
struct CurveMeta {
    std::optional<std::size_t> n;
    std::optional<double> d;
};

CurveMeta lookup_meta(const json& meta, const std::string& path, const std::string& graph_id) {
    CurveMeta out;
    const json* entry = nullptr;
    for (const std::string& key : {path, std::filesystem::path(path).filename().string(),
                                   stem_of(path), graph_id}) {
        if (!key.empty() && meta.contains(key)) {
            entry = &meta.at(key);
            break;
        }
    }
    if (entry) {
        if (entry->contains("n")) out.n = entry->at("n").get<std::size_t>();
        if (entry->contains("d")) out.d = entry->at("d").get<double>();
    }
    return out;
}

std::vector<ObservableCurve> load_pE_curves(const std::vector<std::string>& paths,
                                            const json& meta) {
    std::vector<ObservableCurve> curves;
    for (const auto& path : paths) {
        auto is = open_in(path);
        GrandCanonicalCurve gc = read_curve_csv(is);
        CurveMeta m = lookup_meta(meta, path, gc.graph_id);
        ObservableCurve oc = pE_curve(gc, m.d.value_or(1.0));
        if (m.n) oc.n = *m.n;
        curves.push_back(std::move(oc));
    }
    return curves;
}

void check_window(const std::vector<double>& w) {
    if (w.size() != 2 || !(w[0] < w[1]))
        throw InvalidArgument("--window wants lo,hi with lo < hi");
}

int run_generate_torus(int lx, int ly, const std::string& out) {
    std::ostringstream echo;
    echo << "generate-torus --lx " << lx << " --ly " << ly << " --out " << out;
    DualPair pair = build_torus(lx, ly);
    save_graph_file(pair.primal, out, {echo.str()});
    std::cerr << "wrote " << out << " (" << pair.primal.num_vertices << " vertices, "
              << pair.primal.num_edges() << " edges)\n";
    return 0;
}

int run_generate_hyperbolic(int d, int f, std::uint64_t seed, std::size_t min_len,
                            std::size_t max_len, std::size_t max_cosets,
                            std::size_t attempts, std::optional<std::size_t> target,
                            const std::string& out) {
    std::ostringstream echo;
    echo << "generate-hyperbolic --d " << d << " --f " << f << " --seed " << seed
         << " --min-len " << min_len << " --max-len " << max_len << " --max-cosets "
         << max_cosets << " --attempts " << attempts;
    if (target) echo << " --target " << *target;
    echo << " --out " << out;

    DualPair pair;
    Word relator;
    std::uint64_t used_seed = 0;
    if (target) {
        FamilyResult fam = generate_family(d, f, seed, {*target}, max_cosets, min_len,
                                           max_len, attempts);
        if (fam.members.empty())
            throw std::runtime_error("no usable quotient after " +
                                     std::to_string(attempts) + " relator attempts");
        pair = fam.members[0].pair;
        relator = fam.members[0].relator;
        used_seed = fam.members[0].relator_seed;
    } else {
        bool found = false;
        std::size_t capacity_misses = 0;
        for (std::size_t a = 0; a < attempts && !found; ++a) {
            used_seed = seed + a;
            relator = random_relator(used_seed, min_len, max_len);
            try {
                pair = build_quotient_graph(d, f, {relator}, max_cosets);
                found = true;
            } catch (const CapacityExceeded&) {
                ++capacity_misses;
            } catch (const DegenerateQuotient&) {
            }
        }
        if (!found) {
            std::string msg = "no usable quotient after " + std::to_string(attempts) +
                              " relator attempts";
            if (capacity_misses == attempts)
                throw CapacityExceeded(msg + "; every attempt overran the coset budget");
            throw std::runtime_error(msg);
        }
    }

    std::vector<std::string> comments = {
        echo.str(),
        "relator " + word_to_string(relator) + " (seed " + std::to_string(used_seed) + ")"};
    save_graph_file(pair.primal, out, comments);
    std::cerr << "wrote " << out << " (" << pair.primal.num_vertices << " vertices, "
              << pair.primal.num_edges() << " edges, relator seed " << used_seed << ")\n";
    return 0;
}

int run_graph_info(const std::string& path, std::size_t trials, std::uint64_t seed) {
    DualPair pair = load_pair(path);
    auto inc = incidence_matrices(pair.primal);
    CodeParams cp = code_params(inc, kDefaultExactLimit, trials, seed);
    json j = params_json(cp, trials);
    j["vertices"] = pair.primal.num_vertices;
    j["faces"] = pair.primal.num_faces();
    if (pair.primal.schlafli)
        j["schlafli"] = {pair.primal.schlafli->first, pair.primal.schlafli->second};
    else
        j["schlafli"] = nullptr;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_distance(const std::string& path, std::size_t trials, std::uint64_t seed,
                 bool exact) {
    DualPair pair = load_pair(path);
    auto inc = incidence_matrices(pair.primal);
    std::size_t limit = exact ? (std::size_t(1) << 32) : kDefaultExactLimit;
    CodeParams cp = code_params(inc, limit, trials, seed);
    std::cout << params_json(cp, trials).dump(2) << "\n";
    return 0;
}

int run_simulate(const std::string& path, std::size_t sweeps, std::uint64_t seed,
                 std::size_t threads, const std::string& out) {
    std::ostringstream echo;
    echo << "simulate --graph " << path << " --sweeps " << sweeps << " --seed " << seed
         << " --threads " << threads << " --out " << out;
    DualPair pair = load_pair(path);
    long k = css_k(incidence_matrices(pair.primal));
    CanonicalSeries series = aggregate(pair, k, sweeps, seed, threads);
    auto os = open_out(out);
    write_canonical_csv(os, series, echo.str(), stem_of(path));
    std::cerr << "wrote " << out << " (n=" << series.n << ", k=" << series.k
              << ", sweeps=" << series.sweeps << ")\n";
    return 0;
}

int run_convolve(const std::string& in, double pmin, double pmax, double dp, double M,
                 const std::string& out) {
    std::ostringstream echo;
    echo << "convolve --in " << in << " --pmin " << fd(pmin) << " --pmax " << fd(pmax)
         << " --dp " << fd(dp) << " --M " << fd(M) << " --out " << out;
    auto is = open_in(in);
    std::string graph_id;
    CanonicalSeries series = read_canonical_csv(is, &graph_id);
    GrandCanonicalCurve curve = convolve(series, make_p_grid(pmin, pmax, dp), M);
    curve.graph_id = graph_id;
    auto os = open_out(out);
    write_curve_csv(os, curve, echo.str());
    std::cerr << "wrote " << out << " (" << curve.p.size() << " grid points)\n";
    return 0;
}

int run_fit_crossing(const std::vector<std::string>& paths, const std::string& meta_path,
                     int degree, const std::vector<double>& window, bool shift) {
    check_window(window);
    json meta = json::object();
    if (!meta_path.empty()) {
        auto is = open_in(meta_path);
        meta = json::parse(is);
    }
    auto curves = load_pE_curves(paths, meta);
    FitResult r = crossing_fit(curves, degree, window[0], window[1], shift);
    json j = fit_json(r);
    j["curves"] = paths;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_fit_scaling(const std::vector<std::string>& paths,
                    const std::vector<double>& omegas, int degree) {
    std::vector<ObservableCurve> curves;
    for (const auto& path : paths) {
        auto is = open_in(path);
        curves.push_back(s1_curve(read_curve_csv(is)));
    }
    SizeScalingResult r = size_scaling_extrapolate(curves, omegas, degree);
    json j;
    j["pc"] = r.pc;
    j["sigma"] = std::isfinite(r.sigma) ? json(r.sigma) : json(nullptr);
    j["infinite_uncertainty"] = r.infinite_uncertainty;
    j["omegas"] = r.omegas;
    j["per_omega"] = r.per_omega;
    j["warnings"] = r.warnings;
    j["curves"] = paths;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_pipeline(const std::vector<std::string>& graphs, std::size_t sweeps,
                 std::uint64_t seed, std::size_t threads, double pmin, double pmax,
                 double dp, double M, int degree, const std::vector<double>& window,
                 bool shift, const std::string& out_dir) {
    check_window(window);
    if (graphs.empty()) throw InvalidArgument("--graphs wants at least one file");
    auto grid = make_p_grid(pmin, pmax, dp);

    std::vector<ObservableCurve> curves;
    json graph_meta = json::array();
    for (std::size_t g = 0; g < graphs.size(); ++g) {
        DualPair pair = load_pair(graphs[g]);
        long k = css_k(incidence_matrices(pair.primal));
        std::uint64_t graph_seed = seed + g;
        CanonicalSeries series = aggregate(pair, k, sweeps, graph_seed, threads);
        GrandCanonicalCurve curve = convolve(series, grid, M);
        curve.graph_id = stem_of(graphs[g]);
        auto dist = covering_set_distance(incidence_matrices(pair.primal), 200,
                                          graph_seed ^ 0x646973746e7aull);
        double d = dist.weight ? double(*dist.weight) : 1.0;
        curves.push_back(pE_curve(curve, d));

        if (!out_dir.empty()) {
            std::filesystem::create_directories(out_dir);
            std::ostringstream echo;
            echo << "pipeline --graphs " << graphs[g] << " --sweeps " << sweeps
                 << " --seed " << graph_seed << " --threads " << threads << " --pmin "
                 << fd(pmin) << " --pmax " << fd(pmax) << " --dp " << fd(dp) << " --M "
                 << fd(M);
            auto base = std::filesystem::path(out_dir) / curve.graph_id;
            auto cs = open_out(base.string() + ".canonical.csv");
            write_canonical_csv(cs, series, echo.str(), curve.graph_id);
            auto cv = open_out(base.string() + ".curve.csv");
            write_curve_csv(cv, curve, echo.str());
        }
        graph_meta.push_back({{"id", curve.graph_id},
                              {"n", series.n},
                              {"k", series.k},
                              {"d", d},
                              {"seed", graph_seed}});
        std::cerr << "simulated " << curve.graph_id << " (n=" << series.n
                  << ", k=" << series.k << ")\n";
    }

    FitResult r = crossing_fit(curves, degree, window[0], window[1], shift);
    json j = fit_json(r);
    j["graphs"] = graph_meta;
    j["sweeps"] = sweeps;
    j["seed"] = seed;
    std::cout << j.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Edge percolation on surface graphs: generation, cluster sweeps, "
                 "grand canonical curves, threshold fits"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "homoperc 1");
    app.option_defaults()->always_capture_default();

    int lx = 3, ly = 3;
    int gd = 7, gf = 3;
    std::uint64_t seed = 1;
    std::size_t min_len = 8, max_len = 24, max_cosets = 200000, attempts = 100;
    std::optional<std::size_t> target;
    std::string out, in_path, graph_path, meta_path, out_dir;
    std::size_t trials = 1000, info_trials = 200;
    bool exact = false, shift = false;
    std::size_t sweeps = 10000, threads = 1;
    double pmin = 0.4, pmax = 0.6, dp = 1e-3, M = kDefaultTruncation;
    int degree = 4, scaling_degree = 2;
    std::vector<double> window, omegas = {std::begin(kDefaultOmegas), std::end(kDefaultOmegas)};
    std::vector<std::string> curve_paths, graph_paths;

    auto* gt = app.add_subcommand("generate-torus", "Square lattice torus as an .hpg file");
    gt->add_option("--lx", lx, "columns")->check(CLI::PositiveNumber);
    gt->add_option("--ly", ly, "rows")->check(CLI::PositiveNumber);
    gt->add_option("--out", out, "output .hpg path")->required();
    gt->callback([&] { run_generate_torus(lx, ly, out); });

    auto* gh = app.add_subcommand(
        "generate-hyperbolic",
        "Finite {f,d} tiling quotient from a random relator, saved as .hpg");
    gh->add_option("--d", gd, "vertex degree")->check(CLI::Range(3, 64));
    gh->add_option("--f", gf, "face size")->check(CLI::Range(3, 64));
    gh->add_option("--seed", seed, "first relator seed; successors are tried in order");
    gh->add_option("--min-len", min_len, "relator length lower bound");
    gh->add_option("--max-len", max_len, "relator length upper bound");
    gh->add_option("--max-cosets", max_cosets, "coset table budget");
    gh->add_option("--attempts", attempts, "relator seeds to try before giving up");
    gh->add_option("--target", target, "aim for this edge count instead of first success");
    gh->add_option("--out", out, "output .hpg path")->required();
    gh->callback([&] {
        run_generate_hyperbolic(gd, gf, seed, min_len, max_len, max_cosets, attempts,
                                target, out);
    });

    auto* gi = app.add_subcommand("graph-info",
                                  "Validate an .hpg file and report code parameters");
    gi->add_option("file", graph_path, "graph file")->required();
    gi->add_option("--trials", info_trials, "covering set trials for distance bounds");
    gi->add_option("--seed", seed, "covering set seed");
    gi->callback([&] { run_graph_info(graph_path, info_trials, seed); });

    auto* di = app.add_subcommand("distance", "Distance estimates for one graph");
    di->add_option("--graph", graph_path, "graph file")->required();
    di->add_option("--trials", trials, "covering set trials");
    di->add_option("--seed", seed, "covering set seed");
    di->add_flag("--exact", exact, "raise the exhaustive search budget to 2^32 subsets");
    di->callback([&] { run_distance(graph_path, trials, seed, exact); });

    auto* si = app.add_subcommand(
        "simulate", "Cluster sweeps; writes per-occupation means as CSV");
    si->add_option("--graph", graph_path, "graph file")->required();
    si->add_option("--sweeps", sweeps, "number of sweeps")->check(CLI::PositiveNumber);
    si->add_option("--seed", seed, "master seed");
    si->add_option("--threads", threads, "worker threads")
        ->envname("HOMOPERC_THREADS")
        ->check(CLI::PositiveNumber);
    si->add_option("--out", out, "output CSV path")->required();
    si->callback([&] { run_simulate(graph_path, sweeps, seed, threads, out); });

    auto* cv = app.add_subcommand(
        "convolve", "Binomial mixing of a per-occupation CSV onto a p grid");
    cv->add_option("--in", in_path, "per-occupation CSV")->required();
    cv->add_option("--pmin", pmin, "grid start")->required();
    cv->add_option("--pmax", pmax, "grid end")->required();
    cv->add_option("--dp", dp, "grid step");
    cv->add_option("--M", M, "window half width in binomial standard deviations");
    cv->add_option("--out", out, "output CSV path")->required();
    cv->callback([&] { run_convolve(in_path, pmin, pmax, dp, M, out); });

    auto* fc = app.add_subcommand(
        "fit-crossing", "Collective polynomial crossing fit over curve CSVs");
    fc->add_option("--curves", curve_paths, "curve CSV files")
        ->required()
        ->delimiter(',');
    fc->add_option("--meta", meta_path, "JSON mapping curve file or graph id to {n, d}");
    fc->add_option("--degree", degree, "polynomial degree")->check(CLI::PositiveNumber);
    fc->add_option("--window", window, "fit window lo,hi")->required()->delimiter(',');
    fc->add_flag("--shift", shift, "include the ln(n)/d vertical shift term");
    fc->callback([&] { run_fit_crossing(curve_paths, meta_path, degree, window, shift); });

    auto* fs = app.add_subcommand(
        "fit-scaling", "Largest cluster size scaling extrapolation over curve CSVs");
    fs->add_option("--curves", curve_paths, "curve CSV files")
        ->required()
        ->delimiter(',');
    fs->add_option("--omegas", omegas, "crossing levels omega n^(2/3)")->delimiter(',');
    fs->add_option("--degree", scaling_degree, "polynomial degree in n^(-1/3)")
        ->check(CLI::PositiveNumber);
    fs->callback([&] { run_fit_scaling(curve_paths, omegas, scaling_degree); });

    auto* pl = app.add_subcommand(
        "pipeline", "Simulate, convolve and crossing-fit a list of graphs in one run");
    pl->add_option("--graphs", graph_paths, "graph files")->required()->delimiter(',');
    pl->add_option("--sweeps", sweeps, "sweeps per graph")->check(CLI::PositiveNumber);
    pl->add_option("--seed", seed, "base seed; graph g uses seed + g");
    pl->add_option("--threads", threads, "worker threads")
        ->envname("HOMOPERC_THREADS")
        ->check(CLI::PositiveNumber);
    pl->add_option("--pmin", pmin, "grid start");
    pl->add_option("--pmax", pmax, "grid end");
    pl->add_option("--dp", dp, "grid step");
    pl->add_option("--M", M, "binomial window half width");
    pl->add_option("--degree", degree, "crossing fit degree");
    pl->add_option("--window", window, "fit window lo,hi")->required()->delimiter(',');
    pl->add_flag("--shift", shift,
                 "include the ln(n)/d vertical shift term; d is a covering-set "
                 "distance estimate per graph");
    pl->add_option("--out-dir", out_dir, "also write per-graph CSVs here");
    pl->callback([&] {
        run_pipeline(graph_paths, sweeps, seed, threads, pmin, pmax, dp, M, degree,
                     window, shift, out_dir);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const CapacityExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const FitFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
