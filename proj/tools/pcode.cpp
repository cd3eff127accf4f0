// pcode command-line front end. Subcommands load structured inputs, run one
// solver or constructor, re-verify the certificate independently, and write
// a JSON envelope: the resolved config, the result, the verification block,
// and a reproducibility hash over everything except the timestamp.
//
// Exit codes: 0 ok, 1 solver did not converge (inconclusive), 2 config
// error, 3 certificate re-verification failure.

#include <cstdio>
#include <ctime>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcode/boxcomplex.hpp"
#include "pcode/capture.hpp"
#include "pcode/code.hpp"
#include "pcode/io.hpp"
#include "pcode/measure.hpp"
#include "pcode/oddmap.hpp"
#include "pcode/partition.hpp"
#include "pcode/version.hpp"

namespace {

using pcode::Json;
using KV = std::map<std::string, std::string>;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommandOutput {
    Json result;
    Json verify;         // recomputed from the certificate alone; must carry "ok"
    bool converged = true;
};

const std::string& require(const KV& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end() || it->second.empty())
        throw ConfigError("missing required option --" + key);
    return it->second;
}

std::string get_or(const KV& kv, const std::string& key, const std::string& fallback) {
    auto it = kv.find(key);
    return it == kv.end() || it->second.empty() ? fallback : it->second;
}

int to_int(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("option --" + key + " expects an integer, got '" + s + "'");
    }
}

double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("option --" + key + " expects a number, got '" + s + "'");
    }
}

bool to_bool(const std::string& s, const std::string& key) {
    if (s == "1" || s == "true" || s == "yes") return true;
    if (s == "0" || s == "false" || s == "no") return false;
    throw ConfigError("option --" + key + " expects a boolean, got '" + s + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

pcode::SearchOptions search_options(const KV& kv) {
    pcode::SearchOptions opts;
    opts.seed = static_cast<std::uint64_t>(std::stoll(require(kv, "seed")));
    opts.restarts = to_int(get_or(kv, "restarts", "32"), "restarts");
    opts.max_iterations = to_int(get_or(kv, "iterations", "6000"), "iterations");
    if (kv.count("smoothing")) opts.smoothing = to_double(kv.at("smoothing"), "smoothing");
    try {
        opts.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return opts;
}

Json vector_to_json(const Eigen::VectorXd& v) {
    Json out = Json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

// Input-file problems (unreadable, unparsable, schema mismatch) are config
// errors, distinct from solver failures.
template <typename F>
auto load_input(const std::string& what, F&& loader) -> decltype(loader()) {
    try {
        return loader();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("cannot load " + what + ": " + e.what());
    }
}

// Command outputs embed their certificate under result.<key>; accept both
// those envelopes and bare files, so commands chain without extraction.
Json unwrap_result(const Json& j, const std::string& key) {
    if (j.is_object() && j.contains("result") && j.at("result").contains(key))
        return j.at("result").at(key);
    return j;
}

pcode::ProjectiveCode load_code_file(const std::string& path, bool strict = true) {
    return load_input("code file " + path, [&] {
        return pcode::code_from_json(unwrap_result(pcode::load_json_file(path), "code"), strict);
    });
}

pcode::FiniteMeasure load_measure_file(const std::string& path) {
    return load_input("measure file " + path, [&] {
        return pcode::measure_from_json(unwrap_result(pcode::load_json_file(path), "measure"));
    });
}

pcode::OddMapSpace load_map_spec(const std::string& spec) {
    // either a JSON file path or the inline forms sm:k / coords:d:n
    if (spec.rfind("sm:", 0) == 0) return pcode::sm_map(to_int(spec.substr(3), "map"));
    if (spec.rfind("coords:", 0) == 0) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3) throw ConfigError("map spec 'coords:d:n' malformed: " + spec);
        return pcode::coordinate_map(to_int(parts[1], "map"), to_int(parts[2], "map"));
    }
    return load_input("odd map file " + spec,
                      [&] { return pcode::oddmap_from_json(pcode::load_json_file(spec)); });
}

std::vector<pcode::Mass> load_masses(const KV& kv) {
    std::vector<pcode::Mass> masses;
    for (const auto& path : split(require(kv, "masses"), ','))
        masses.push_back(load_input("mass file " + path, [&] {
            return pcode::mass_from_csv(pcode::read_text_file(path));
        }));
    if (masses.empty()) throw ConfigError("--masses lists no files");
    return masses;
}

pcode::Graph load_graph_file(const std::string& path) {
    return load_input("graph file " + path,
                      [&] { return pcode::graph_from_text(pcode::read_text_file(path)); });
}

// ---- code commands ----

CommandOutput run_code_build(const KV& kv) {
    const std::string kind = require(kv, "kind");
    CommandOutput out;
    pcode::ProjectiveCode code;
    if (kind == "hypercube") {
        code = pcode::hypercube_code(to_int(require(kv, "d"), "d"));
    } else if (kind == "lattice") {
        auto info = pcode::lattice_code_info(to_int(require(kv, "d"), "d"),
                                             to_int(require(kv, "n"), "n"));
        code = info.code;
        out.result["shell_norm"] = info.shell_norm;
        out.result["point_count"] = info.point_count;
    } else if (kind == "600cell") {
        code = pcode::cell600_code();
    } else if (kind == "icosahedron") {
        code = pcode::icosahedron_code();
    } else if (kind == "circle") {
        code = pcode::circle_code(to_int(require(kv, "n"), "n"));
    } else {
        throw ConfigError("unknown code kind '" + kind + "'");
    }
    out.result["code"] = pcode::code_to_json(code);
    out.result["line_count"] = code.lines.size();
    out.result["min_distance"] = code.min_distance;
    out.result["thickening_scale"] = pcode::thickening_scale(code);

    const double recomputed = pcode::min_distance(code);
    out.verify["recomputed_min_distance"] = recomputed;
    out.verify["ok"] = std::abs(recomputed - code.min_distance) <= 1e-12;
    return out;
}

CommandOutput run_code_search(const KV& kv) {
    const int d = to_int(require(kv, "d"), "d");
    const int n = to_int(require(kv, "n"), "n");
    pcode::ProjectiveCode code = pcode::search_code(d, n, search_options(kv));
    CommandOutput out;
    out.result["code"] = pcode::code_to_json(code);
    out.result["min_distance"] = code.min_distance;
    out.result["thickening_scale"] = pcode::thickening_scale(code);
    const double recomputed = pcode::min_distance(code);
    out.verify["recomputed_min_distance"] = recomputed;
    out.verify["ok"] = std::abs(recomputed - code.min_distance) <= 1e-12;
    return out;
}

CommandOutput run_code_verify(const KV& kv) {
    pcode::ProjectiveCode code = load_code_file(require(kv, "in"), /*strict=*/false);
    const double recomputed = code.lines.size() >= 2 ? pcode::min_distance(code) : pcode::kPi / 2;
    CommandOutput out;
    out.result["cached_min_distance"] = code.min_distance;
    out.result["line_count"] = code.lines.size();
    out.verify["recomputed_min_distance"] = recomputed;
    out.verify["ok"] = std::abs(recomputed - code.min_distance) <= 1e-9;
    return out;
}

// ---- thicken commands ----

CommandOutput run_thicken_wasserstein(const KV& kv) {
    pcode::FiniteMeasure mu = load_measure_file(require(kv, "mu"));
    pcode::FiniteMeasure nu = load_measure_file(require(kv, "nu"));
    auto [cost, plan] = pcode::wasserstein1(mu, nu);
    CommandOutput out;
    out.result["cost"] = cost;
    Json flow = Json::array();
    for (int i = 0; i < plan.flow.rows(); ++i) flow.push_back(vector_to_json(plan.flow.row(i)));
    out.result["plan"] = std::move(flow);

    double marginal_err = 0.0;
    for (int i = 0; i < plan.flow.rows(); ++i)
        marginal_err = std::max(marginal_err, std::abs(plan.flow.row(i).sum() - mu.weights[i]));
    for (int j = 0; j < plan.flow.cols(); ++j)
        marginal_err = std::max(marginal_err, std::abs(plan.flow.col(j).sum() - nu.weights[j]));
    double dual = mu.weights.dot(plan.source_potential) + nu.weights.dot(plan.target_potential);
    out.verify["marginal_error"] = marginal_err;
    out.verify["duality_gap"] = std::abs(dual - cost);
    out.verify["ok"] = marginal_err <= 1e-9 && std::abs(dual - cost) <= 1e-9;
    return out;
}

CommandOutput run_thicken_crosspoly(const KV& kv) {
    pcode::ProjectiveCode code = load_code_file(require(kv, "code"));
    const auto parts = split(require(kv, "u"), ',');
    Eigen::VectorXd u(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) u[static_cast<int>(i)] = to_double(parts[i], "u");
    pcode::FiniteMeasure mu = pcode::crosspolytope_map(code, u);
    CommandOutput out;
    out.result["measure"] = pcode::measure_to_json(mu);
    out.result["support_diameter"] = pcode::support_diameter(mu);
    out.verify["diameter_bound"] = pcode::kPi - code.min_distance;
    out.verify["ok"] = pcode::support_diameter(mu) <= pcode::kPi - code.min_distance + 1e-9;
    return out;
}

CommandOutput run_thicken_covermap(const KV& kv) {
    pcode::FiniteMeasure mu = load_measure_file(require(kv, "measure"));
    pcode::ProjectiveCode centers = load_code_file(require(kv, "centers"), false);
    const double delta = to_double(require(kv, "delta"), "delta");
    Eigen::VectorXd f = pcode::covering_map(mu, centers.lines, delta);
    CommandOutput out;
    out.result["vector"] = vector_to_json(f);
    Eigen::VectorXd g = pcode::covering_map(pcode::antipode(mu), centers.lines, delta);
    out.verify["norm"] = f.norm();
    out.verify["oddness"] = (f + g).norm();
    out.verify["ok"] = std::abs(f.norm() - 1.0) <= 1e-9 && (f + g).norm() <= 1e-9;
    return out;
}

// ---- capture commands ----

CommandOutput run_capture_find(const KV& kv) {
    pcode::OddMapSpace f = load_map_spec(require(kv, "map"));
    const double delta = to_double(require(kv, "delta"), "delta");
    const double tol = to_double(get_or(kv, "tol", "1e-6"), "tol");
    pcode::CaptureResult r = pcode::find_zero_capture(f, delta, search_options(kv), tol);

    CommandOutput out;
    out.converged = r.success;
    out.result["success"] = r.success;
    out.result["certificate"] = pcode::captured_set_to_json(r.best, delta);
    out.result["winning_restart"] = r.winning_restart;
    out.result["restarts_run"] = r.restarts_run;

    // replay the certificate from atoms and weights alone
    double residual = 0.0, diameter = 0.0;
    if (!r.best.atoms.empty()) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(f.dim_codomain);
        for (std::size_t i = 0; i < r.best.atoms.size(); ++i)
            acc += r.best.weights[static_cast<int>(i)] * f.eval(r.best.atoms[i]);
        residual = acc.norm();
        diameter = r.best.atoms.size() > 1 ? pcode::set_diameter(r.best.atoms) : 0.0;
    }
    out.verify["replayed_residual"] = residual;
    out.verify["replayed_diameter"] = diameter;
    out.verify["ok"] = std::abs(residual - r.best.residual) <= 1e-9 &&
                       std::abs(diameter - r.best.diameter) <= 1e-9 &&
                       (!r.success || (residual <= tol && diameter <= delta + 1e-6));
    return out;
}

CommandOutput run_capture_sm_verify(const KV& kv) {
    const int k = to_int(require(kv, "k"), "k");
    const double diam = to_double(require(kv, "diam"), "diam");
    const int samples = to_int(get_or(kv, "samples", "200"), "samples");
    pcode::SmLemmaResult r = pcode::verify_sm_lemma(k, diam, samples);

    CommandOutput out;
    out.result["inside"] = r.certificate.inside;
    out.result["used_wrap_configuration"] = r.used_wrap_configuration;
    out.result["config_diameter"] = r.config_diameter;
    if (r.certificate.inside) {
        out.result["weights"] = vector_to_json(r.certificate.weights);
        out.result["residual"] = r.certificate.residual;
    } else {
        out.result["direction"] = vector_to_json(r.certificate.direction);
        out.result["margin"] = r.certificate.margin;
    }
    out.verify["ok"] = r.certificate.inside ? r.certificate.residual <= 1e-9
                                            : r.certificate.margin > 0.0;
    return out;
}

CommandOutput run_capture_lsb(const KV& kv) {
    const int d = to_int(get_or(kv, "d", "1"), "d");
    if (d != 1) throw ConfigError("capture lsb: only circle covers (d=1) are file-expressible");
    std::vector<pcode::CoverSet> cover;
    for (const auto& arc : split(require(kv, "arcs"), ',')) {
        const auto ends = split(arc, ':');
        if (ends.size() != 2) throw ConfigError("arc spec 'lo:hi' malformed: " + arc);
        cover.push_back(pcode::make_arc_cover(to_double(ends[0], "arcs"), to_double(ends[1], "arcs")));
    }
    pcode::LsbReport r = pcode::lsb_witness(cover, d, search_options(kv));

    CommandOutput out;
    out.result["threshold"] = r.threshold;
    bool ok = true;
    switch (r.kind) {
        case pcode::LsbReport::Kind::AntipodalWitness: {
            out.result["kind"] = "antipodal_witness";
            out.result["set_index"] = r.set_index;
            out.result["witness_angle"] = pcode::circle_angle(r.witness);
            ok = cover[r.set_index].contains(r.witness) &&
                 cover[r.set_index].contains(pcode::antipode(r.witness));
            break;
        }
        case pcode::LsbReport::Kind::HypothesisViolation: {
            out.result["kind"] = "hypothesis_violation";
            out.result["violating_diameter"] = r.violating_diameter;
            Json angles = Json::array();
            for (const auto& p : r.violating_subset) angles.push_back(pcode::circle_angle(p));
            out.result["violating_subset_angles"] = std::move(angles);
            for (const auto& set : cover) {
                bool all = true;
                for (const auto& p : r.violating_subset)
                    if (!set.contains(p)) {
                        all = false;
                        break;
                    }
                if (all) ok = false; // some set does contain it: not a violation
            }
            ok = ok && r.violating_diameter <= r.threshold + 1e-9;
            break;
        }
        default:
            out.result["kind"] = "inconclusive";
            out.converged = false;
            break;
    }
    out.verify["ok"] = ok;
    return out;
}

// ---- partition commands ----

CommandOutput run_partition_ham(const KV& kv) {
    const auto masses = load_masses(kv);
    pcode::HamResult r = pcode::solve_ham_sandwich(masses, search_options(kv));
    CommandOutput out;
    out.converged = r.success;
    out.result["success"] = r.success;
    out.result["direction"] = vector_to_json(r.direction);
    out.result["residuals"] = vector_to_json(r.residuals);
    out.result["tolerance"] = r.tolerance;
    double worst = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) {
        const double replay = pcode::bisection_residual(masses[i], r.direction);
        worst = std::max(worst, std::abs(replay - r.residuals[static_cast<int>(i)]));
    }
    out.verify["replay_error"] = worst;
    out.verify["ok"] = worst <= 1e-9;
    return out;
}

CommandOutput run_partition_halving(const KV& kv) {
    const auto masses = load_masses(kv);
    const double delta = to_double(require(kv, "delta"), "delta");
    pcode::HalvingResult r = pcode::halving_directions(masses, delta, search_options(kv));
    CommandOutput out;
    out.converged = r.success;
    out.result["success"] = r.success;
    out.result["diameter"] = r.diameter;
    out.result["capture_residual"] = r.capture_residual;
    out.result["tolerance"] = r.tolerance;
    Json dirs = Json::array();
    for (const auto& p : r.directions) dirs.push_back(vector_to_json(p.coords));
    out.result["directions"] = std::move(dirs);
    out.result["weights"] = vector_to_json(r.weights);
    Json wit = Json::array();
    for (auto [lo, hi] : r.witnesses) wit.push_back(Json::array({lo, hi}));
    out.result["witnesses"] = std::move(wit);

    bool ok = true;
    for (std::size_t i = 0; i < masses.size() && i < r.witnesses.size(); ++i) {
        const auto [lo, hi] = r.witnesses[i];
        const double rlo = pcode::bisection_residual(masses[i], r.directions[lo].coords);
        const double rhi = pcode::bisection_residual(masses[i], r.directions[hi].coords);
        if (rlo > r.tolerance || rhi < -r.tolerance) ok = false;
    }
    out.verify["ok"] = ok || !r.success;
    return out;
}

CommandOutput run_partition_logs(const KV& kv) {
    const auto masses = load_masses(kv);
    const double delta = to_double(require(kv, "delta"), "delta");
    const bool affine = to_bool(get_or(kv, "affine", "false"), "affine");
    pcode::LogBundleResult r = pcode::solve_log_bundle(masses, delta, search_options(kv), affine);
    CommandOutput out;
    out.converged = r.success;
    out.result["success"] = r.success;
    out.result["partition"] = pcode::partition_to_json(r.partition);
    out.result["direction_diameter"] = r.direction_diameter;
    out.result["tolerance"] = r.tolerance;

    if (r.partition.directions.empty()) {
        out.verify["ok"] = !r.success;
        return out;
    }
    Eigen::VectorXd replay = pcode::verify_partition(masses, r.partition);
    out.verify["replayed_residuals"] = vector_to_json(replay);
    const double err = (replay - r.partition.residuals).cwiseAbs().maxCoeff();
    out.verify["replay_error"] = err;
    out.verify["ok"] = err <= 1e-9;
    return out;
}

CommandOutput run_partition_verify(const KV& kv) {
    const auto masses = load_masses(kv);
    pcode::LogPartition part = load_input("partition file", [&] {
        return pcode::partition_from_json(
            unwrap_result(pcode::load_json_file(require(kv, "partition")), "partition"));
    });
    Eigen::VectorXd res = pcode::verify_partition(masses, part);
    CommandOutput out;
    out.result["residuals"] = vector_to_json(res);
    out.result["max_abs_residual"] = res.cwiseAbs().maxCoeff();
    out.verify["ok"] = true; // this command *is* the verification
    return out;
}

// ---- boxc commands ----

CommandOutput run_boxc_build(const KV& kv) {
    pcode::Graph g = load_graph_file(require(kv, "graph"));
    pcode::SignedComplex k = pcode::box_complex(g);
    CommandOutput out;
    out.result["complex"] = pcode::complex_to_json(k);
    out.result["maximal_face_count"] = k.maximal_faces.size();
    out.verify["z2_closed"] = pcode::z2_closed(k);
    out.verify["ok"] = pcode::z2_closed(k);
    return out;
}

CommandOutput run_boxc_suspcheck(const KV& kv) {
    pcode::Graph g = load_graph_file(require(kv, "graph"));
    pcode::SignedComplex lhs = pcode::box_complex(pcode::cone_graph(g));
    pcode::SignedComplex rhs = pcode::suspension(pcode::box_complex(g));
    const bool equal = pcode::complexes_equal(lhs, rhs);
    CommandOutput out;
    out.result["equal"] = equal;
    out.result["cone_faces"] = lhs.maximal_faces.size();
    out.result["suspension_faces"] = rhs.maximal_faces.size();
    out.verify["ok"] = equal;
    return out;
}

CommandOutput run_boxc_chromatic(const KV& kv) {
    pcode::Graph g = load_graph_file(require(kv, "graph"));
    pcode::CircularColoring c = pcode::circular_chromatic_estimate(g, search_options(kv));
    CommandOutput out;
    out.result["positions"] = c.positions;
    out.result["quality"] = c.quality;
    out.result["rate"] = c.rate;
    const double replay = pcode::coloring_quality(g, c.positions);
    out.verify["replayed_quality"] = replay;
    out.verify["ok"] = std::abs(replay - c.quality) <= 1e-12;
    return out;
}

CommandOutput run_boxc_cone_extend(const KV& kv) {
    pcode::Graph g = load_graph_file(require(kv, "graph"));
    pcode::CircularColoring f = load_input("coloring file", [&] {
        Json j = pcode::load_json_file(require(kv, "coloring"));
        if (j.is_object() && j.contains("result") && j.at("result").contains("positions"))
            j = j.at("result");
        return pcode::make_coloring(g, j.at("positions").get<std::vector<double>>());
    });
    pcode::CircularColoring ext = pcode::extend_coloring_to_cone(g, f);
    const double target_rate = f.rate + 1.0;

    CommandOutput out;
    out.result["input_rate"] = f.rate;
    out.result["target_rate"] = target_rate;
    out.result["positions"] = ext.positions;
    out.result["quality"] = ext.quality;
    out.result["rate"] = ext.rate;
    const bool valid = pcode::coloring_valid_at_rate(pcode::cone_graph(g), ext, target_rate);
    out.result["meets_target"] = valid;
    out.verify["ok"] = valid;
    return out;
}

CommandOutput run_boxc_st_bound(const KV& kv) {
    const int l = to_int(require(kv, "coindex"), "coindex");
    const bool cone = to_bool(get_or(kv, "cone", "false"), "cone");
    CommandOutput out;
    out.result["coindex_lower_bound"] = l;
    out.result["cone"] = cone;
    out.result["chromatic_lower_bound"] = pcode::simonyi_tardos_bound(l, cone);
    out.verify["ok"] = true;
    return out;
}

// ---- dispatch ----

CommandOutput dispatch(const std::string& command, const KV& kv) {
    if (command == "code.build") return run_code_build(kv);
    if (command == "code.search") return run_code_search(kv);
    if (command == "code.verify") return run_code_verify(kv);
    if (command == "thicken.wasserstein") return run_thicken_wasserstein(kv);
    if (command == "thicken.crosspoly") return run_thicken_crosspoly(kv);
    if (command == "thicken.covermap") return run_thicken_covermap(kv);
    if (command == "capture.find") return run_capture_find(kv);
    if (command == "capture.sm-verify") return run_capture_sm_verify(kv);
    if (command == "capture.lsb") return run_capture_lsb(kv);
    if (command == "partition.ham") return run_partition_ham(kv);
    if (command == "partition.halving") return run_partition_halving(kv);
    if (command == "partition.logs") return run_partition_logs(kv);
    if (command == "partition.verify") return run_partition_verify(kv);
    if (command == "boxc.build") return run_boxc_build(kv);
    if (command == "boxc.suspcheck") return run_boxc_suspcheck(kv);
    if (command == "boxc.chromatic") return run_boxc_chromatic(kv);
    if (command == "boxc.cone-extend") return run_boxc_cone_extend(kv);
    if (command == "boxc.st-bound") return run_boxc_st_bound(kv);
    throw ConfigError("unknown command '" + command + "'");
}

std::string now_utc() {
    char buf[32];
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json make_envelope(const std::string& command, const KV& kv, const CommandOutput& out) {
    Json env;
    env["command"] = command;
    env["version"] = pcode::kVersion;
    Json cfg;
    for (const auto& [k, v] : kv)
        if (k != "out") cfg[k] = v; // the output path is not part of the experiment
    env["config"] = std::move(cfg);
    env["result"] = out.result;
    env["verify"] = out.verify;
    env["repro_hash"] = pcode::fnv1a_hex(pcode::dump_json(env));
    env["timestamp"] = now_utc();
    return env;
}

int run_command(const std::string& command, const KV& kv) {
    CommandOutput out;
    try {
        out = dispatch(command, kv);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    const Json env = make_envelope(command, kv, out);
    const std::string text = pcode::dump_json(env);
    const auto it = kv.find("out");
    if (it != kv.end() && !it->second.empty()) {
        pcode::write_text_file(it->second, text);
        std::printf("%s: wrote %s\n", command.c_str(), it->second.c_str());
    } else {
        std::fputs(text.c_str(), stdout);
    }
    if (!env["verify"].value("ok", false)) {
        std::fprintf(stderr, "%s: certificate verification FAILED\n", command.c_str());
        return 3;
    }
    if (!out.converged) {
        std::fprintf(stderr, "%s: solver did not converge (inconclusive)\n", command.c_str());
        return 1;
    }
    return 0;
}

// flatten scalar result fields (one level deep) into sweep CSV columns
void flatten_result(const Json& result, const std::string& prefix,
                    std::map<std::string, std::string>& row) {
    for (auto it = result.begin(); it != result.end(); ++it) {
        const Json& v = it.value();
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (v.is_number_float())
            row[key] = pcode::format_double(v.get<double>());
        else if (v.is_number_integer())
            row[key] = std::to_string(v.get<long long>());
        else if (v.is_boolean())
            row[key] = v.get<bool>() ? "true" : "false";
        else if (v.is_string())
            row[key] = v.get<std::string>();
        else if (v.is_object() && prefix.empty())
            flatten_result(v, it.key(), row);
    }
}

int run_sweep(const KV& base, const std::string& param, double from, double to, double step,
              const std::string& out_path) {
    if (param.empty() || step <= 0.0 || to < from) {
        std::fprintf(stderr, "config error: sweep needs --param and a nonempty grid\n");
        return 2;
    }
    auto cmd_it = base.find("command");
    if (cmd_it == base.end()) {
        std::fprintf(stderr, "config error: sweep config must set command=<group.sub>\n");
        return 2;
    }
    const std::string command = cmd_it->second;

    std::vector<std::map<std::string, std::string>> rows;
    int exit_worst = 0;
    for (int i = 0;; ++i) {
        const double value = from + i * step;
        if (value > to + 1e-12) break;
        KV kv = base;
        kv.erase("command");
        kv.erase("out");
        kv[param] = pcode::format_double(value);
        std::map<std::string, std::string> row;
        row[param] = pcode::format_double(value);
        try {
            CommandOutput out = dispatch(command, kv);
            flatten_result(out.result, "", row);
            row["verify_ok"] = out.verify.value("ok", false) ? "true" : "false";
            if (!out.converged) exit_worst = std::max(exit_worst, 1);
        } catch (const ConfigError& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        } catch (const std::invalid_argument& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        } catch (const std::exception& e) {
            row["error"] = e.what();
            exit_worst = std::max(exit_worst, 1);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        std::fprintf(stderr, "config error: sweep grid is empty\n");
        return 2;
    }

    std::vector<std::string> columns = {param};
    for (const auto& row : rows)
        for (const auto& [k, v] : row)
            if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    std::ostringstream csv;
    for (std::size_t c = 0; c < columns.size(); ++c)
        csv << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            const auto it = row.find(columns[c]);
            csv << (it == row.end() ? "" : it->second) << (c + 1 < columns.size() ? "," : "\n");
        }
    }
    if (!out_path.empty()) {
        pcode::write_text_file(out_path, csv.str());
        std::printf("sweep %s: wrote %zu rows to %s\n", command.c_str(), rows.size(),
                    out_path.c_str());
    } else {
        std::fputs(csv.str().c_str(), stdout);
    }
    return exit_worst;
}

KV parse_config_file(const std::string& path) {
    KV kv;
    std::istringstream in(pcode::read_text_file(path));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file: expected key=value, got '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

struct Leaf {
    CLI::App* app = nullptr;
    std::string command;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"projective codes, sphere thickenings, origin capture, mass partition"};
    app.require_subcommand(0, 1);
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value config file; flags override");

    // every leaf option is collected as a string and validated at dispatch
    const std::map<std::string, std::vector<std::string>> leaf_specs = {
        {"code.build", {"kind", "d", "n", "out"}},
        {"code.search", {"d", "n", "seed", "restarts", "iterations", "smoothing", "out"}},
        {"code.verify", {"in", "out"}},
        {"thicken.wasserstein", {"mu", "nu", "out"}},
        {"thicken.crosspoly", {"code", "u", "out"}},
        {"thicken.covermap", {"measure", "centers", "delta", "out"}},
        {"capture.find", {"map", "delta", "tol", "seed", "restarts", "iterations", "out"}},
        {"capture.sm-verify", {"k", "diam", "samples", "out"}},
        {"capture.lsb", {"d", "arcs", "seed", "restarts", "iterations", "out"}},
        {"partition.ham", {"masses", "seed", "restarts", "iterations", "out"}},
        {"partition.halving", {"masses", "delta", "seed", "restarts", "iterations", "out"}},
        {"partition.logs", {"masses", "delta", "affine", "seed", "restarts", "iterations", "out"}},
        {"partition.verify", {"masses", "partition", "out"}},
        {"boxc.build", {"graph", "out"}},
        {"boxc.suspcheck", {"graph", "out"}},
        {"boxc.chromatic", {"graph", "seed", "restarts", "iterations", "out"}},
        {"boxc.cone-extend", {"graph", "coloring", "out"}},
        {"boxc.st-bound", {"coindex", "cone", "out"}},
    };

    std::map<std::string, CLI::App*> groups;
    std::vector<Leaf> leaves;
    leaves.reserve(leaf_specs.size());
    for (const auto& [command, keys] : leaf_specs) {
        const auto dot = command.find('.');
        const std::string group = command.substr(0, dot);
        const std::string sub = command.substr(dot + 1);
        if (!groups.count(group)) {
            groups[group] = app.add_subcommand(group, "");
            groups[group]->require_subcommand(1);
            groups[group]->fallthrough();
        }
        Leaf leaf;
        leaf.command = command;
        leaf.app = groups[group]->add_subcommand(sub, "");
        leaf.app->fallthrough();
        leaves.push_back(std::move(leaf));
        Leaf& stored = leaves.back();
        for (const auto& key : keys)
            stored.options[key] = stored.app->add_option("--" + key, stored.values[key], "");
    }

    // sweep: base command and options come from the config file; one key is
    // varied over the grid
    CLI::App* sweep = app.add_subcommand("sweep", "run a command over a parameter grid");
    sweep->fallthrough();
    std::string sweep_param, sweep_out;
    double sweep_from = 0.0, sweep_to = 0.0, sweep_step = 0.0;
    sweep->add_option("--param", sweep_param, "config key to vary");
    sweep->add_option("--from", sweep_from, "");
    sweep->add_option("--to", sweep_to, "");
    sweep->add_option("--step", sweep_step, "");
    sweep->add_option("--out", sweep_out, "CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    KV file_kv;
    if (!config_path.empty()) {
        try {
            file_kv = parse_config_file(config_path);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        }
    }

    if (sweep->parsed()) return run_sweep(file_kv, sweep_param, sweep_from, sweep_to, sweep_step,
                                          sweep_out);

    for (const auto& leaf : leaves) {
        if (!leaf.app->parsed()) continue;
        KV kv = file_kv;
        kv.erase("command");
        for (const auto& [key, opt] : leaf.options)
            if (opt->count() > 0) kv[key] = leaf.values.at(key);
        return run_command(leaf.command, kv);
    }

    // no subcommand: a config file may name the command
    if (file_kv.count("command")) {
        KV kv = file_kv;
        const std::string command = kv["command"];
        kv.erase("command");
        return run_command(command, kv);
    }
    std::fprintf(stderr, "config error: no command given (see --help)\n");
    return 2;
}
