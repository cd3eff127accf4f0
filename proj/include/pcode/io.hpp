#pragma once

// File formats shared by the CLI and tests: JSON for codes, measures, odd
// maps, capture certificates, complexes, and partitions; CSV for masses;
// edge lists for graphs. Floats are emitted with 17 significant digits so
// every value round-trips bit-exactly, and the writer is deterministic
// (fixed key order), which makes whole output files hashable.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcode/boxcomplex.hpp"
#include "pcode/capture.hpp"
#include "pcode/code.hpp"
#include "pcode/measure.hpp"
#include "pcode/oddmap.hpp"
#include "pcode/partition.hpp"

namespace pcode {

using Json = nlohmann::ordered_json;

// 17 significant digits: enough to reproduce any double exactly on reload.
inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Deterministic writer. nlohmann's own dump() would shorten floats, so
// numbers are formatted here and everything else is delegated.
inline void dump_json(const Json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad_in + Json(it.key()).dump() + ": ";
            dump_json(it.value(), out, indent, depth + 1);
        }
        out += "\n" + pad + "}";
    } else if (j.is_array()) {
        if (j.empty()) {
            out += "[]";
            return;
        }
        bool scalars = true;
        for (const auto& v : j)
            if (v.is_object() || v.is_array()) scalars = false;
        if (scalars) {
            out += "[";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ", ";
                first = false;
                dump_json(v, out, indent, depth + 1);
            }
            out += "]";
        } else {
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                dump_json(v, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
        }
    } else if (j.is_number_float()) {
        out += format_double(j.get<double>());
    } else {
        out += j.dump();
    }
}

inline std::string dump_json(const Json& j, int indent = 2) {
    std::string out;
    dump_json(j, out, indent, 0);
    out += "\n";
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << text;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline Json load_json_file(const std::string& path) {
    return Json::parse(read_text_file(path));
}

// FNV-1a over a canonical serialization; used for the reproducibility hash.
inline std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

// ---- codes: {"d": int, "lines": [[...]], "min_distance": float} ----

inline Json code_to_json(const ProjectiveCode& code) {
    Json j;
    j["d"] = code.dim;
    Json lines = Json::array();
    for (const auto& x : code.lines) {
        Json row = Json::array();
        for (int i = 0; i < x.coords.size(); ++i) row.push_back(x.coords[i]);
        lines.push_back(std::move(row));
    }
    j["lines"] = std::move(lines);
    j["min_distance"] = code.min_distance;
    return j;
}

inline ProjectiveCode code_from_json(const Json& j, bool strict = true) {
    ProjectiveCode code;
    code.dim = j.at("d").get<int>();
    for (const auto& row : j.at("lines")) {
        Eigen::VectorXd v(row.size());
        for (std::size_t i = 0; i < row.size(); ++i) v[static_cast<int>(i)] = row[i].get<double>();
        code.lines.emplace_back(std::move(v));
        if (code.lines.back().dim != code.dim)
            throw std::invalid_argument("code file: line dimension disagrees with d");
    }
    code.min_distance = j.at("min_distance").get<double>();
    if (strict && code.lines.size() >= 2 &&
        std::abs(code.min_distance - min_distance(code)) > 1e-9)
        throw std::invalid_argument("code file: cached min_distance fails recomputation");
    return code;
}

// ---- measures: {"d": int, "atoms": [[...]], "weights": [...]} ----

inline Json measure_to_json(const FiniteMeasure& mu) {
    Json j;
    j["d"] = mu.dim;
    Json atoms = Json::array();
    for (const auto& a : mu.atoms) {
        Json row = Json::array();
        for (int i = 0; i < a.coords.size(); ++i) row.push_back(a.coords[i]);
        atoms.push_back(std::move(row));
    }
    j["atoms"] = std::move(atoms);
    Json w = Json::array();
    for (int i = 0; i < mu.weights.size(); ++i) w.push_back(mu.weights[i]);
    j["weights"] = std::move(w);
    return j;
}

inline FiniteMeasure measure_from_json(const Json& j) {
    std::vector<SpherePoint> atoms;
    std::vector<double> weights;
    for (const auto& row : j.at("atoms")) {
        Eigen::VectorXd v(row.size());
        for (std::size_t i = 0; i < row.size(); ++i) v[static_cast<int>(i)] = row[i].get<double>();
        atoms.emplace_back(std::move(v));
    }
    for (const auto& w : j.at("weights")) weights.push_back(w.get<double>());
    FiniteMeasure mu = make_measure(std::move(atoms), std::move(weights));
    if (mu.dim != j.at("d").get<int>())
        throw std::invalid_argument("measure file: atom dimension disagrees with d");
    return mu;
}

// ---- odd maps: polynomial components or {"builtin": "sm", "k": int} ----

inline Json oddmap_to_json(const OddMapSpace& f) {
    Json j;
    if (f.is_sm) {
        j["builtin"] = "sm";
        j["k"] = f.sm_k;
        return j;
    }
    j["d"] = f.dim_domain;
    j["n"] = f.dim_codomain;
    Json comps = Json::array();
    for (const auto& comp : f.components) {
        Json jc;
        Json monos = Json::array();
        for (const auto& m : comp.monomials) {
            Json jm;
            jm["exps"] = m.exps;
            jm["coef"] = m.coef;
            monos.push_back(std::move(jm));
        }
        jc["monomials"] = std::move(monos);
        comps.push_back(std::move(jc));
    }
    j["components"] = std::move(comps);
    return j;
}

inline OddMapSpace oddmap_from_json(const Json& j) {
    if (j.contains("builtin")) {
        if (j.at("builtin").get<std::string>() != "sm")
            throw std::invalid_argument("odd map file: unknown builtin");
        return sm_map(j.at("k").get<int>());
    }
    OddMapSpace f;
    f.dim_domain = j.at("d").get<int>();
    f.dim_codomain = j.at("n").get<int>();
    for (const auto& jc : j.at("components")) {
        PolyComponent comp;
        for (const auto& jm : jc.at("monomials")) {
            Monomial m;
            m.exps = jm.at("exps").get<std::vector<int>>();
            if (static_cast<int>(m.exps.size()) != f.dim_domain + 1)
                throw std::invalid_argument("odd map file: exponent arity mismatch");
            int total = 0;
            for (int e : m.exps) total += e;
            if (total % 2 == 0)
                throw std::invalid_argument("odd map file: even-degree monomial breaks oddness");
            m.coef = jm.at("coef").get<double>();
            comp.monomials.push_back(std::move(m));
        }
        f.components.push_back(std::move(comp));
    }
    if (static_cast<int>(f.components.size()) != f.dim_codomain)
        throw std::invalid_argument("odd map file: component count disagrees with n");
    return f;
}

// ---- capture certificates ----

inline Json captured_set_to_json(const CapturedSet& cert, double delta) {
    Json j;
    Json atoms = Json::array();
    for (const auto& a : cert.atoms) {
        Json row = Json::array();
        for (int i = 0; i < a.coords.size(); ++i) row.push_back(a.coords[i]);
        atoms.push_back(std::move(row));
    }
    j["atoms"] = std::move(atoms);
    Json w = Json::array();
    for (int i = 0; i < cert.weights.size(); ++i) w.push_back(cert.weights[i]);
    j["weights"] = std::move(w);
    j["diameter"] = cert.diameter;
    j["residual"] = cert.residual;
    j["delta"] = delta;
    return j;
}

// ---- masses: CSV, coordinates then weight, one atom per row ----

inline std::string mass_to_csv(const Mass& m) {
    std::ostringstream out;
    for (int c = 0; c < m.points.cols(); ++c) out << "x" << c + 1 << ",";
    out << "weight\n";
    for (int i = 0; i < m.points.rows(); ++i) {
        for (int c = 0; c < m.points.cols(); ++c) out << format_double(m.points(i, c)) << ",";
        out << format_double(m.weights[i]) << "\n";
    }
    return out.str();
}

inline Mass mass_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("mass csv: empty file");
    int cols = 1;
    for (char c : line)
        if (c == ',') ++cols;
    if (cols < 2) throw std::invalid_argument("mass csv: need coordinates and a weight column");

    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (static_cast<int>(row.size()) != cols)
            throw std::invalid_argument("mass csv: ragged row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("mass csv: no atoms");
    Eigen::MatrixXd pts(rows.size(), cols - 1);
    Eigen::VectorXd w(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int c = 0; c < cols - 1; ++c) pts(static_cast<int>(i), c) = rows[i][c];
        w[static_cast<int>(i)] = rows[i][cols - 1];
    }
    return make_mass(std::move(pts), std::move(w));
}

// ---- graphs: "u v" per line, 1-indexed; "n N" declares isolated vertices ----

inline std::string graph_to_text(const Graph& g) {
    int covered = 0;
    for (auto [u, v] : g.edges) covered = std::max({covered, u, v});
    std::ostringstream out;
    if (covered < g.n) out << "n " << g.n << "\n"; // isolated vertices need the count
    for (auto [u, v] : g.edges) out << u << " " << v << "\n";
    return out.str();
}

inline Graph graph_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string a;
        ls >> a;
        if (a == "n") {
            ls >> n;
            continue;
        }
        int u = std::stoi(a), v = 0;
        if (!(ls >> v)) throw std::invalid_argument("graph file: expected 'u v' pairs");
        edges.emplace_back(u, v);
        n = std::max({n, u, v});
    }
    if (n == 0) throw std::invalid_argument("graph file: no vertices");
    return make_graph(n, std::move(edges));
}

// ---- complexes: bare JSON list of maximal faces as signed arrays ----

inline Json complex_to_json(const SignedComplex& k) {
    SignedComplex canon = k;
    detail::canonicalize_faces(canon);
    Json faces = Json::array();
    for (const auto& f : canon.maximal_faces) faces.push_back(f);
    return faces;
}

inline SignedComplex complex_from_json(const Json& j) {
    SignedComplex k;
    for (const auto& row : j) {
        std::vector<int> face = row.get<std::vector<int>>();
        for (int v : face) {
            if (v == 0) throw std::invalid_argument("complex file: vertex 0 is not signed");
            k.n = std::max(k.n, std::abs(v));
        }
        k.maximal_faces.push_back(std::move(face));
    }
    detail::canonicalize_faces(k);
    return k;
}

// ---- log partitions ----

inline Json partition_to_json(const LogPartition& part) {
    Json j;
    j["times"] = Json::array();
    for (double t : part.times) j["times"].push_back(t);
    Json dirs = Json::array();
    for (const auto& p : part.directions) {
        Json row = Json::array();
        for (int i = 0; i < p.size(); ++i) row.push_back(p[i]);
        dirs.push_back(std::move(row));
    }
    j["directions"] = std::move(dirs);
    j["affine_lift"] = part.affine_lift;
    Json res = Json::array();
    for (int i = 0; i < part.residuals.size(); ++i) res.push_back(part.residuals[i]);
    j["residuals"] = std::move(res);
    return j;
}

inline LogPartition partition_from_json(const Json& j) {
    LogPartition part;
    for (const auto& t : j.at("times")) part.times.push_back(t.get<double>());
    for (const auto& row : j.at("directions")) {
        Eigen::VectorXd p(row.size());
        for (std::size_t i = 0; i < row.size(); ++i) p[static_cast<int>(i)] = row[i].get<double>();
        part.directions.push_back(std::move(p));
    }
    part.affine_lift = j.value("affine_lift", false);
    if (j.contains("residuals")) {
        part.residuals.resize(static_cast<int>(j.at("residuals").size()));
        for (int i = 0; i < part.residuals.size(); ++i)
            part.residuals[i] = j.at("residuals")[static_cast<std::size_t>(i)].get<double>();
    }
    return part;
}

} // namespace pcode
