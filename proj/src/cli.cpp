#include "sympsturm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace sympsturm {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw InputError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw InputError(where + ": unknown field '" + it.key() + "'");
}

const Json& require(const Json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
    return j.at(key);
}

std::string join(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

int get_int(const Json& j, const std::string& name, int lo, int hi) {
    if (!j.is_number_integer()) throw InputError(name + ": expected an integer");
    long v = j.get<long>();
    if (v < lo || v > hi)
        throw InputError(name + ": must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
}

double get_double(const Json& j, const std::string& name) {
    if (!j.is_number()) throw InputError(name + ": expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) throw InputError(name + ": must be finite");
    return v;
}

double get_positive(const Json& j, const std::string& name) {
    double v = get_double(j, name);
    if (!(v > 0.0)) throw InputError(name + ": must be positive");
    return v;
}

Json norm_matrix(const Json& j, const std::string& name, int rows = -1, int cols = -1, bool symmetric = false) {
    Mat M = mat_from_json(j, name);
    if ((rows >= 0 && M.rows() != rows) || (cols >= 0 && M.cols() != cols))
        throw InputError(name + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                         std::to_string(M.rows()) + "x" + std::to_string(M.cols()));
    if (symmetric && max_abs(M - M.transpose()) > 1e-12 * std::max(1.0, max_abs(M)))
        throw InputError(name + ": matrix must be symmetric");
    return mat_to_json(M);
}

Json norm_coefficients(const Json& j, const std::string& name, int rows, int cols, bool symmetric) {
    if (j.is_object() && !j.contains("rows")) {
        if (j.size() != 1) throw InputError(name + ": exactly one of constant, poly, samples");
        if (j.contains("constant")) return Json{{"constant", norm_matrix(j["constant"], join(name, "constant"), rows, cols, symmetric)}};
        if (j.contains("poly")) {
            const Json& p = j["poly"];
            if (!p.is_array() || p.empty()) throw InputError(name + ".poly: expected a nonempty array");
            Json out = Json::array();
            for (size_t k = 0; k < p.size(); ++k)
                out.push_back(norm_matrix(p[k], name + ".poly[" + std::to_string(k) + "]", rows, cols, symmetric));
            return Json{{"poly", out}};
        }
        if (j.contains("samples")) {
            const Json& s = j["samples"];
            check_keys(s, {"t", "values"}, join(name, "samples"));
            const Json& t = require(s, "t", join(name, "samples"));
            const Json& v = require(s, "values", join(name, "samples"));
            if (!t.is_array() || !v.is_array() || t.size() < 2 || t.size() != v.size())
                throw InputError(name + ".samples: t and values must be arrays of equal length >= 2");
            Json tt = Json::array(), vv = Json::array();
            for (size_t k = 0; k < t.size(); ++k) {
                double tk = get_double(t[k], name + ".samples.t[" + std::to_string(k) + "]");
                if (k > 0 && !(tk > tt.back().get<double>()))
                    throw InputError(name + ".samples.t: must be strictly increasing");
                tt.push_back(tk);
                vv.push_back(norm_matrix(v[k], name + ".samples.values[" + std::to_string(k) + "]", rows, cols, symmetric));
            }
            return Json{{"samples", {{"t", tt}, {"values", vv}}}};
        }
        throw InputError(name + ": unknown coefficient form '" + j.begin().key() + "'");
    }
    return Json{{"constant", norm_matrix(j, name, rows, cols, symmetric)}};
}

Json norm_hamiltonian(const Json& j, const std::string& where) {
    check_keys(j, {"n", "T", "B"}, where);
    const int n = get_int(require(j, "n", where), join(where, "n"), 1, 8);
    const double T = get_positive(require(j, "T", where), join(where, "T"));
    Json B = norm_coefficients(require(j, "B", where), join(where, "B"), 2 * n, 2 * n, true);
    if (B.contains("samples")) {
        const Json& t = B["samples"]["t"];
        if (t.front().get<double>() > 0.0 || t.back().get<double>() < T)
            throw InputError(join(where, "B") + ".samples: must cover [0, T]");
    }
    return Json{{"n", n}, {"T", T}, {"B", B}};
}

Json norm_flow(const Json& j, const std::string& where) {
    check_keys(j, {"hamiltonian", "rotation"}, where);
    if (j.size() != 1) throw InputError(where + ": exactly one of hamiltonian, rotation");
    if (j.contains("hamiltonian")) return Json{{"hamiltonian", norm_hamiltonian(j["hamiltonian"], join(where, "hamiltonian"))}};
    const Json& r = j["rotation"];
    const std::string w = join(where, "rotation");
    check_keys(r, {"n", "T", "speed"}, w);
    const int n = get_int(require(r, "n", w), join(w, "n"), 1, 8);
    const double T = get_positive(require(r, "T", w), join(w, "T"));
    const double speed = r.contains("speed") ? get_double(r["speed"], join(w, "speed")) : 1.0;
    return Json{{"rotation", {{"n", n}, {"T", T}, {"speed", speed}}}};
}

int flow_n(const Json& f) { return f.contains("hamiltonian") ? f["hamiltonian"]["n"].get<int>() : f["rotation"]["n"].get<int>(); }

Json norm_lagrangian(const Json& j, const std::string& name, int n, int ambient = 1) {
    Json out = norm_matrix(j, name, 2 * n * ambient, n * ambient);
    SymplecticSpace space = standard_space(n);
    if (ambient == 2) space = double_space(space);
    require_lagrangian(space, mat_from_json(out, name), name.c_str());
    return out;
}

Json norm_boundary(const Json& j, const std::string& where, int n) {
    if (!j.is_object()) throw InputError(where + ": expected an object");
    if (j.contains("frame")) {
        check_keys(j, {"frame"}, where);
        return Json{{"frame", norm_lagrangian(j["frame"], join(where, "frame"), n, 2)}};
    }
    const Json& kind = require(j, "kind", where);
    if (!kind.is_string()) throw InputError(join(where, "kind") + ": expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "dirichlet" || k == "neumann" || k == "periodic") {
        check_keys(j, {"kind"}, where);
        return Json{{"kind", k}};
    }
    if (k == "separated") {
        check_keys(j, {"kind", "Z1", "Z2"}, where);
        return Json{{"kind", k},
                    {"Z1", norm_matrix(require(j, "Z1", where), join(where, "Z1"), n)},
                    {"Z2", norm_matrix(require(j, "Z2", where), join(where, "Z2"), n)}};
    }
    if (k == "general") {
        check_keys(j, {"kind", "basis"}, where);
        return Json{{"kind", k}, {"basis", norm_matrix(require(j, "basis", where), join(where, "basis"), 2 * n)}};
    }
    throw InputError(join(where, "kind") + ": unknown boundary kind '" + k + "'");
}

Json norm_interval(const Json& j, const std::string& name) {
    if (!j.is_array() || j.size() != 2) throw InputError(name + ": expected [a, b]");
    double a = get_double(j[0], name + "[0]"), b = get_double(j[1], name + "[1]");
    if (!(b > a)) throw InputError(name + ": needs a < b");
    return Json{a, b};
}

Json normalize(const Json& j, const std::string& cmd) {
    Json out;
    out["schema"] = kProblemSchema;
    out["command"] = cmd;
    auto keys = [&](std::set<std::string> k) {
        k.insert("schema");
        k.insert("command");
        check_keys(j, k, "problem");
    };
    if (cmd == "clm" || cmd == "rs") {
        keys({"reference", "path"});
        const Json& p = require(j, "path", "problem");
        check_keys(p, {"flow", "frame"}, "path");
        Json flow = norm_flow(require(p, "flow", "path"), "path.flow");
        const int n = flow_n(flow);
        out["path"] = {{"flow", flow}, {"frame", norm_lagrangian(require(p, "frame", "path"), "path.frame", n)}};
        out["reference"] = norm_lagrangian(require(j, "reference", "problem"), "reference", n);
    } else if (cmd == "cz") {
        keys({"flow", "frame"});
        out["flow"] = norm_flow(require(j, "flow", "problem"), "flow");
        if (j.contains("frame")) out["frame"] = norm_lagrangian(j["frame"], "frame", flow_n(out["flow"]));
    } else if (cmd == "triple") {
        keys({"alpha", "beta", "gamma"});
        Mat A = mat_from_json(require(j, "alpha", "problem"), "alpha");
        const int n = static_cast<int>(A.cols());
        for (const char* k : {"alpha", "beta", "gamma"}) out[k] = norm_lagrangian(require(j, k, "problem"), k, n);
    } else if (cmd == "hormander") {
        keys({"l1", "l2", "m1", "m2"});
        Mat A = mat_from_json(require(j, "l1", "problem"), "l1");
        const int n = static_cast<int>(A.cols());
        for (const char* k : {"l1", "l2", "m1", "m2"}) out[k] = norm_lagrangian(require(j, k, "problem"), k, n);
    } else if (cmd == "flow") {
        keys({"hamiltonian", "steps", "samples"});
        out["hamiltonian"] = norm_hamiltonian(require(j, "hamiltonian", "problem"), "hamiltonian");
        out["steps"] = j.contains("steps") ? get_int(j["steps"], "steps", 0, 1 << 20) : 0;
        out["samples"] = j.contains("samples") ? get_int(j["samples"], "samples", 2, 100000) : 65;
    } else if (cmd == "morse") {
        keys({"system", "boundary"});
        const Json& s = require(j, "system", "problem");
        check_keys(s, {"n", "T", "P", "Q", "R"}, "system");
        const int n = get_int(require(s, "n", "system"), "system.n", 1, 8);
        const double T = get_positive(require(s, "T", "system"), "system.T");
        Json sys{{"n", n}, {"T", T}};
        sys["P"] = norm_coefficients(require(s, "P", "system"), "system.P", n, n, true);
        sys["Q"] = s.contains("Q") ? norm_coefficients(s["Q"], "system.Q", n, n, false)
                                   : Json{{"constant", mat_to_json(Mat::Zero(n, n))}};
        sys["R"] = norm_coefficients(require(s, "R", "system"), "system.R", n, n, true);
        out["system"] = sys;
        out["boundary"] = norm_boundary(require(j, "boundary", "problem"), "boundary", n);
    } else if (cmd == "spectral-flow") {
        keys({"hamiltonian", "boundary", "modes"});
        out["hamiltonian"] = norm_hamiltonian(require(j, "hamiltonian", "problem"), "hamiltonian");
        out["boundary"] = norm_boundary(require(j, "boundary", "problem"), "boundary", out["hamiltonian"]["n"].get<int>());
        out["modes"] = j.contains("modes") ? get_int(j["modes"], "modes", 4, 512) : 32;
    } else if (cmd == "focal") {
        keys({"G", "tangent", "S", "R", "interval"});
        Json G = norm_matrix(require(j, "G", "problem"), "G", -1, -1, true);
        const int n = G["rows"].get<int>();
        if (G["cols"].get<int>() != n) throw InputError("G: must be square");
        out["G"] = G;
        if (j.contains("tangent")) {
            Mat P = mat_from_json(j["tangent"], "tangent");
            if (P.rows() != n) throw InputError("tangent: expected " + std::to_string(n) + " rows");
            out["tangent"] = mat_to_json(P);
            out["S"] = norm_matrix(require(j, "S", "problem"), "S", static_cast<int>(P.cols()), static_cast<int>(P.cols()));
        } else if (j.contains("S")) {
            throw InputError("S: given without tangent");
        }
        out["R"] = norm_coefficients(require(j, "R", "problem"), "R", n, n, false);
        out["interval"] = norm_interval(require(j, "interval", "problem"), "interval");
    } else if (cmd == "kepler") {
        keys({"h", "e", "samples"});
        if (j.contains("h")) out["h"] = get_double(j["h"], "h");
        if (j.contains("e")) out["e"] = get_double(j["e"], "e");
        if (j.contains("samples")) out["samples"] = get_int(j["samples"], "samples", 2, 1000000);
    } else if (cmd == "verify") {
        keys({});
    } else {
        throw InputError("unknown command '" + cmd + "'");
    }
    return out;
}

Mat eval_poly(const std::vector<Mat>& C, double t) {
    Mat acc = C.back();
    for (int k = static_cast<int>(C.size()) - 2; k >= 0; --k) acc = Mat(acc * t + C[k]);
    return acc;
}

HamiltonianCoefficientPath build_hamiltonian(const Json& h) {
    HamiltonianCoefficientPath H;
    H.n = h["n"].get<int>();
    H.T = h["T"].get<double>();
    H.B = coefficient_path(h["B"], 2 * H.n, H.T, "hamiltonian.B");
    return H;
}

SymplecticPathPtr build_flow(const Json& f) {
    if (f.contains("hamiltonian")) {
        auto H = build_hamiltonian(f["hamiltonian"]);
        H.validate();
        return integrate_fundamental(H, default_steps(H));
    }
    const Json& r = f["rotation"];
    return std::make_shared<RotationPath>(standard_space(r["n"].get<int>()), 0.0, r["T"].get<double>(),
                                          r["speed"].get<double>());
}

BoundaryCondition build_boundary(const Json& b, int n) {
    const std::string k = b["kind"].get<std::string>();
    if (k == "dirichlet") return BoundaryCondition::dirichlet(n);
    if (k == "neumann") return BoundaryCondition::neumann(n);
    if (k == "periodic") return BoundaryCondition::periodic(n);
    if (k == "separated") return BoundaryCondition::separated(mat_from_json(b["Z1"], "Z1"), mat_from_json(b["Z2"], "Z2"));
    return BoundaryCondition::general(mat_from_json(b["basis"], "basis"));
}

std::string fmt(double x) { return format_double(x); }

void index_rows(CommandResult& res, const IndexReport& r) {
    res.csv_header = {"kind", "t0", "mult", "pos", "zero", "neg", "contribution"};
    for (const auto& c : r.crossings)
        res.csv_rows.push_back({"crossing", fmt(c.t0), std::to_string(c.mult), std::to_string(c.inertia.pos),
                                std::to_string(c.inertia.zero), std::to_string(c.inertia.neg), fmt(0.5 * c.contribution2)});
    res.csv_rows.push_back({"total", "", "", "", "", "", fmt(r.value())});
}

void report_rows(CommandResult& res, const std::vector<TheoremReport>& reports) {
    res.csv_header = {"theorem", "trial", "left", "relation", "right", "verdict", "skipped"};
    int i = 0;
    for (const auto& r : reports)
        res.csv_rows.push_back({r.theorem, std::to_string(i++), std::to_string(r.left), r.relation,
                                std::to_string(r.right), r.verdict ? "true" : "false", r.skipped ? "true" : "false"});
}

CommandResult theorem_result(const TheoremReport& r) {
    CommandResult res;
    res.json = r.to_json();
    report_rows(res, {r});
    res.exit_code = r.verdict || r.skipped ? 0 : 1;
    return res;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::vector<std::string> commands() {
    return {"clm", "rs", "cz", "triple", "hormander", "flow", "morse", "spectral-flow", "verify", "kepler", "focal"};
}

bool needs_problem(const std::string& command) { return command != "verify" && command != "kepler"; }

MatFn coefficient_path(const Json& j, int rows, double T, const std::string& name) {
    Json c = norm_coefficients(j, name, rows, rows, false);
    if (c.contains("constant")) {
        Mat M = mat_from_json(c["constant"], name);
        return [M](double) { return M; };
    }
    if (c.contains("poly")) {
        std::vector<Mat> C;
        for (const auto& m : c["poly"]) C.push_back(mat_from_json(m, name));
        return [C](double t) { return eval_poly(C, t); };
    }
    std::vector<double> ts;
    std::vector<Mat> vs;
    for (const auto& t : c["samples"]["t"]) ts.push_back(t.get<double>());
    for (const auto& v : c["samples"]["values"]) vs.push_back(mat_from_json(v, name));
    if (ts.front() > 0.0 || ts.back() < T) throw InputError(name + ".samples: must cover [0, T]");
    return [ts, vs](double t) {
        auto it = std::upper_bound(ts.begin(), ts.end(), t);
        size_t k = it == ts.begin() ? 0 : std::min<size_t>(it - ts.begin() - 1, ts.size() - 2);
        double u = std::clamp((t - ts[k]) / (ts[k + 1] - ts[k]), 0.0, 1.0);
        return Mat((1.0 - u) * vs[k] + u * vs[k + 1]);
    };
}

Json parse_problem(const std::string& text, const std::string& command) {
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
        throw InputError("unknown command '" + command + "'");
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
        if (needs_problem(command)) throw InputError("problem file is empty");
        return normalize(Json::object(), command);
    }
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        size_t line = 1, col = 1;
        for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw InputError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                         e.what());
    } catch (const Json::exception& e) {
        throw InputError(std::string("parse error: ") + e.what());
    }
    if (!j.is_object()) throw InputError("problem: expected a JSON object");
    if (!j.contains("schema")) throw InputError("problem: missing field 'schema'");
    if (!j["schema"].is_number_integer() || j["schema"].get<long>() != kProblemSchema)
        throw InputError("problem: unsupported schema version (expected " + std::to_string(kProblemSchema) + ")");
    if (j.contains("command") && (!j["command"].is_string() || j["command"].get<std::string>() != command))
        throw InputError("problem: command field does not match '" + command + "'");
    return normalize(j, command);
}

CommandResult run_command(const std::string& cmd, const Json& p, const RunFlags& flags) {
    EngineOptions eng;
    eng.tol = flags.tol;
    TheoremOptions topt{flags.grid, eng};
    CommandResult res;
    if (cmd == "clm" || cmd == "rs") {
        const int n = flow_n(p["path"]["flow"]);
        auto space = standard_space(n);
        auto psi = build_flow(p["path"]["flow"]);
        LagrangianPairPath P{space, std::make_shared<ConstantPath>(mat_from_json(p["reference"], "reference")),
                             std::make_shared<MovedFramePath>(psi, mat_from_json(p["path"]["frame"], "path.frame")),
                             psi->t_begin(), psi->t_end(), flags.grid};
        // rs reports RS(path, reference), the partner of CLM(reference, path)
        if (cmd == "rs") std::swap(P.l1, P.l2);
        auto r = cmd == "clm" ? clm_index(P, eng) : rs_index(P, eng);
        res.json = report_to_json(r);
        index_rows(res, r);
    } else if (cmd == "cz") {
        const int n = flow_n(p["flow"]);
        auto space = standard_space(n);
        auto psi = build_flow(p["flow"]);
        auto r = cz_index(space, psi, flags.grid, eng);
        res.json = report_to_json(r);
        if (p.contains("frame")) {
            auto l = l_maslov_index(space, mat_from_json(p["frame"], "frame"), psi, flags.grid, eng);
            res.json["l_maslov"] = report_to_json(l);
        }
        index_rows(res, r);
    } else if (cmd == "triple") {
        Mat A = mat_from_json(p["alpha"], "alpha");
        auto space = standard_space(static_cast<int>(A.cols()));
        auto t = triple_index(space, A, mat_from_json(p["beta"], "beta"), mat_from_json(p["gamma"], "gamma"), flags.tol);
        res.json = {{"value", t.value},
                    {"reduced_value", t.reduced_value},
                    {"n_plus", t.n_plus},
                    {"bound", t.bound},
                    {"dim_alpha_beta", t.dim_alpha_beta},
                    {"dim_beta_gamma", t.dim_beta_gamma},
                    {"dim_alpha_gamma", t.dim_alpha_gamma},
                    {"dim_alpha_beta_gamma", t.dim_alpha_beta_gamma}};
        res.csv_header = {"value", "reduced_value", "n_plus", "bound"};
        res.csv_rows.push_back({std::to_string(t.value), std::to_string(t.reduced_value), std::to_string(t.n_plus),
                                std::to_string(t.bound)});
        res.exit_code = t.value == t.reduced_value && t.value <= t.bound ? 0 : 1;
    } else if (cmd == "hormander") {
        Mat l1 = mat_from_json(p["l1"], "l1");
        auto space = standard_space(static_cast<int>(l1.cols()));
        auto h = hormander_index(space, l1, mat_from_json(p["l2"], "l2"), mat_from_json(p["m1"], "m1"),
                                 mat_from_json(p["m2"], "m2"), flags.tol);
        res.json = {{"value", h.value}, {"value_alt", h.value_alt}, {"agree", h.agree}};
        res.csv_header = {"value", "value_alt", "agree"};
        res.csv_rows.push_back({std::to_string(h.value), std::to_string(h.value_alt), h.agree ? "true" : "false"});
        res.exit_code = h.agree ? 0 : 1;
    } else if (cmd == "flow") {
        auto H = build_hamiltonian(p["hamiltonian"]);
        H.validate();
        const int steps = p["steps"].get<int>() > 0 ? p["steps"].get<int>() : default_steps(H);
        auto psi = integrate_fundamental(H, steps);
        const int S = p["samples"].get<int>();
        const int d = 2 * H.n;
        res.csv_header = {"t"};
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) res.csv_header.push_back("psi_" + std::to_string(i) + "_" + std::to_string(k));
        Json samples = Json::array();
        for (int s = 0; s < S; ++s) {
            const double t = H.T * s / (S - 1);
            Mat M = psi->value(t);
            std::vector<std::string> row{fmt(t)};
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k) row.push_back(fmt(M(i, k)));
            res.csv_rows.push_back(row);
            samples.push_back({{"t", t}, {"psi", mat_to_json(M)}});
        }
        res.json = {{"steps", steps},
                    {"monodromy", mat_to_json(psi->value(H.T))},
                    {"richardson_error", psi->richardson_error()},
                    {"max_symplectic_defect", psi->max_symplectic_defect()},
                    {"samples", samples}};
    } else if (cmd == "morse") {
        const Json& s = p["system"];
        MorseSturmSystem ms;
        ms.n = s["n"].get<int>();
        ms.T = s["T"].get<double>();
        ms.P = coefficient_path(s["P"], ms.n, ms.T, "system.P");
        ms.Q = coefficient_path(s["Q"], ms.n, ms.T, "system.Q");
        ms.R = coefficient_path(s["R"], ms.n, ms.T, "system.R");
        ms.validate();
        if (p["boundary"].contains("frame")) throw InputError("boundary: morse needs a boundary condition, not a frame");
        return theorem_result(index_theorem(ms, build_boundary(p["boundary"], ms.n), topt));
    } else if (cmd == "spectral-flow") {
        auto H = build_hamiltonian(p["hamiltonian"]);
        H.validate();
        const Json& b = p["boundary"];
        Mat L = b.contains("frame") ? mat_from_json(b["frame"], "boundary.frame")
                                    : boundary_lagrangian(build_boundary(b, H.n));
        SpectralFlowOptions sopt;
        sopt.N = p["modes"].get<int>();
        return theorem_result(spectral_flow_formula(H, L, sopt, topt));
    } else if (cmd == "focal") {
        FocalSetup setup;
        setup.G = mat_from_json(p["G"], "G");
        const int n = setup.n();
        setup.tangent = p.contains("tangent") ? mat_from_json(p["tangent"], "tangent") : Mat(n, 0);
        setup.S = p.contains("S") ? mat_from_json(p["S"], "S") : Mat(0, 0);
        setup.validate();
        const double a = p["interval"][0].get<double>(), b = p["interval"][1].get<double>();
        return theorem_result(conjugate_focal_comparison(setup, coefficient_path(p["R"], n, b, "R"), a, b, topt));
    } else if (cmd == "kepler") {
        const double h = p.contains("h") ? p["h"].get<double>() : flags.h;
        const double e = p.contains("e") ? p["e"].get<double>() : flags.e;
        const int samples = p.contains("samples") ? p["samples"].get<int>() : 257;
        auto orbit = kepler_orbit(h, e, samples);
        auto c = first_conjugate_distance(orbit);
        res.json = {{"h", h},
                    {"e", e},
                    {"s_star", c.s_star},
                    {"t_star", c.t_star},
                    {"bound", c.bound},
                    {"found", c.found},
                    {"pass", c.pass},
                    {"period", orbit.period},
                    {"measured_period", orbit.measured_period},
                    {"energy_drift", orbit.energy_drift}};
        res.csv_header = {"t", "r", "s", "K", "J"};
        for (size_t i = 0; i < orbit.t.size(); ++i) {
            std::string J;
            const double s = orbit.s[i];
            if (!c.s.empty() && s <= c.s.back()) {
                auto it = std::lower_bound(c.s.begin(), c.s.end(), s);
                size_t k = it == c.s.begin() ? 1 : static_cast<size_t>(it - c.s.begin());
                k = std::min(k, c.s.size() - 1);
                const double u = c.s[k] > c.s[k - 1] ? (s - c.s[k - 1]) / (c.s[k] - c.s[k - 1]) : 0.0;
                J = fmt((1.0 - u) * c.J[k - 1] + u * c.J[k]);
            }
            res.csv_rows.push_back({fmt(orbit.t[i]), fmt(orbit.r[i]), fmt(s), fmt(orbit.K[i]), J});
        }
        res.exit_code = c.pass ? 0 : 1;
    } else if (cmd == "verify") {
        if (flags.theorem.empty()) throw InputError("verify: --theorem is required");
        auto reports = verify(flags.theorem, flags.trials, flags.seed, flags.dim, flags.jobs, topt);
        auto sum = summarize(flags.theorem, reports);
        res.json = Json::array();
        for (const auto& r : reports) res.json.push_back(r.to_json());
        res.csv_header = {"theorem", "trials", "passes", "skips", "errors"};
        res.csv_rows.push_back({sum.theorem, std::to_string(sum.trials), std::to_string(sum.passes),
                                std::to_string(sum.skips), std::to_string(sum.errors)});
        res.exit_code = sum.passes + sum.skips == sum.trials ? 0 : 1;
    } else {
        throw InputError("unknown command '" + cmd + "'");
    }
    return res;
}

std::string emit(const CommandResult& result, const std::string& format) {
    if (format == "json") return result.json.dump(2) + "\n";
    if (format != "csv") throw InputError("unknown format '" + format + "'");
    std::ostringstream os;
    for (size_t i = 0; i < result.csv_header.size(); ++i) os << (i ? "," : "") << csv_field(result.csv_header[i]);
    os << "\n";
    for (const auto& row : result.csv_rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << "\n";
    }
    return os.str();
}

}  // namespace sympsturm
