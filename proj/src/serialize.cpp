#include "wcf/serialize.hpp"

#include "wcf/errors.hpp"

#include <cmath>
#include <limits>

namespace wcf {

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

double number_from(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw InputError("expected a number");
}

Json to_json(const Vec& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
    return a;
}

Json to_json(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vec(m.row(i).transpose())));
    return rows;
}

Vec vec_from_json(const Json& j) {
    if (!j.is_array()) throw InputError("expected an array");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number_from(j[i]);
    return v;
}

Mat mat_from_json(const Json& j) {
    if (!j.is_array()) throw InputError("expected a matrix");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return Mat(0, 0);
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Vec r = vec_from_json(j[static_cast<std::size_t>(i)]);
        if (r.size() != cols) throw InputError("ragged matrix");
        m.row(i) = r.transpose();
    }
    return m;
}

Json to_json(const Assignment& t) {
    Json pts = Json::array();
    for (const auto& pt : t.points()) pts.push_back({{"x", pt.x}, {"p", pt.p}});
    return {{"points", pts}};
}

Assignment assignment_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array())
        throw InputError("assignment needs a points array");
    std::vector<Point> pts;
    for (const auto& p : j["points"]) pts.push_back({p.at("x").get<double>(), p.at("p").get<double>()});
    return Assignment(std::move(pts));
}

namespace {

// Direction sets are stored as lists of vectors.
Json dirs_to_json(const Mat& D) {
    Json a = Json::array();
    for (Eigen::Index j = 0; j < D.cols(); ++j) a.push_back(to_json(Vec(D.col(j))));
    return a;
}

Mat dirs_from_json(const Json& j, Eigen::Index dim) {
    Mat D(dim, static_cast<Eigen::Index>(j.size()));
    for (std::size_t c = 0; c < j.size(); ++c) {
        const Vec v = vec_from_json(j[c]);
        if (v.size() != dim) throw InputError("direction of wrong dimension");
        D.col(static_cast<Eigen::Index>(c)) = v;
    }
    return D;
}

LimitSymMatrix limit_from_json(const Json& j) {
    LimitSymMatrix m(mat_from_json(j.at("finite")));
    if (m.finite.rows() != m.finite.cols()) throw InputError("finite block must be square");
    m.inf_dirs = dirs_from_json(j.at("inf_dirs"), m.dim());
    m.zero_dirs = dirs_from_json(j.at("zero_dirs"), m.dim());
    m.null_dirs = dirs_from_json(j.at("null_dirs"), m.dim());
    return m;
}

Json chain_to_json(const std::vector<ChainOp>& chain) {
    Json a = Json::array();
    for (const auto& op : chain) {
        switch (op.kind) {
            case ChainOp::Kind::peel: a.push_back({{"op", "peel"}, {"root", op.a}, {"paired", op.b}}); break;
            case ChainOp::Kind::drop: a.push_back({{"op", "drop"}, {"root", op.a}, {"paired", op.b}}); break;
            case ChainOp::Kind::invert: a.push_back({{"op", "invert"}}); break;
            case ChainOp::Kind::shift: a.push_back({{"op", "shift"}, {"c", op.a}}); break;
        }
    }
    return a;
}

std::vector<ChainOp> chain_from_json(const Json& j) {
    std::vector<ChainOp> out;
    for (const auto& e : j) {
        const auto op = e.at("op").get<std::string>();
        if (op == "peel" || op == "drop")
            out.push_back({op == "peel" ? ChainOp::Kind::peel : ChainOp::Kind::drop, e.at("root").get<double>(),
                           e.at("paired").get<double>()});
        else if (op == "invert")
            out.push_back({ChainOp::Kind::invert, 0.0, 0.0});
        else if (op == "shift")
            out.push_back({ChainOp::Kind::shift, e.at("c").get<double>(), 0.0});
        else
            throw InputError("unknown chain op: " + op);
    }
    return out;
}

Json power_or_null(const std::optional<int>& p) { return p ? Json(*p) : Json(nullptr); }

}  // namespace

Json to_json(const LimitSymMatrix& m) {
    return {{"finite", to_json(m.finite)},
            {"inf_dirs", dirs_to_json(m.inf_dirs)},
            {"zero_dirs", dirs_to_json(m.zero_dirs)},
            {"null_dirs", dirs_to_json(m.null_dirs)}};
}

Json to_json(const ExtendedMatrixInstance& inst) {
    return {{"shape", to_string(inst.shape)},
            {"vector_power", inst.vector_power},
            {"H", to_json(inst.H)},
            {"G", to_json(inst.G)},
            {"w", to_json(inst.w)},
            {"v", to_json(inst.v)}};
}

ExtendedMatrixInstance instance_from_json(const Json& j) {
    ExtendedMatrixInstance inst;
    inst.shape = shape_from_string(j.at("shape").get<std::string>());
    inst.vector_power = j.value("vector_power", 0.0);
    inst.H = limit_from_json(j.at("H"));
    inst.G = limit_from_json(j.at("G"));
    inst.w = vec_from_json(j.at("w"));
    inst.v = vec_from_json(j.at("v"));
    if (inst.w.size() != inst.H.dim() || inst.v.size() != inst.G.dim())
        throw InputError("instance vectors do not match the matrices");
    inst.H_pinv = inst.H.positive_inverse();
    inst.G_pinv = inst.G.positive_inverse();
    inst.frame_h = Mat::Identity(inst.H.dim(), inst.H.dim());
    inst.frame_g = Mat::Identity(inst.G.dim(), inst.G.dim());
    return inst;
}

Json to_json(const SolutionCertificate& c) {
    Json sweep = Json::array();
    for (const auto& s : c.eps_sweep) sweep.push_back({{"eps", s.eps}, {"min_eig", number(s.min_eig)}});
    Json steps = Json::array();
    for (const auto& r : c.step_log)
        steps.push_back({{"map", to_string(r.tag)},
                         {"rank", r.rank},
                         {"orientation", r.up ? "up" : "down"},
                         {"contact_gap", number(r.contact_gap)},
                         {"component_gap", number(r.component_gap)},
                         {"contact_scale", number(r.contact_scale)},
                         {"component_scale", number(r.component_scale)},
                         {"contact_power", power_or_null(r.contact_power)},
                         {"component_power", power_or_null(r.component_power)}});
    Json j = {{"O", to_json(c.O)},
              {"orthogonality_residual", number(c.orthogonality_residual)},
              {"mapping_residual", number(c.mapping_residual)},
              {"psd_min_eig", number(c.psd_min_eig)},
              {"limit", c.limit}};
    if (c.limit) {
        j["eps_sweep"] = sweep;
        j["eps_slope"] = number(c.eps_slope);
    }
    j["step_log"] = steps;
    j["verdict"] = c.pass ? "pass" : "fail";
    return j;
}

Json to_json(const Solution& s) {
    return {{"case", to_string(s.schedule.tag)},
            {"route", s.route},
            {"transposed", s.transposed},
            {"assignment", to_json(s.t)},
            {"instance", to_json(s.instance)},
            {"certificate", to_json(s.certificate)}};
}

Json to_json(const DecompositionTerm& t) {
    return {{"alpha", t.alpha},
            {"subset", t.subset},
            {"kind", to_string(t.kind)},
            {"power", t.power},
            {"merged", t.merged},
            {"chain", chain_to_json(t.chain)}};
}

DecompositionTerm term_from_json(const Json& j) {
    DecompositionTerm t;
    t.alpha = j.at("alpha").get<double>();
    t.subset = j.at("subset").get<std::vector<double>>();
    t.kind = term_kind_from_string(j.at("kind").get<std::string>());
    t.power = j.at("power").get<int>();
    t.merged = j.value("merged", 1);
    if (j.contains("chain")) t.chain = chain_from_json(j["chain"]);
    return t;
}

Json to_json(const ValidityReport& r) {
    return {{"verdict", to_string(r.verdict)},
            {"sum_zero_residual", number(r.sum_zero_residual)},
            {"min_transfer_value", number(r.min_transfer_value)},
            {"grid_points", r.grid.size()},
            {"lambda_lo", r.grid.empty() ? 0.0 : r.grid.front()},
            {"lambda_hi", r.grid.empty() ? 0.0 : r.grid.back()}};
}

}  // namespace wcf
