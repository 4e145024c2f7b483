#include "sympsturm/io.hpp"

#include <cmath>
#include <cstdio>

namespace sympsturm {

Json mat_to_json(const Mat& M) {
    Json data = Json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) data.push_back(M(i, j));
    return Json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", data}};
}

namespace {

double number(const Json& v, const std::string& name) {
    if (!v.is_number()) throw InputError(name + ": expected a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw InputError(name + ": non-finite entry");
    return x;
}

}  // namespace

Mat mat_from_json(const Json& j, const std::string& name) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            if (it.key() != "rows" && it.key() != "cols" && it.key() != "data")
                throw InputError(name + ": unknown field '" + it.key() + "'");
        if (!j.contains("rows") || !j.contains("cols") || !j.contains("data"))
            throw InputError(name + ": matrix needs rows, cols and data");
        if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
            throw InputError(name + ": rows and cols must be integers");
        long r = j["rows"].get<long>(), c = j["cols"].get<long>();
        const Json& d = j["data"];
        if (r <= 0 || c <= 0 || !d.is_array() || static_cast<long>(d.size()) != r * c)
            throw InputError(name + ": data length does not match rows x cols");
        Mat M(r, c);
        for (long i = 0; i < r; ++i)
            for (long k = 0; k < c; ++k) M(i, k) = number(d[i * c + k], name);
        return M;
    }
    if (j.is_array() && !j.empty()) {
        if (j[0].is_number()) {
            Mat M(j.size(), 1);
            for (size_t i = 0; i < j.size(); ++i) M(i, 0) = number(j[i], name);
            return M;
        }
        size_t c = j[0].is_array() ? j[0].size() : 0;
        if (c == 0) throw InputError(name + ": empty row");
        Mat M(j.size(), c);
        for (size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_array() || j[i].size() != c) throw InputError(name + ": ragged rows");
            for (size_t k = 0; k < c; ++k) M(i, k) = number(j[i][k], name);
        }
        return M;
    }
    if (j.is_number()) return Mat::Constant(1, 1, number(j, name));
    throw InputError(name + ": expected a matrix");
}

Json inertia_to_json(const Inertia& in) { return Json{{"pos", in.pos}, {"zero", in.zero}, {"neg", in.neg}}; }

Json crossing_to_json(const CrossingRecord& c) {
    return Json{{"t0", c.t0},
                {"mult", c.mult},
                {"inertia", inertia_to_json(c.inertia)},
                {"regular", c.regular},
                {"contribution", 0.5 * c.contribution2},
                {"method", c.method},
                {"min_singular_value", c.min_singular_value}};
}

Json report_to_json(const IndexReport& r) {
    Json cs = Json::array();
    for (const auto& c : r.crossings) cs.push_back(crossing_to_json(c));
    Json j{{"convention", to_string(r.convention)}, {"crossings", cs}};
    if (r.twice_value % 2 == 0)
        j["value"] = r.twice_value / 2;
    else
        j["value"] = r.value();
    return j;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace sympsturm
