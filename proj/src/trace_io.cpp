#include "delayctl/trace_io.hpp"

#include "delayctl/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace delayctl {

namespace {

void put(std::string& line, double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    line.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

std::string trace_csv_header(std::size_t n, bool with_reference) {
    std::string h = "t";
    for (std::size_t i = 1; i <= n; ++i) h += ",x" + std::to_string(i);
    for (std::size_t i = 1; i <= n; ++i) h += ",xhat" + std::to_string(i);
    h += ",u";
    for (std::size_t i = 1; i <= n; ++i) h += ",thetahat" + std::to_string(i);
    h += ",sigmahat,y,ydes";
    if (with_reference) h += ",yref,uref";
    return h;
}

void write_trace_csv(std::ostream& os, const SimTrace& tr) {
    if (!tr.has_adaptive()) throw Error(ErrorCode::InvalidArgument, "trace has no adaptive-loop columns");
    const bool ref = tr.has_reference();
    os << trace_csv_header(tr.n, ref) << '\n';
    std::string line;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        line.clear();
        put(line, tr.t[i]);
        auto vec = [&](const Vector& v) {
            for (Eigen::Index j = 0; j < v.size(); ++j) {
                line += ',';
                put(line, v(j));
            }
        };
        auto one = [&](double v) {
            line += ',';
            put(line, v);
        };
        vec(tr.x[i]);
        vec(tr.x_hat[i]);
        one(tr.u[i]);
        vec(tr.theta_hat[i]);
        one(tr.sigma_hat[i]);
        one(tr.y[i]);
        one(tr.y_des[i]);
        if (ref) {
            one(tr.y_ref[i]);
            one(tr.u_ref[i]);
        }
        line += '\n';
        os << line;
    }
}

CsvTable read_csv(std::istream& is) {
    CsvTable table;
    std::string line;
    if (!std::getline(is, line)) throw Error(ErrorCode::InvalidArgument, "empty CSV");
    std::stringstream header(line);
    for (std::string name; std::getline(header, name, ',');) table.columns.push_back(name);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        const char* p = line.data();
        const char* end = p + line.size();
        while (p <= end) {
            const char* comma = std::find(p, end, ',');
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(p, comma, v);
            if (ec != std::errc() || ptr != comma) throw Error(ErrorCode::InvalidArgument, "bad CSV value: " + line);
            row.push_back(v);
            p = comma + 1;
        }
        if (row.size() != table.columns.size()) throw Error(ErrorCode::InvalidArgument, "ragged CSV row");
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace delayctl
