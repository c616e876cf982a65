#pragma once

#include "delayctl/simulation.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace delayctl {

/// Header `t,x1..xn,xhat1..xhatn,u,thetahat1..n,sigmahat,y,ydes[,yref,uref]`.
std::string trace_csv_header(std::size_t n, bool with_reference);

/// Writes one row per sample at 17 significant digits.
void write_trace_csv(std::ostream& os, const SimTrace& trace);

/// Parsed CSV table: column names and row-major values.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& is);

}  // namespace delayctl
