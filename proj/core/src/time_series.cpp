#include "aht/time_series.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "aht/errors.hpp"

namespace aht {

void TimeSeries::append(const Record& r) {
    if (!records.empty() && !(r.t > records.back().t))
        throw Error("time series: records must have strictly increasing t");
    records.push_back(r);
}

namespace {
// Shortest round-trippable decimal; fixed format so identical runs give
// identical bytes.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

void write_csv(const TimeSeries& s, std::ostream& out) {
    out << kTimeSeriesHeader << '\n';
    for (const auto& r : s.records) {
        out << fmt(r.t) << ',' << fmt(r.u_l2) << ',' << fmt(r.u_hs) << ',' << fmt(r.z_hs)
            << ',' << fmt(r.cost);
        for (double m : r.moments) out << ',' << fmt(m);
        out << '\n';
    }
}

TimeSeries read_csv(std::istream& in) {
    TimeSeries s;
    std::string line;
    if (!std::getline(in, line)) throw IoError("time series csv: empty stream");
    if (line != kTimeSeriesHeader) throw IoError("time series csv: unexpected header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        TimeSeries::Record r;
        char comma;
        ls >> r.t >> comma >> r.u_l2 >> comma >> r.u_hs >> comma >> r.z_hs >> comma >> r.cost;
        for (auto& m : r.moments) ls >> comma >> m;
        if (!ls) throw IoError("time series csv: malformed row");
        s.append(r);
    }
    return s;
}

}  // namespace aht
