#pragma once

#include <array>
#include <iosfwd>
#include <vector>

namespace aht {

/// Diagnostic record stream of a run.  Moments are the degree 1..3
/// pushforward moments in the order m10,m01,m20,m11,m02,m30,m21,m12,m03.
struct TimeSeries {
    struct Record {
        double t = 0.0;
        double u_l2 = 0.0;
        double u_hs = 0.0;
        double z_hs = 0.0;
        double cost = 0.0;
        std::array<double, 9> moments{};
    };

    std::vector<Record> records;

    /// Enforces strictly increasing t.
    void append(const Record& r);
};

inline constexpr const char* kTimeSeriesHeader =
    "t,u_l2,u_hs,z_hs,cost,m10,m01,m20,m11,m02,m30,m21,m12,m03";

/// CSV with the exact header above; doubles printed with 17 significant
/// digits so identical runs produce identical bytes.
void write_csv(const TimeSeries& s, std::ostream& out);
TimeSeries read_csv(std::istream& in);

}  // namespace aht
