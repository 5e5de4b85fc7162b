#include "imurep/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "imurep/errors.hpp"

namespace imurep {

namespace {

struct Cell {
    double cost = std::numeric_limits<double>::infinity();
    std::size_t length = 0;
};

// Lexicographic: lower cost first, then longer path.
bool better(const Cell& a, const Cell& b) noexcept {
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.length > b.length;
}

double distance3(const Vec3& a, const Vec3& b) noexcept {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

DtwResult dtw(const TriaxialSeries& s, const TriaxialSeries& t, const DtwOptions& options) {
    const std::size_t n = s.size();
    const std::size_t m = t.size();
    if (n == 0 || m == 0) {
        throw EmptySeriesError("dtw of an empty series");
    }

    // Cell (i, j) is admissible when |i*(m-1) - j*(n-1)| stays within the
    // band scaled to the longer axis, plus one diagonal step of slack so a
    // staircase path always exists.
    const bool banded = options.band > 0 && n > 1 && m > 1;
    const double span_n = static_cast<double>(n - 1);
    const double span_m = static_cast<double>(m - 1);
    const double slack = static_cast<double>(options.band + 1) * std::max(span_n, span_m);
    auto admissible = [&](std::size_t i, std::size_t j) {
        if (!banded) return true;
        const double d = static_cast<double>(i) * span_m - static_cast<double>(j) * span_n;
        return std::abs(d) <= slack;
    };

    // Two rolling rows of the (n+1) x (m+1) table with DTW[0][0] = 0.
    std::vector<Cell> prev(m + 1), cur(m + 1);
    prev[0] = {0.0, 0};
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = Cell{};
        for (std::size_t j = 1; j <= m; ++j) {
            if (!admissible(i - 1, j - 1)) {
                cur[j] = Cell{};
                continue;
            }
            Cell best = prev[j - 1];
            if (better(prev[j], best)) best = prev[j];
            if (better(cur[j - 1], best)) best = cur[j - 1];
            cur[j] = {distance3(s[i - 1], t[j - 1]) + best.cost, best.length + 1};
        }
        std::swap(prev, cur);
    }
    const Cell& end = prev[m];
    DtwResult r{end.cost, end.length, end.cost};
    if (options.normalize && end.length > 0) {
        r.distance = end.cost / static_cast<double>(end.length);
    }
    return r;
}

double dtw_distance(const TriaxialSeries& s, const TriaxialSeries& t, const DtwOptions& options) {
    return dtw(s, t, options).distance;
}

std::string_view axis_name(Axis a) noexcept {
    switch (a) {
        case Axis::X: return "X";
        case Axis::Y: return "Y";
        case Axis::Z: return "Z";
    }
    return "?";
}

AxisStats axis_stats(const TriaxialSeries& series) {
    const std::size_t n = series.size();
    if (n < 2) {
        throw InputError("axis variance needs at least 2 samples");
    }
    double mx = 0.0, my = 0.0, mz = 0.0;
    for (const auto& v : series.samples()) {
        mx += v.x;
        my += v.y;
        mz += v.z;
    }
    const double inv = 1.0 / static_cast<double>(n);
    mx *= inv;
    my *= inv;
    mz *= inv;
    AxisStats st;
    for (const auto& v : series.samples()) {
        st.var_x += (v.x - mx) * (v.x - mx);
        st.var_y += (v.y - my) * (v.y - my);
        st.var_z += (v.z - mz) * (v.z - mz);
    }
    st.var_x *= inv;
    st.var_y *= inv;
    st.var_z *= inv;
    st.dominant = Axis::X;
    double best = st.var_x;
    if (st.var_y > best) {
        st.dominant = Axis::Y;
        best = st.var_y;
    }
    if (st.var_z > best) st.dominant = Axis::Z;
    return st;
}

double weight_for(const AxisStats& segment, const AxisStats& tmpl, double match_weight) {
    return segment.dominant == tmpl.dominant ? match_weight : 1.0;
}

}  // namespace imurep
