#include "fibernet/peaks.hpp"

#include <algorithm>
#include <cmath>

#include "fibernet/error.hpp"

namespace fibernet {

namespace {

double prominence(const std::vector<double>& y, std::size_t i) {
    double left = y[i];
    for (std::size_t k = i; k-- > 0;) {
        if (y[k] > y[i]) break;
        left = std::min(left, y[k]);
    }
    double right = y[i];
    for (std::size_t k = i + 1; k < y.size(); ++k) {
        if (y[k] > y[i]) break;
        right = std::min(right, y[k]);
    }
    return y[i] - std::max(left, right);
}

bool is_max(const std::vector<double>& y, std::size_t i) {
    return i > 0 && i + 1 < y.size() && y[i] > y[i - 1] && y[i] >= y[i + 1];
}

}  // namespace

std::vector<Peak> find_peaks(const std::vector<double>& x, const std::vector<double>& y, double min_fraction) {
    if (x.size() != y.size()) throw_invalid("peak search needs matching x and y");
    std::vector<Peak> peaks;
    if (y.size() < 3) return peaks;
    double top = -INFINITY;
    for (double v : y)
        if (std::isfinite(v)) top = std::max(top, v);
    const double floor = min_fraction * top;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (!is_max(y, i)) continue;
        const double prom = prominence(y, i);
        if (!(prom >= floor)) continue;
        const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
        const double h = x[i + 1] - x[i];
        const double curv = y0 - 2.0 * y1 + y2;
        double shift = 0.0;
        if (curv < 0.0) shift = 0.5 * (y0 - y2) / curv;
        shift = std::clamp(shift, -1.0, 1.0);
        peaks.push_back({x[i] + shift * h, y1 - 0.25 * (y0 - y2) * shift, prom});
    }
    return peaks;
}

double prominence_at(const std::vector<double>& x, const std::vector<double>& y, double x0) {
    if (x.size() != y.size() || x.empty()) throw_invalid("prominence needs matching non-empty x and y");
    std::size_t best = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs(x[i] - x0) < std::abs(x[best] - x0)) best = i;
    // walk uphill to the local maximum the sample belongs to, if adjacent
    for (std::size_t i : {best, best - 1, best + 1})
        if (i < y.size() && is_max(y, i)) return prominence(y, i);
    return 0.0;
}

}  // namespace fibernet
