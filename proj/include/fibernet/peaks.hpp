#pragma once

#include <vector>

namespace fibernet {

struct Peak {
    double position;    // parabola vertex through the three samples around the maximum
    double height;
    double prominence;  // height above the higher of the two flanking minima
};

// Interior local maxima whose prominence is at least min_fraction of the
// global maximum of y.
std::vector<Peak> find_peaks(const std::vector<double>& x, const std::vector<double>& y, double min_fraction = 0.01);

// Prominence of the sample nearest to x0 treated as a peak (zero if it is not a local maximum).
double prominence_at(const std::vector<double>& x, const std::vector<double>& y, double x0);

}  // namespace fibernet
