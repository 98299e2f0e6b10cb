#include "fibernet/compare.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fibernet/qo_model.hpp"

namespace fibernet {

namespace {

double top(const std::vector<double>& y) {
    double m = 0.0;
    for (double v : y)
        if (std::isfinite(v)) m = std::max(m, v);
    return m;
}

}  // namespace

SpectraResult tm_response(const netlist::Network& net, const DriveVector& drive, const std::vector<double>& detunings,
                          unsigned jobs) {
    if (const auto* chain = std::get_if<NetworkSpec>(&net)) return chain_response(*chain, drive, detunings, jobs);
    return splitter_spectrum(std::get<SplitNetwork>(net), drive, detunings, jobs);
}

SpectraResult qo_response(const netlist::Network& net, const DriveVector& drive, const std::vector<double>& detunings,
                          unsigned jobs) {
    const QoParams p = std::visit([&](const auto& n) { return qo_params_from_network(n, drive); }, net);
    SpectraResult res = qo_spectrum(p, detunings, jobs);
    if (std::holds_alternative<NetworkSpec>(net))
        std::erase_if(res.ports, [](const PortSpectrum& s) { return s.name == "Eu_out" || s.name == "Ed_out"; });
    return res;
}

std::vector<PortComparison> compare_spectra(const SpectraResult& tm, const SpectraResult& qo, double min_fraction) {
    std::vector<PortComparison> out;
    for (const PortSpectrum& a : tm.ports) {
        const auto it = std::find_if(qo.ports.begin(), qo.ports.end(), [&](const PortSpectrum& b) { return b.name == a.name; });
        if (it == qo.ports.end()) continue;
        const PortSpectrum& b = *it;
        PortComparison c;
        c.port = a.name;
        for (std::size_t i = 0; i < a.power.size(); ++i)
            if (std::isfinite(a.power[i]) && std::isfinite(b.power[i]))
                c.max_abs_diff = std::max(c.max_abs_diff, std::abs(a.power[i] - b.power[i]));
        c.tm_peaks = find_peaks(tm.detunings, a.power, min_fraction);
        c.qo_peaks = find_peaks(qo.detunings, b.power, min_fraction);
        const double tm_top = top(a.power), qo_top = top(b.power);

        std::vector<bool> used(c.tm_peaks.size(), false);
        for (const Peak& q : c.qo_peaks) {
            std::size_t best = c.tm_peaks.size();
            for (std::size_t k = 0; k < c.tm_peaks.size(); ++k)
                if (!used[k] && (best == c.tm_peaks.size() ||
                                 std::abs(c.tm_peaks[k].position - q.position) <
                                     std::abs(c.tm_peaks[best].position - q.position)))
                    best = k;
            if (best == c.tm_peaks.size()) continue;
            used[best] = true;
            const Peak& t = c.tm_peaks[best];
            c.matches.push_back({t.position, q.position, tm_top > 0 ? t.prominence / tm_top : 0.0,
                                 qo_top > 0 ? q.prominence / qo_top : 0.0});
        }
        std::sort(c.matches.begin(), c.matches.end(),
                  [](const PeakMatch& x, const PeakMatch& y) { return x.qo_position < y.qo_position; });

        std::ostringstream why;
        if (c.tm_peaks.size() != c.qo_peaks.size()) {
            c.qualitative_mismatch = true;
            why << "peak count " << c.tm_peaks.size() << " (tm) vs " << c.qo_peaks.size() << " (qo)";
        }
        for (const PeakMatch& m : c.matches) {
            const double hi = std::max(m.tm_relative_prominence, m.qo_relative_prominence);
            const double lo = std::min(m.tm_relative_prominence, m.qo_relative_prominence);
            if (hi >= kProminenceMismatch * lo) {
                if (c.qualitative_mismatch) why << "; ";
                c.qualitative_mismatch = true;
                why << "peak near " << angular_to_mhz(m.tm_position) << " MHz is "
                    << (m.tm_relative_prominence > m.qo_relative_prominence ? "pronounced in tm, marginal in qo"
                                                                            : "pronounced in qo, marginal in tm");
            }
        }
        c.reason = why.str();
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace fibernet
