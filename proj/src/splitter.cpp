#include "fibernet/splitter.hpp"

#include <cmath>
#include <limits>

#include "fibernet/error.hpp"
#include "parallel.hpp"

namespace fibernet {

namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

void validate(const SplitterParams& p) {
    if (!std::isfinite(p.reflectance) || p.reflectance < 0.0 || p.reflectance > 1.0)
        throw_invalid("splitter R must lie in [0, 1]");
}

void validate(const SplitNetwork& net) {
    if (net.left_chain.elements.empty() || net.right_chain.elements.empty())
        throw_invalid("both sides of a split network need elements");
    validate(net.left_chain);
    validate(net.right_chain);
    validate(net.splitter);
}

SplitNetwork insert_splitter(const NetworkSpec& chain, std::size_t segment_index, SplitterParams splitter,
                             double fraction) {
    if (segment_index >= chain.elements.size() || !std::holds_alternative<SegmentParams>(chain.elements[segment_index]))
        throw_invalid("splitter insertion point is not a segment");
    if (!(fraction > 0.0 && fraction < 1.0)) throw_invalid("splitter insertion fraction must lie in (0, 1)");
    const auto& seg = std::get<SegmentParams>(chain.elements[segment_index]);
    SegmentParams first = seg, second = seg;
    first.length = seg.length * fraction;
    second.length = seg.length - first.length;
    // single-pass power efficiency splits multiplicatively with length
    first.efficiency = std::pow(seg.efficiency, fraction);
    second.efficiency = std::pow(seg.efficiency, 1.0 - fraction);

    SplitNetwork net;
    net.splitter = splitter;
    net.left_chain.name = chain.name + ":S1";
    net.right_chain.name = chain.name + ":S2";
    net.left_chain.elements.assign(chain.elements.begin(), chain.elements.begin() + segment_index);
    net.left_chain.elements.push_back(first);
    net.right_chain.elements.push_back(second);
    net.right_chain.elements.insert(net.right_chain.elements.end(), chain.elements.begin() + segment_index + 1,
                                    chain.elements.end());
    return net;
}

Matrix4 splitter_scattering_4port(const SplitterParams& p) {
    validate(p);
    const Complex r = kI * std::sqrt(p.reflectance);
    const Complex t = std::sqrt(p.transmittance());
    return {{{0.0, r, t, 0.0}, {r, 0.0, 0.0, t}, {t, 0.0, 0.0, r}, {0.0, t, r, 0.0}}};
}

SplitterOutputs solve_outputs(const TransferMatrix& left, const TransferMatrix& right, const SplitterParams& p,
                              const DriveVector& drive) {
    validate(p);
    const ScatteringMatrix s1 = transfer_to_scattering(left);
    const ScatteringMatrix s2 = transfer_to_scattering(right);
    const double tb = p.transmittance();
    const double st = std::sqrt(tb);
    const Complex ir = kI * std::sqrt(p.reflectance);

    const Complex gap = 1.0 - tb * s1.s12 * s2.s21;
    if (std::abs(gap) < kLoopTolerance) throw Error(ErrorCode::loop_singular, "splitter loop factor diverges");
    const Complex loop = 1.0 / gap;

    // field a1 arriving at the splitter from the left, after all round trips
    const Complex a1 = loop * (s1.s11 * drive.e1_in + ir * s1.s12 * drive.ed_in + ir * st * s1.s12 * s2.s21 * drive.eu_in +
                               st * s1.s12 * s2.s22 * drive.e2_in);
    const Complex b1 = st * a1 + ir * drive.eu_in;
    const Complex b2 = s2.s21 * b1 + s2.s22 * drive.e2_in;
    const Complex a2 = ir * drive.ed_in + st * b2;

    SplitterOutputs out;
    out.loop_factor = loop;
    out.e1_out = s2.s11 * b1 + s2.s12 * drive.e2_in;
    out.e2_out = s1.s21 * drive.e1_in + s1.s22 * a2;
    out.ed_out = ir * a1 + st * drive.eu_in;
    out.eu_out = st * drive.ed_in + ir * b2;
    return out;
}

SplitterOutputs solve_outputs(const SplitNetwork& net, const DriveVector& drive, double detuning) {
    validate(net);
    return solve_outputs(compose(net.left_chain, detuning), compose(net.right_chain, detuning), net.splitter, drive);
}

SplitterOutputs solve_drive_left(const TransferMatrix& left, const TransferMatrix& right, const SplitterParams& p,
                                 Complex e1_in) {
    validate(p);
    const double tb = p.transmittance();
    const Complex ir = kI * std::sqrt(p.reflectance);
    const TransferMatrix total = left * loss_transfer(tb) * right;
    if (std::abs(total.t11) < kSingularTolerance) throw Error(ErrorCode::singular_conversion, "opaque split network");
    const Complex refl = total.t21 / total.t11;
    const Complex det1 = left.det();

    SplitterOutputs out;
    out.e1_out = e1_in / total.t11;
    out.e2_out = refl * e1_in;
    out.ed_out = ir / det1 * (left.t22 - left.t12 * refl) * e1_in;
    out.eu_out = ir / (std::sqrt(tb) * det1) * (-left.t21 + left.t11 * refl) * e1_in;
    out.loop_factor = 1.0 / (1.0 - tb * (-left.t12 / left.t11) * (right.t21 / right.t11));
    return out;
}

SplitterOutputs solve_drive_up(const TransferMatrix& left, const TransferMatrix& right, const SplitterParams& p,
                               Complex eu_in) {
    validate(p);
    const double rb = p.reflectance, tb = p.transmittance();
    const Complex s1_12 = -left.t12 / left.t11;
    const Complex r2 = right.t21 / right.t11;
    const Complex gap = 1.0 - tb * s1_12 * r2;
    if (std::abs(gap) < kLoopTolerance) throw Error(ErrorCode::loop_singular, "splitter loop factor diverges");
    const Complex loop = 1.0 / gap;

    SplitterOutputs out;
    out.loop_factor = loop;
    out.e1_out = kI * std::sqrt(rb) * loop / right.t11 * eu_in;
    out.e2_out = kI * std::sqrt(rb * tb) * (left.det() / left.t11) * r2 * loop * eu_in;
    out.eu_out = -rb * r2 * loop * eu_in;
    out.ed_out = std::sqrt(tb) * (1.0 + rb * (left.t12 / left.t11) * r2 * loop) * eu_in;
    return out;
}

SpectraResult splitter_spectrum(const SplitNetwork& net, const DriveVector& drive,
                                const std::vector<double>& detunings, unsigned jobs) {
    validate(net);
    const double power = drive.total_power();
    if (!(power > 0.0) || !std::isfinite(power)) throw_invalid("drive vector must carry nonzero finite power");
    const double norm = 1.0 / std::sqrt(power);
    const std::size_t n = detunings.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    SpectraResult res;
    res.detunings = detunings;
    res.flags.assign(n, point_ok);
    for (const char* name : {"E1_out", "E2_out", "Eu_out", "Ed_out"})
        res.ports.push_back({name, std::vector<Complex>(n), std::vector<double>(n)});

    const kernels::KernelTable& table = kernels::active();
    detail::for_chunks(n, jobs, [&](std::size_t lo, std::size_t hi) {
        const std::vector<double> part(detunings.begin() + lo, detunings.begin() + hi);
        kernels::MatrixBatch t1, t2;
        bool opaque = false;
        try {
            compose_batch(net.left_chain, part, t1, table);
            compose_batch(net.right_chain, part, t2, table);
        } catch (const Error& err) {
            if (err.code() != ErrorCode::singular_conversion) throw;
            opaque = true;
        }
        const kernels::ConstBatchView v1 = std::as_const(t1).view(), v2 = std::as_const(t2).view();
        for (std::size_t k = 0; k < part.size(); ++k) {
            const std::size_t i = lo + k;
            auto put = [&](std::size_t port, Complex amp) {
                res.ports[port].amplitude[i] = amp;
                res.ports[port].power[i] = std::norm(amp);
            };
            if (opaque) {
                res.flags[i] = point_singular;
                for (std::size_t p = 0; p < 4; ++p) put(p, {nan, nan});
                continue;
            }
            auto at = [k](const kernels::ConstBatchView& v) {
                return TransferMatrix{{v.re[0][k], v.im[0][k]}, {v.re[1][k], v.im[1][k]},
                                      {v.re[2][k], v.im[2][k]}, {v.re[3][k], v.im[3][k]}};
            };
            try {
                const SplitterOutputs o = solve_outputs(at(v1), at(v2), net.splitter, drive);
                put(0, o.e1_out * norm);
                put(1, o.e2_out * norm);
                put(2, o.eu_out * norm);
                put(3, o.ed_out * norm);
            } catch (const Error& err) {
                if (err.code() == ErrorCode::loop_singular)
                    res.flags[i] = point_loop_singular;
                else if (err.code() == ErrorCode::singular_conversion)
                    res.flags[i] = point_singular;
                else
                    throw;
                for (std::size_t p = 0; p < 4; ++p) put(p, {nan, nan});
            }
        }
    });
    return res;
}

SpectraResult splitter_spectrum(const SplitNetwork& net, const DriveVector& drive, const SweepSpec& sweep,
                                unsigned jobs) {
    return splitter_spectrum(net, drive, sweep.detunings(), jobs);
}

}  // namespace fibernet
