#include "poshawk/kernels.hpp"

#include <cmath>
#include <limits>

#include "poshawk/errors.hpp"

namespace poshawk {

KernelMode kernel_mode_from_string(const std::string& s) {
    if (s == "paper") return KernelMode::PaperLiteral;
    if (s == "continuous") return KernelMode::ContinuityCorrected;
    throw IoError("kernel_mode must be 'paper' or 'continuous', got '" + s + "'");
}

std::string kernel_mode_name(KernelMode mode) {
    return mode == KernelMode::PaperLiteral ? "paper" : "continuous";
}

double psi_tail_coefficient(KernelMode mode) {
    static const double cont = kPsiPlateau * std::pow(kPsiBreak, -kPsiExponent);
    return mode == KernelMode::PaperLiteral ? kPsiTailPaper : cont;
}

double psi(double s, KernelMode mode) {
    if (s < 0) return 0.0;
    if (s <= kPsiBreak) return kPsiPlateau;
    return psi_tail_coefficient(mode) * std::pow(s, kPsiExponent);
}

double psi_integral(double a, double b, KernelMode mode) {
    if (!(a <= b)) throw NumericError("psi_integral: a must be <= b");
    a = std::max(a, 0.0);
    if (b <= a) return 0.0;
    double total = 0.0;
    if (a < kPsiBreak) {
        total += kPsiPlateau * (std::min(b, kPsiBreak) - a);
    }
    if (b > kPsiBreak) {
        const double lo = std::max(a, kPsiBreak);
        const double q = kPsiExponent + 1.0;  // -0.242
        const double hi_pow = std::isinf(b) ? 0.0 : std::pow(b, q);
        total += psi_tail_coefficient(mode) * (hi_pow - std::pow(lo, q)) / q;
    }
    return total;
}

double psi_total_mass(KernelMode mode) {
    return psi_integral(0.0, std::numeric_limits<double>::infinity(), mode);
}

double influence(const InfluenceParams& params, int pos, double t0, double t) {
    if (t < t0) throw NumericError("influence: t precedes origin time t0");
    const double bracket =
        1.0 - (pos * params.r0) *
                  std::sin(2.0 * M_PI * (t + params.phi0) / InfluenceParams::kPeriod);
    const double v = params.p0 * bracket * std::exp(-(t - t0) / params.tau_m);
    return v > 0.0 ? v : 0.0;
}

double influence_envelope(const InfluenceParams& params, int pos, double t0, double t) {
    if (t < t0) throw NumericError("influence_envelope: t precedes origin time t0");
    return params.p0 * (1.0 + std::abs(pos * params.r0)) *
           std::exp(-(t - t0) / params.tau_m);
}

}  // namespace poshawk
