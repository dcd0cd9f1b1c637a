#pragma once

#include <string>

namespace poshawk {

/// Memory kernel ψ(s): constant for the first five minutes, then
/// power-law decay. PaperLiteral keeps the published tail constant
/// 5.44e-7 (which leaves a large jump at s = 300 and total mass ≈ 0.195);
/// ContinuityCorrected rescales the tail so ψ is continuous at the
/// breakpoint and integrates to ≈ 1.
enum class KernelMode { PaperLiteral, ContinuityCorrected };

KernelMode kernel_mode_from_string(const std::string& s);
std::string kernel_mode_name(KernelMode mode);

constexpr double kPsiPlateau = 6.49e-4;
constexpr double kPsiBreak = 300.0;
constexpr double kPsiExponent = -1.242;
constexpr double kPsiTailPaper = 5.44e-7;
/// Tail coefficient making ψ continuous at the breakpoint:
/// 6.49e-4 * 300^1.242.
double psi_tail_coefficient(KernelMode mode);

double psi(double s, KernelMode mode);

/// Exact ∫_a^b ψ(s) ds (antiderivative in closed form). The region s < 0
/// contributes nothing. b may be +infinity.
double psi_integral(double a, double b, KernelMode mode);

/// Total mass ∫_0^∞ ψ.
double psi_total_mass(KernelMode mode);

/// Parameters of the influence function p_i(t): per-origin scale p0,
/// shared circadian modulation (r0, phi0) and decay time tau_m. The
/// oscillation period is fixed to one day.
struct InfluenceParams {
    double p0 = 0;
    double r0 = 0;
    double phi0 = 0;
    double tau_m = 1;
    static constexpr double kPeriod = 86400.0;  // T_m
};

/// p0 * [1 - S*r0*sin(2π(t+phi0)/T_m)] * exp(-(t-t0)/tau_m), clamped at
/// zero from below. Requires t >= t0.
double influence(const InfluenceParams& params, int pos, double t0, double t);

/// Non-increasing upper bound: p0 * (1 + |S*r0|) * exp(-(t-t0)/tau_m).
double influence_envelope(const InfluenceParams& params, int pos, double t0, double t);

}  // namespace poshawk
