#pragma once

#include <optional>
#include <string_view>

namespace stacharge {

enum class PulseFamily { Gaussian, Sinusoid, Ramp };

std::string_view to_string(PulseFamily family);
std::optional<PulseFamily> parse_pulse_family(std::string_view name);

/// Optional overrides for the family shape parameters, in time units of 1/omega0.
/// Unset fields take the defaults alpha = tau_c/10, sigma = tau_c/6, beta = tau_c/10.
struct PulseShape {
    std::optional<double> alpha;
    std::optional<double> sigma;
    std::optional<double> beta;
};

/// A validated pulse family together with its shape parameters.
///
/// Gaussian:  Omega_1 = omega0 exp[-(t - tc/2 - alpha)^2 / sigma^2], Omega_2 with +alpha.
/// Sinusoid:  single sin^4 lobes, Omega_1 = omega0 sin^4[pi (t - beta)/tc] while the
///            argument lies in [0, pi] and zero otherwise; Omega_2 uses t + beta.
/// Ramp:      Omega_1 = omega0 [1 - cos(pi t/tc)], Omega_2 = omega0 cos(pi t/tc).
///
/// All pulse functions are total in t; the charging window is a property of the time grid.
class PulseSpec {
public:
    /// Throws ValidationError when omega0 <= 0, tau_c <= 0, sigma <= 0 or any value is non-finite.
    PulseSpec(PulseFamily family, double omega0, double tau_c, PulseShape shape = {});

    static PulseSpec gaussian(double omega0, double tau_c) { return {PulseFamily::Gaussian, omega0, tau_c}; }
    static PulseSpec sinusoid(double omega0, double tau_c) { return {PulseFamily::Sinusoid, omega0, tau_c}; }
    static PulseSpec ramp(double omega0, double tau_c) { return {PulseFamily::Ramp, omega0, tau_c}; }

    PulseFamily family() const noexcept { return family_; }
    double omega0() const noexcept { return omega0_; }
    double tau_c() const noexcept { return tau_c_; }
    double alpha() const noexcept { return alpha_; }
    double sigma() const noexcept { return sigma_; }
    double beta() const noexcept { return beta_; }

    /// Dimensionless charging time omega0 * tau_c.
    double omega0_tau_c() const noexcept { return omega0_ * tau_c_; }

    /// Same family and shape rules, new charging time. Defaulted shape parameters are
    /// recomputed from the new tau_c; explicit overrides are kept.
    PulseSpec with_tau_c(double tau_c) const;

private:
    PulseFamily family_;
    double omega0_;
    double tau_c_;
    PulseShape overrides_;
    double alpha_;
    double sigma_;
    double beta_;
};

struct PulsePair {
    double omega1;
    double omega2;
};

struct PulseSample {
    double omega1;
    double omega2;
    double omega_a;
};

struct ModifiedPulses {
    double omega1_tilde;
    double omega2_tilde;
    double phi;
};

PulsePair eval_pair(const PulseSpec& spec, double t);

/// Time derivatives (dOmega_1/dt, dOmega_2/dt) in closed form.
PulsePair eval_pair_derivative(const PulseSpec& spec, double t);

PulseSample eval_sample(const PulseSpec& spec, double t);

/// Mixing angle with tan(theta) = omega1/omega2, continuous on [0, pi).
/// Throws NumericalError(DegenerateAngle) when both inputs are zero.
double mixing_angle(double omega1, double omega2);

/// theta-dot = (dOmega_1 Omega_2 - Omega_1 dOmega_2) / (Omega_1^2 + Omega_2^2).
double eval_cd_from_derivatives(double omega1, double omega2, double domega1, double domega2);

/// Closed-form counter-diabatic pulse for the selected family.
/// Gaussian: (2 alpha/sigma^2) sech(4 alpha (t - tc/2)/sigma^2).
double eval_cd_analytic(const PulseSpec& spec, double t);

/// sup of |Omega_a| over [0, tau_c]. Exact for the Gaussian family; grid search with
/// golden-section refinement otherwise.
double max_cd_amplitude(const PulseSpec& spec);

/// Frame-rotated pulses that remove the forbidden |e1><e3| coupling:
/// phi = atan2(Omega_a, Omega_1), Omega~_1 = hypot(Omega_1, Omega_a), Omega~_2 = Omega_2 - phi-dot.
/// Throws NumericalError(DegenerateAngle) naming t when Omega_1 = Omega_a = 0.
ModifiedPulses modified_pulses(const PulseSpec& spec, double t);

/// Rotation angle phi(t) alone (the same branch used by modified_pulses).
double rotation_angle(const PulseSpec& spec, double t);

}  // namespace stacharge
