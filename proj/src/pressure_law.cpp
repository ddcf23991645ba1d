#include "machlimit/pressure_law.hpp"

#include <cmath>
#include <stdexcept>

namespace machlimit {

PressureLaw PressureLaw::gamma_law(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma_law: gamma must be positive");
    PressureLaw law;
    law.pressure_ = [gamma](double rho) { return std::pow(rho, gamma) / gamma; };
    law.dpressure_ = [gamma](double rho) { return std::pow(rho, gamma - 1.0); };
    return law;
}

PressureLaw PressureLaw::custom(std::function<double(double)> pressure,
                                std::function<double(double)> dpressure) {
    PressureLaw law;
    law.pressure_ = std::move(pressure);
    law.dpressure_ = std::move(dpressure);
    return law;
}

bool PressureLaw::normalized(double tol) const {
    return std::abs(dpressure_(1.0) - 1.0) <= tol;
}

double PressureLaw::j_coeff(double a) { return a / (1.0 + a); }

double PressureLaw::k_coeff(double a) const {
    return dpressure_(1.0 + a) / (1.0 + a) - 1.0;
}

bool ScaleFactors::is_identity(double tol) const {
    return std::abs(time - 1.0) <= tol && std::abs(space - 1.0) <= tol &&
           std::abs(velocity - 1.0) <= tol && std::abs(density - 1.0) <= tol;
}

NormalizedSystem normalize_parameters(double rho_inf, const PressureLaw& law,
                                      const LameParams& lame) {
    if (!(rho_inf > 0.0))
        throw std::invalid_argument("normalize_parameters: rho_inf must be positive");
    const double c_inf = law.dpressure(rho_inf);
    if (!(c_inf > 0.0))
        throw std::invalid_argument("normalize_parameters: P'(rho_inf) must be positive");
    const double nu = lame.nu();
    if (!(nu > 0.0))
        throw std::invalid_argument("normalize_parameters: non-elliptic viscosity nu <= 0");

    NormalizedSystem out{
        PressureLaw::custom(
            [law, rho_inf, c_inf](double rho) {
                return law.pressure(rho_inf * rho) / (rho_inf * c_inf);
            },
            [law, rho_inf, c_inf](double rho) { return law.dpressure(rho_inf * rho) / c_inf; }),
        LameParams{lame.mu / nu, lame.lambda / nu},
        ScaleFactors{nu / (rho_inf * c_inf), nu / (rho_inf * std::sqrt(c_inf)),
                     1.0 / std::sqrt(c_inf), 1.0 / rho_inf}};
    if (!out.law.normalized())
        throw std::logic_error("normalize_parameters: rescaled law failed P'(1) = 1");
    return out;
}

namespace {

SpectralField guarded_composition(const SpectralField& a,
                                  const std::function<double(double)>& h) {
    auto vals = a.to_physical_oversampled();
    for (double v : vals)
        if (1.0 + v <= 0.0) throw std::domain_error("vacuum-adjacent state");
    for (auto& v : vals) v = h(v);
    SpectralField out = SpectralField::from_physical_oversampled(a.grid(), vals);
    out.dealias();
    return out;
}

} // namespace

SpectralField apply_j(const SpectralField& a) {
    return guarded_composition(a, [](double v) { return PressureLaw::j_coeff(v); });
}

SpectralField apply_k(const SpectralField& a, const PressureLaw& law) {
    return guarded_composition(a, [&law](double v) { return law.k_coeff(v); });
}

} // namespace machlimit
