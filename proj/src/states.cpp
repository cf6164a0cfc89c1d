#include "pptdisc/states.hpp"

#include <array>
#include <utility>

namespace pptdisc {
namespace {

constexpr std::array<std::pair<StateFamily, std::string_view>, 13> kNames{{
    {StateFamily::Psi1, "psi1"},
    {StateFamily::Psi2, "psi2"},
    {StateFamily::Psi3, "psi3"},
    {StateFamily::Psi4, "psi4"},
    {StateFamily::Pi1, "pi1"},
    {StateFamily::Pi2, "pi2"},
    {StateFamily::PiHat1, "pihat1"},
    {StateFamily::PiHat2, "pihat2"},
    {StateFamily::IdentityPair, "identity_pair"},
    {StateFamily::PhiPlus, "phi_plus"},
    {StateFamily::PhiMinus, "phi_minus"},
    {StateFamily::PsiPlus, "psi_plus"},
    {StateFamily::PsiMinus, "psi_minus"},
}};

}  // namespace

std::string_view to_string(StateFamily family) {
    for (const auto& [f, name] : kNames) {
        if (f == family) return name;
    }
    return "unknown";
}

StateFamily state_family_from_string(std::string_view name) {
    for (const auto& [f, n] : kNames) {
        if (n == name) return f;
    }
    throw InvalidArgument("unknown state family '" + std::string(name) + "'");
}

}  // namespace pptdisc
