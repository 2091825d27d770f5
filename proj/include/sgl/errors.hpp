#pragma once

#include <stdexcept>
#include <string>

namespace sgl {

// Every failure carries a stable machine-readable code (used by the CLI records).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define SGL_DEFINE_ERROR(Name)                                              \
    struct Name : Error {                                                   \
        explicit Name(const std::string& what) : Error(#Name, what) {}      \
    };

SGL_DEFINE_ERROR(SingularPoint)
SGL_DEFINE_ERROR(SingularConfiguration)
SGL_DEFINE_ERROR(BudgetExceeded)
SGL_DEFINE_ERROR(PsiNotNormalized)
SGL_DEFINE_ERROR(NotNeutral)
SGL_DEFINE_ERROR(RegimeViolation)
SGL_DEFINE_ERROR(CausalPreconditionViolated)
SGL_DEFINE_ERROR(IllConditionedBasis)
SGL_DEFINE_ERROR(ExtrapolationUnstable)
SGL_DEFINE_ERROR(ConfigInvalid)

#undef SGL_DEFINE_ERROR

}  // namespace sgl
