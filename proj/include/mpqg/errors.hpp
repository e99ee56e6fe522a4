#pragma once

#include <stdexcept>
#include <string>

namespace mpqg {

// Every engine failure carries a stable code name so the CLI can report it.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define MPQG_ERROR(Name)                                                        \
    struct Name : Error {                                                       \
        explicit Name(const std::string& d = "") : Error(#Name, d) {}           \
    }

MPQG_ERROR(NonPositiveValuation);
MPQG_ERROR(ValuationUnderflow);
MPQG_ERROR(IndexOutOfRange);
MPQG_ERROR(NotInvertible);
MPQG_ERROR(NotSymmetrizable);
MPQG_ERROR(NotCartanType);
MPQG_ERROR(RankTooSmall);
MPQG_ERROR(SmallObstruction);
MPQG_ERROR(NotAntisymmetric);
MPQG_ERROR(NotSplitMinimal);
MPQG_ERROR(AltSViolated);
MPQG_ERROR(SymmetricPartMismatch);
MPQG_ERROR(JacobiFailure);
MPQG_ERROR(CompletionIncomplete);
MPQG_ERROR(UnsupportedArgument);
MPQG_ERROR(LaurentLeak);
MPQG_ERROR(NotLiftable);
MPQG_ERROR(ExpArgument);
MPQG_ERROR(SyntaxError);
MPQG_ERROR(ConfigError);
MPQG_ERROR(DimensionMismatch);
MPQG_ERROR(InvalidRealization);
MPQG_ERROR(BoundTooSmall);

#undef MPQG_ERROR

}  // namespace mpqg
