#pragma once

#include <stdexcept>
#include <string>

namespace chainrec {

// Exit-code categories used by the CLI.
enum class ErrorKind { Input = 2, Precondition = 3, Premise = 4 };

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), kind_(kind), name_(std::move(name)) {}
    ErrorKind kind() const { return kind_; }
    const std::string& name() const { return name_; }

  private:
    ErrorKind kind_;
    std::string name_;
};

#define CHAINREC_ERROR(NAME, KIND)                                    \
    struct NAME : Error {                                             \
        explicit NAME(const std::string& detail)                      \
            : Error(ErrorKind::KIND, #NAME, detail) {}                \
    }

CHAINREC_ERROR(DegenerateSimplex, Input);
CHAINREC_ERROR(DuplicateVertex, Input);
CHAINREC_ERROR(SubcomplexMismatch, Input);
CHAINREC_ERROR(EmptyComplex, Input);
CHAINREC_ERROR(PointOutsideComplex, Input);
CHAINREC_ERROR(FormatError, Input);
CHAINREC_ERROR(AmbientDimUnsupported, Input);

CHAINREC_ERROR(EpsilonTooSmall, Precondition);
CHAINREC_ERROR(PointNotInNet, Precondition);
CHAINREC_ERROR(NotARetraction, Precondition);
CHAINREC_ERROR(ChainNotFound, Precondition);
CHAINREC_ERROR(CellsCollide, Precondition);
CHAINREC_ERROR(BetaTooLarge, Precondition);
CHAINREC_ERROR(ApproximationFailed, Precondition);
CHAINREC_ERROR(BadParameter, Precondition);

CHAINREC_ERROR(PremiseViolated, Premise);
CHAINREC_ERROR(BlendEscapesComplex, Premise);

#undef CHAINREC_ERROR

}  // namespace chainrec
