#pragma once

#include <stdexcept>
#include <string>

namespace stabenv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnassignedSymbol : Error {
    explicit UnassignedSymbol(const std::string& name)
        : Error("unassigned symbol: " + name) {}
};

struct PoleAtArgument : Error {
    using Error::Error;
};

struct NonGenericParameters : Error {
    using Error::Error;
};

struct LimitUnstable : Error {
    using Error::Error;
};

struct InvolutionUndefined : Error {
    using Error::Error;
};

struct PairNotConnected : Error {
    using Error::Error;
};

struct BoxNotInTree : Error {
    using Error::Error;
};

struct DiagramOutOfRectangle : Error {
    using Error::Error;
};

struct SingularRestrictionMatrix : Error {
    using Error::Error;
};

struct InvalidNK : Error {
    using Error::Error;
};

} // namespace stabenv
