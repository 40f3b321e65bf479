#pragma once

#include <stdexcept>
#include <string>

namespace tvpl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// energy
struct ZeroGradientPoint : Error {
    ZeroGradientPoint() : Error("gradient integrand is nonsmooth at z = 0; use subdifferential_membership") {}
};
struct InvalidRange : Error {
    using Error::Error;
};
struct NotSymmetric : Error {
    using Error::Error;
};
struct InvalidModel : Error {
    using Error::Error;
};

// discrete fields
struct InvalidGrid : Error {
    using Error::Error;
};
struct InvalidExponent : Error {
    using Error::Error;
};
struct ZeroStep : Error {
    ZeroStep() : Error("difference quotient step must be nonzero") {}
};
struct GridMismatch : Error {
    using Error::Error;
};

// solver
struct InvalidOptions : Error {
    using Error::Error;
};
struct BoundaryOrderViolated : Error {
    using Error::Error;
};

// convex
struct NotConvex : Error {
    using Error::Error;
};
struct BoundaryNode : Error {
    using Error::Error;
};
struct WindowTooLarge : Error {
    using Error::Error;
};

// barrier
struct CenterSingularity : Error {
    CenterSingularity() : Error("barrier is singular at its center") {}
};

// liouville
struct InvalidDimension : Error {
    using Error::Error;
};
struct SlabTooNarrow : Error {
    using Error::Error;
};
struct NotGeneralized : Error {
    using Error::Error;
};

} // namespace tvpl
