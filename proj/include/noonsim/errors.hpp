#pragma once

#include <stdexcept>
#include <string>

namespace noonsim {

// Base error. `name()` is stable and machine-readable; the CLI prints it on
// the diagnostic stream as "error: <name>: <message>".
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& message)
        : std::runtime_error(name + ": " + message), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

#define NOONSIM_DEFINE_ERROR(Name)                                     \
    class Name : public Error {                                        \
    public:                                                            \
        explicit Name(const std::string& message) : Error(#Name, message) {} \
    }

NOONSIM_DEFINE_ERROR(CapExceeded);
NOONSIM_DEFINE_ERROR(DimensionMismatch);
NOONSIM_DEFINE_ERROR(OutOfRange);
NOONSIM_DEFINE_ERROR(NotUnitary);
NOONSIM_DEFINE_ERROR(ZeroPolynomial);
NOONSIM_DEFINE_ERROR(InfiniteRoot);
NOONSIM_DEFINE_ERROR(PhotonNumberMismatch);
NOONSIM_DEFINE_ERROR(WindowExceeded);
NOONSIM_DEFINE_ERROR(GridInadequate);
NOONSIM_DEFINE_ERROR(DegenerateJSA);
NOONSIM_DEFINE_ERROR(UnsupportedCase);
NOONSIM_DEFINE_ERROR(FlatCurve);
NOONSIM_DEFINE_ERROR(InvalidRequest);
NOONSIM_DEFINE_ERROR(IOFailure);

#undef NOONSIM_DEFINE_ERROR

} // namespace noonsim
