#pragma once

#include <stdexcept>
#include <string>

namespace bathforge {

// Every failure raised by the library derives from Error. The code() string is
// the stable, machine-readable tag the CLI prints after "ERROR <exit>:".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define BATHFORGE_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                        \
    public:                                                            \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    }

BATHFORGE_DEFINE_ERROR(DomainError);
BATHFORGE_DEFINE_ERROR(PoleError);
BATHFORGE_DEFINE_ERROR(OverflowError);
BATHFORGE_DEFINE_ERROR(NoSignChange);
BATHFORGE_DEFINE_ERROR(PoleOnBoundary);
BATHFORGE_DEFINE_ERROR(InstabilityError);
BATHFORGE_DEFINE_ERROR(ValidityError);
BATHFORGE_DEFINE_ERROR(NotFound);
BATHFORGE_DEFINE_ERROR(DerivativeUnstable);
BATHFORGE_DEFINE_ERROR(SingularTransduction);
BATHFORGE_DEFINE_ERROR(ZeroDrive);
BATHFORGE_DEFINE_ERROR(ParseError);
BATHFORGE_DEFINE_ERROR(ValidationError);

#undef BATHFORGE_DEFINE_ERROR

// Raised when an iterative method exhausts its budget. Carries the best
// estimate so callers can decide whether it is good enough.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double best_estimate, double error_estimate)
        : Error("NonConvergence", what), best_(best_estimate), err_(error_estimate) {}

    double best_estimate() const noexcept { return best_; }
    double error_estimate() const noexcept { return err_; }

private:
    double best_;
    double err_;
};

}  // namespace bathforge
