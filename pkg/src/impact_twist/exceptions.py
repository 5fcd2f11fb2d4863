class ImpactTwistError(Exception):
    """Base class for all errors raised by impact_twist."""


class DomainError(ImpactTwistError, ValueError):
    """Raised when an argument lies outside the mathematical domain of an operation."""

    def __init__(self, name, value, requirement):
        message = f"Argument '{name}' = {value!r} is outside the domain: {requirement}."

        super().__init__(message)


class PeriodConsistencyError(ImpactTwistError):
    """Raised when the quadrature period and the event-detected period disagree."""

    def __init__(self, quadrature_period, event_period, tol):
        message = (
            f"Period mismatch: quadrature T0={quadrature_period!r}, "
            f"event detection T0={event_period!r}, tolerance {tol!r}."
        )

        super().__init__(message)


class QuadratureError(ImpactTwistError):
    """Raised when the period quadrature does not converge."""

    def __init__(self, n, abserr, tol, reason=None):
        if reason:
            message = f"Period quadrature for n={n} failed: {reason}"
        else:
            message = (
                f"Period quadrature for n={n} did not converge: error {abserr!r} > {tol!r}."
            )

        super().__init__(message)


class IntegrationError(ImpactTwistError):
    """Raised when the ODE solver fails."""

    def __init__(self, t, message):
        super().__init__(f"Integration failed at t={t!r}: {message}")


class StiffnessError(IntegrationError):
    """Raised when the adaptive step size underflows."""

    def __init__(self, t):
        super().__init__(t, "step size underflow (stiff or singular dynamics)")


class DegenerateContactError(IntegrationError):
    """Raised when the particle touches the barrier with (almost) zero speed."""

    def __init__(self, t, v):
        super().__init__(t, f"degenerate contact at x=0 with |v|={abs(v)!r} < 1e-12")


class EscapeError(IntegrationError):
    """Raised when no impact happens before the time cap."""

    def __init__(self, t, cap):
        super().__init__(t, f"no impact within the time cap {cap!r}")


class OutOfRegimeError(ImpactTwistError, ValueError):
    """Raised when parameters leave the large-energy regime the transformations need."""

    def __init__(self, message):
        super().__init__(f"Out of regime: {message}")


class ConvergenceError(ImpactTwistError):
    """Raised when a root finder fails to converge."""

    def __init__(self, what, residual):
        super().__init__(f"{what} did not converge (residual {residual!r}).")


class BackendDisagreementError(ImpactTwistError):
    """Raised when the PHYSICAL and DIRECT Poincare backends disagree."""

    def __init__(self, physical, direct, tol):
        message = (
            f"Poincare backends disagree by more than {tol!r}: "
            f"physical={physical!r}, direct={direct!r}."
        )

        super().__init__(message)


class DegenerateGridError(ImpactTwistError, ValueError):
    """Raised when a scaling fit is requested on an unusable grid."""

    def __init__(self, reason):
        super().__init__(f"Degenerate scaling grid: {reason}.")


class ConfigParseError(ImpactTwistError):
    """Raised when an experiment configuration cannot be parsed."""

    def __init__(self, path, problems, line=None, column=None, problem_lines=None):
        location = f" (line {line}, column {column})" if column is not None else ""
        self.problems = list(problems)
        self.line = line
        if problem_lines is None:
            problem_lines = [line] * len(self.problems)
        self.problem_lines = list(problem_lines)
        prefixes = [
            f"line {at}: " if at is not None and column is None else ""
            for at in self.problem_lines
        ]
        details = "\n".join(f"  - {p}{problem}" for p, problem in zip(prefixes, self.problems))
        message = f"Invalid configuration '{path}'{location}:\n{details}"

        super().__init__(message)
