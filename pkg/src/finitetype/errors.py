"""Exception hierarchy shared by every module of the package."""


class FiniteTypeError(Exception):
    """Base class; the CLI maps subclasses to exit codes by name."""


class IFSValidationError(FiniteTypeError, ValueError):
    """An IFS fails one or more of its invariants.

    ``violations`` holds every individual violation found, so callers can
    report all of them at once instead of fixing one per run.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class _IndexedViolation(IFSValidationError):
    def __init__(self, index, message):
        self.index = index
        self.message = message
        FiniteTypeError.__init__(self, f"{type(self).__name__} at index {index}: {message}")
        self.violations = [self]

    def __str__(self):
        return f"{type(self).__name__} at index {self.index}: {self.message}"


class HullViolation(_IndexedViolation):
    pass


class SupportGap(_IndexedViolation):
    pass


class ProbabilitySum(_IndexedViolation):
    pass


class StandardAssumptionViolation(_IndexedViolation):
    pass


class CapExceeded(FiniteTypeError):
    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"more than {cap} reduced characteristic vectors; "
                         "finite type not verified at this cap")


class BudgetExceeded(FiniteTypeError):
    pass


class StructureViolation(FiniteTypeError):
    pass


class DimensionMismatch(FiniteTypeError, ValueError):
    pass


class NonConvergence(FiniteTypeError):
    def __init__(self, tol, iterations):
        self.tol = tol
        self.iterations = iterations
        super().__init__(f"power iteration did not reach tol={tol} in {iterations} iterations")


class NoEssentialClass(FiniteTypeError):
    pass


class MultipleEssentialClasses(FiniteTypeError):
    pass


class DepthExceeded(FiniteTypeError):
    pass


class OverlapError(FiniteTypeError):
    pass


class ParityError(FiniteTypeError, ValueError):
    pass


class CongruenceError(FiniteTypeError, ValueError):
    pass


class ProbabilityError(FiniteTypeError, ValueError):
    pass


class RequirementViolation(FiniteTypeError):
    def __init__(self, requirement, witness):
        self.requirement = requirement
        self.witness = witness
        super().__init__(f"requirement ({requirement}) fails: {witness}")


class Infeasible(FiniteTypeError):
    pass


class NoCrossing(FiniteTypeError):
    pass


class InsufficientMass(FiniteTypeError):
    pass


# stable process exit codes for the command line, one per error class
EXIT_CODES = {cls.__name__: 10 + i for i, cls in enumerate([
    IFSValidationError, HullViolation, SupportGap, ProbabilitySum,
    StandardAssumptionViolation, CapExceeded, BudgetExceeded, StructureViolation,
    DimensionMismatch, NonConvergence, NoEssentialClass, MultipleEssentialClasses,
    DepthExceeded, OverlapError, ParityError, CongruenceError, ProbabilityError,
    RequirementViolation, Infeasible, NoCrossing, InsufficientMass,
])}
