"""Exception hierarchy.

``SpecError`` covers malformed or inadmissible user input, ``CapExceeded``
covers inputs that are valid but exceed one of the documented size caps.
The CLI maps them to exit codes 2 and 3.
"""


class SpecError(ValueError):
    pass


class InvalidField(SpecError):
    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class NegativeCoefficient(SpecError):
    def __init__(self, k: int):
        self.k = k
        super().__init__(f"NegativeCoefficient({k})")


class DuplicateIndex(SpecError):
    def __init__(self, k: int):
        self.k = k
        super().__init__(f"DuplicateIndex({k})")


class NonSummable(SpecError):
    def __init__(self, ratio: float):
        self.ratio = ratio
        super().__init__(f"NonSummable(ratio={ratio})")


class DuplicatePoint(SpecError):
    def __init__(self, i: int, j: int):
        self.pair = (i, j)
        super().__init__(f"duplicate point: rows {i} and {j} are the same point")


class CapExceeded(RuntimeError):
    pass


class DegreeCapExceeded(CapExceeded):
    pass


class TruncationError(CapExceeded):
    def __init__(self, eps: float, best_bound: float, degree: int):
        self.eps = eps
        self.best_bound = best_bound
        self.degree = degree
        super().__init__(
            f"truncation target {eps:g} unreachable below degree {degree}; best bound {best_bound:g}"
        )


class LcmOverflow(CapExceeded):
    pass
