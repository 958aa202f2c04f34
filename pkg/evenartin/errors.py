from __future__ import annotations

from typing import Any


class ArtinError(ValueError):
    """Base class for every domain error raised by evenartin."""

    code = "artin_error"

    def as_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": str(self)}


class ParseError(ArtinError):
    code = "parse_error"

    def __init__(self, message: str, *, line: int = 0) -> None:
        self.line = int(line)
        super().__init__(f"line {self.line}: {message}" if self.line else message)


class OddLabel(ArtinError):
    code = "odd_label"

    def __init__(self, u: str, v: str, label: int) -> None:
        self.edge = (u, v)
        self.label = int(label)
        super().__init__(f"edge {u}-{v} has label {label}; labels must be even and >= 2")


class FcViolation(ArtinError):
    code = "fc_violation"

    def __init__(self, triangle: tuple[str, str, str], labels: tuple[int, int, int]) -> None:
        self.triangle = triangle
        self.labels = labels
        super().__init__(
            f"triangle {'-'.join(triangle)} has labels {labels}; at least two must equal 2"
        )


class DuplicateEdge(ArtinError):
    code = "duplicate_edge"

    def __init__(self, u: str, v: str) -> None:
        self.edge = (u, v)
        super().__init__(f"edge {u}-{v} declared more than once")


class SelfLoop(ArtinError):
    code = "self_loop"

    def __init__(self, v: str) -> None:
        self.vertex = v
        super().__init__(f"self-loop at {v}")


class UnknownVertex(ArtinError):
    code = "unknown_vertex"

    def __init__(self, v: str) -> None:
        self.vertex = v
        super().__init__(f"unknown vertex: {v}")


class GraphMismatch(ArtinError):
    code = "graph_mismatch"


class UnmappedGenerator(ArtinError):
    code = "unmapped_generator"

    def __init__(self, gen: str) -> None:
        self.generator = gen
        super().__init__(f"generator {gen} has no image")


class StarIsFull(ArtinError):
    code = "star_is_full"

    def __init__(self, v: str) -> None:
        self.vertex = v
        super().__init__(f"star({v}) is the whole vertex set; no amalgam splitting at {v}")


class HypothesisViolated(ArtinError):
    code = "hypothesis_violated"


class NotInKernel(ArtinError):
    code = "not_in_kernel"


class NotAnAutomorphism(ArtinError):
    code = "not_an_automorphism"


class PreconditionFailed(ArtinError):
    code = "precondition_failed"


class LengthCapExceeded(ArtinError):
    code = "length_cap_exceeded"

    def __init__(self, length: int, cap: int) -> None:
        self.length = int(length)
        self.cap = int(cap)
        super().__init__(f"word length {self.length} exceeds the cap of {self.cap} syllables")


class BudgetExceeded(ArtinError):
    code = "budget_exceeded"

    def __init__(self, states: int, budget: int) -> None:
        self.states = int(states)
        self.budget = int(budget)
        super().__init__(f"oracle explored {self.states} words; budget is {self.budget}")
