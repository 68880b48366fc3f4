"""Per-iteration operation-count predictors and the unit-gate cost model.

Counts follow the usual DSP costing convention: comparisons, sign tests
and bit-shifts are tallied in the addition column, and scaling by a
forgetting factor of the form 1 - 2^-P counts as an addition (subtract
and shift), not a multiplication. Fractional coefficients in the
non-shift rows are evaluated in exact integer arithmetic.

kRTLS, xRTLS and AIP exist here only as closed-form predictor rows; only
the DCD-RTLS filter is instrumented at runtime.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError, InvalidInputError

ALGOS = ("dcd_rtls", "aip", "xrtls", "krtls")


@dataclass
class OpCounts:
    mul: int = 0
    add: int = 0
    div: int = 0
    sqrt: int = 0

    def __post_init__(self):
        if min(self.mul, self.add, self.div, self.sqrt) < 0:
            raise InvalidInputError("operation counts must be nonnegative")

    def __add__(self, other: "OpCounts") -> "OpCounts":
        return OpCounts(
            self.mul + other.mul,
            self.add + other.add,
            self.div + other.div,
            self.sqrt + other.sqrt,
        )


@dataclass(frozen=True)
class GateModel:
    """Unit-gate area model: 16-bit carry-lookahead adder = 204 gates,
    16-bit array multiplier = 2336 gates; division and square root are
    costed as multiplications."""

    adder_gates: int = 204
    multiplier_gates: int = 2336
    word_bits: int = 16

    def __post_init__(self):
        if min(self.adder_gates, self.multiplier_gates, self.word_bits) < 1:
            raise ConfigError("gate model fields must be positive")


def _exact_half(numerator: int) -> int:
    if numerator % 2:
        raise ArithmeticError("half-integer operation count; broken predictor")
    return numerator // 2


def step_cost_breakdown(L: int, N: int, M: int, structured: bool) -> dict[str, OpCounts]:
    """Per-step cost of each stage of the DCD-RTLS update.

    The two linear-system solves are listed at their worst-case addition
    budget (2NL + N + M each); at runtime the solver may consume less.
    """
    phi = OpCounts(mul=L, add=2 * L) if structured else OpCounts(
        mul=_exact_half(L * L + L), add=L * L + L
    )
    return {
        "phi_update": phi,
        "z_update": OpCounts(mul=L, add=2 * L),
        "tau_update": OpCounts(mul=1, add=2),
        "p1": OpCounts(mul=2 * L, add=3 * L),
        "p2": OpCounts(mul=2 * L, add=5 * L - 1),
        "solve_1": OpCounts(add=2 * N * L + N + M),
        "solve_2": OpCounts(add=2 * N * L + N + M),
        "m1_update": OpCounts(add=L),
        "m2_update": OpCounts(add=L),
        "k": OpCounts(mul=L + 1, add=L),
        "w": OpCounts(mul=3 * L, add=2 * L - 1, div=1),
    }


def predicted_ops(algo: str, L: int, N: int = 1, M: int = 16, structured: bool = True) -> OpCounts:
    """Closed-form per-iteration operation counts for each algorithm.

    N and M only matter for dcd_rtls; they are ignored for the others.
    """
    key = algo.lower().replace("-", "_")
    if key not in ALGOS:
        raise InvalidInputError(f"unknown algorithm {algo!r}; expected one of {ALGOS}")
    if min(L, N, M) < 1:
        raise InvalidInputError("L, N, M must be positive")
    if structured:
        table = {
            "dcd_rtls": OpCounts(10 * L + 2, (4 * N + 17) * L + 2 * N + 2 * M, 1, 0),
            "aip": OpCounts(15 * L + 11, 12 * L + 5, 1, 0),
            "xrtls": OpCounts(16 * L + 19, 13 * L + 5, 2, 1),
            "krtls": OpCounts(22 * L + 93, 19 * L + 47, 8, 2),
        }
    else:
        table = {
            "dcd_rtls": OpCounts(
                _exact_half(L * L + 19 * L + 4),
                L * L + (4 * N + 16) * L + 2 * N + 2 * M,
                1,
                0,
            ),
            "aip": OpCounts(2 * L * L + 9 * L + 9, _exact_half(3 * L * L + 13 * L + 10), 1, 0),
            "xrtls": OpCounts(2 * L * L + 10 * L + 17, _exact_half(3 * L * L + 15 * L + 10), 2, 1),
            "krtls": OpCounts(3 * L * L + 10 * L + 31, 2 * L * L + 6 * L + 13, 6, 2),
        }
    return table[key]


def gate_cost(c: OpCounts, g: GateModel = GateModel()) -> int:
    """Total gates for a fixed-point implementation of one iteration."""
    return c.add * g.adder_gates + (c.mul + c.div + c.sqrt) * g.multiplier_gates


@dataclass(frozen=True)
class CounterReport:
    measured: OpCounts
    predicted: OpCounts
    mul_ok: bool
    div_ok: bool
    sqrt_ok: bool
    add_within_budget: bool

    @property
    def ok(self) -> bool:
        return self.mul_ok and self.div_ok and self.sqrt_ok and self.add_within_budget

    def lines(self) -> list[str]:
        out = [
            f"mul: measured={self.measured.mul} predicted={self.predicted.mul} "
            f"{'match' if self.mul_ok else 'MISMATCH'}",
            f"add: measured={self.measured.add} budget={self.predicted.add} "
            f"{'within budget' if self.add_within_budget else 'OVER BUDGET'}",
            f"div: measured={self.measured.div} predicted={self.predicted.div} "
            f"{'match' if self.div_ok else 'MISMATCH'}",
            f"sqrt: measured={self.measured.sqrt} predicted={self.predicted.sqrt} "
            f"{'match' if self.sqrt_ok else 'MISMATCH'}",
        ]
        return out


def verify_counters(measured: OpCounts, predicted: OpCounts) -> CounterReport:
    """Compare instrumented per-step counts against the predictor.

    Multiplications, divisions and square roots are data-independent and
    must match exactly; additions are compared against the worst-case
    budget because the solver's consumption is data-dependent.
    """
    return CounterReport(
        measured=measured,
        predicted=predicted,
        mul_ok=measured.mul == predicted.mul,
        div_ok=measured.div == predicted.div,
        sqrt_ok=measured.sqrt == predicted.sqrt,
        add_within_budget=measured.add <= predicted.add,
    )
