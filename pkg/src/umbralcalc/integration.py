"""Right inverses of the lowering operators, exact per monomial.

Each integral kind pairs with one difference operator; the pairing is part
of the contract and verified, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    BadParameterError,
    DegenerateFamilyError,
    DegreeOverflowError,
    MismatchedPairError,
)
from .operators import OperatorMatrix, jackson_operator, psi_derivative
from .poly import Polynomial, fr
from .psi import AdmissibleSequence

PSI_INTEGRAL = "psi_integral"
Q_INTEGRAL = "q_integral"
R_INTEGRAL = "r_integral"


@dataclass(frozen=True)
class IntegralOperator:
    """Monomial-diagonal right inverse: x^n -> x^{n+1} / w(n+1)."""

    kind: str
    bound: int
    weights: tuple  # w(n) for n = 1..bound, the divisor attached to x^n
    partner: OperatorMatrix  # the difference operator it inverts
    label: str

    @staticmethod
    def psi_integral(seq: AdmissibleSequence, bound: int) -> "IntegralOperator":
        weights = tuple(seq.n_psi(n) for n in range(1, bound + 1))
        return IntegralOperator(
            PSI_INTEGRAL, bound, weights, psi_derivative(seq, bound), seq.label
        )

    @staticmethod
    def q_integral(q, bound: int) -> "IntegralOperator":
        q = fr(q)
        if q == 1:
            raise BadParameterError("q integral undefined at q = 1")
        weights = []
        for n in range(1, bound + 1):
            denom = 1 - q**n
            if denom == 0:
                raise DegenerateFamilyError(f"q^{n} = 1 degenerates the q integral")
            weights.append(denom / (1 - q))
        return IntegralOperator(
            Q_INTEGRAL, bound, tuple(weights), jackson_operator(q, bound), f"q={q}"
        )

    @staticmethod
    def r_integral(coefficients, q, bound: int) -> "IntegralOperator":
        coeffs = [fr(c) for c in coefficients]
        q = fr(q)
        shape = Polynomial(coeffs)
        weights = []
        for n in range(1, bound + 1):
            w = shape(q**n)
            if w == 0:
                raise DegenerateFamilyError(
                    f"series weight vanishes at index {n}"
                )
            weights.append(w)
        # the matching difference operator scales x^n -> w(n) x^{n-1}
        cols = [Polynomial()]
        for n in range(1, bound + 1):
            cols.append(Polynomial.monomial(n - 1, weights[n - 1]))
        partner = OperatorMatrix(tuple(cols))
        return IntegralOperator(
            R_INTEGRAL, bound, tuple(weights), partner, f"r_series(q={q})"
        )

    def integrate(self, p: Polynomial) -> Polynomial:
        if p.degree > self.bound - 1:
            raise DegreeOverflowError(
                f"input degree {p.degree} leaves no room below bound {self.bound}"
            )
        coeffs = [Fraction(0)]
        for j, c in enumerate(p.coeffs):
            coeffs.append(c / self.weights[j])
        return Polynomial(coeffs)

    def as_matrix(self) -> OperatorMatrix:
        cols = []
        for j in range(self.bound):
            cols.append(Polynomial.monomial(j + 1, 1 / self.weights[j]))
        cols.append(Polynomial())  # top column lost to truncation
        return OperatorMatrix(tuple(cols))


def verify_right_inverse(
    op: IntegralOperator, differencer: OperatorMatrix
) -> dict:
    """Check differencer o integral = id below the bound and
    integral o differencer = id - evaluation at 0; guards the pairing."""
    if differencer.bound != op.bound:
        raise MismatchedPairError("bounds differ")
    if differencer.columns != op.partner.columns:
        raise MismatchedPairError(
            f"difference operator is not the partner of the {op.kind}"
        )
    bound = op.bound
    right_window = bound - 1
    for j in range(right_window + 1):
        xj = Polynomial.monomial(j)
        if differencer.apply(op.integrate(xj)) != xj:
            return {"passed": False, "witness": {"side": "right", "degree": j}}
    for j in range(bound + 1):
        xj = Polynomial.monomial(j)
        image = differencer.apply(xj)
        if image.degree > bound - 1:
            continue
        back = op.integrate(image)
        expected = xj if j >= 1 else Polynomial()
        if back != expected:
            return {"passed": False, "witness": {"side": "left", "degree": j}}
    return {"passed": True, "window": right_window}
