"""Built-in example monads.

The ``paper-g2r2`` fixture is a transcription of a published worked example
for gamma = 2 at rank multiplier 2: an explicit f together with a point of
the solution space L of g o f = 0.  Printed matrices of this size are easy
to mangle, so nothing here asserts that the fixture passes certification;
the CLI runs the checks and reports what it finds, check by check.
"""

from __future__ import annotations

from fractions import Fraction

from .monads import HilbertParams, Monad
from .search import monad_terms
from .serialize import document_to_monad

_F_COLUMNS = (
    (
        "z0",
        "2*z0 + 3*z1",
        "5*z0 + 7*z1",
        "8*z0 + 9*z1",
        "9*w0 + w1",
        "3*w0 + 8*w1",
        "2*w0 + 5*w1",
        "7*w0 + 6*w1",
    ),
    (
        "z0 + 7*z1",
        "2*z0 + 9*z1",
        "8*z0 + 5*z1",
        "6*z0 + z1",
        "3*w0 + 5*w1",
        "7*w0 + 2*w1",
        "w0 + 11*w1",
        "w0",
    ),
)

_G_ROWS = (
    (
        "-18860*w0 + -19145*w1",
        "26215/2*w0 + 34705/2*w1",
        "3120*w0 + -4385*w1",
        "-16725/2*w0 + -8455/2*w1",
        "1880*z0",
        "940*z0 + 705*z1",
        "3055*z0 + 235*z1",
        "2585*z0 + 1645*z1",
    ),
    (
        "-4110*w0 + 10690*w1",
        "-1258*w0 + -12466*w1",
        "4758*w0 + 1916*w1",
        "-7433*w0 + -2296*w1",
        "2350*z0 + 940*z1",
        "470*z0 + 2350*z1",
        "1880*z1",
        "2820*z0 + 2585*z1",
    ),
    (
        "-13845*w0 + -4450*w1",
        "8830*w0 + 1476*w1",
        "2015*w0 + -3506*w1",
        "-6025*w0 + -1029*w1",
        "2115*z0",
        "940*z0 + 1410*z1",
        "2115*z0 + 3055*z1",
        "1175*z0 + 470*z1",
    ),
    (
        "-3035*w0 + 850*w1",
        "-711*w0 + -2793*w1",
        "1921*w0 + -302*w1",
        "-4756*w0 + -2803*w1",
        "1645*z0 + 1175*z1",
        "1410*z0 + 2350*z1",
        "1175*z0 + 1175*z1",
        "1645*z0 + 1645*z1",
    ),
)


def g2r2_params() -> HilbertParams:
    return HilbertParams(2, Fraction(2))


def g2r2_document() -> dict:
    params = g2r2_params()
    a_term, b_term, c_term = monad_terms(params)
    f_texts = [_F_COLUMNS[j][i] for i in range(8) for j in range(2)]
    g_texts = [entry for row in _G_ROWS for entry in row]
    doc = {
        "A": [[s.a, s.b] for s in a_term.summands],
        "B": [[s.a, s.b] for s in b_term.summands],
        "C": [[s.a, s.b] for s in c_term.summands],
        "f": f_texts,
        "g": g_texts,
        "params": {"r": 2, "gamma": "2", "seed": 0},
    }
    return doc


def g2r2_monad() -> Monad:
    return document_to_monad(g2r2_document()).monad


EXAMPLES = {"paper-g2r2": g2r2_document}


def example_document(name: str) -> dict:
    try:
        return EXAMPLES[name]()
    except KeyError:
        raise KeyError(
            f"unknown example {name!r}; available: {sorted(EXAMPLES)}"
        ) from None
