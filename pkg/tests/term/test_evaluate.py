from fractions import Fraction

import pytest

from minikind.errors import MissingVar
from minikind.term import (
    Sort,
    evaluate,
    mk_add,
    mk_and,
    mk_div,
    mk_eq,
    mk_int,
    mk_ite,
    mk_le,
    mk_mod,
    mk_prev,
    mk_rdiv,
    mk_real,
    mk_var,
)

x = mk_var("x", Sort.INT)
r = mk_var("r", Sort.REAL)
init = mk_var("%init", Sort.BOOL)


def test_arithmetic_is_exact():
    assert evaluate(mk_rdiv(r, mk_real(3)), {"r": Fraction(1)}) == Fraction(1, 3)
    assert evaluate(mk_div(x, mk_int(2)), {"x": -3}) == -2
    assert evaluate(mk_mod(x, mk_int(2)), {"x": -3}) == 1


def test_prev_reads_previous_valuation():
    term = mk_add(mk_prev(x), mk_int(1))
    assert evaluate(term, {"x": 0}, {"x": 4}) == 5


def test_guarded_prev_is_not_read_at_the_first_step():
    term = mk_ite(init, mk_int(0), mk_add(mk_prev(x), mk_int(1)))
    assert evaluate(term, {"%init": True}) == 0


def test_missing_variables_raise():
    with pytest.raises(MissingVar) as error:
        evaluate(mk_le(x, mk_int(0)), {})
    assert error.value.name == "x"
    with pytest.raises(MissingVar) as error:
        evaluate(mk_prev(x), {"x": 1})
    assert error.value.name == "prev(x)"


def test_conjunction_is_lazy():
    term = mk_and(mk_eq(x, mk_int(1)), mk_le(mk_prev(x), mk_int(0)))
    assert evaluate(term, {"x": 2}) is False
