from fractions import Fraction

import pytest

from minikind.errors import NonlinearError, SortError
from minikind.term import (
    FALSE,
    TRUE,
    App,
    Op,
    Sort,
    free_vars,
    instantiate,
    mk_add,
    mk_and,
    mk_bool,
    mk_div,
    mk_eq,
    mk_int,
    mk_ite,
    mk_le,
    mk_mod,
    mk_mul,
    mk_not,
    mk_or,
    mk_prev,
    mk_rdiv,
    mk_real,
    mk_var,
    step_name,
)

x = mk_var("x", Sort.INT)
y = mk_var("y", Sort.INT)
b = mk_var("b", Sort.BOOL)
c = mk_var("c", Sort.BOOL)


def test_and_flattens_and_drops_units():
    nested = mk_and(b, mk_and(c, TRUE))
    assert nested == App(Op.AND, (b, c), Sort.BOOL)
    assert mk_and() == TRUE
    assert mk_and(b) == b


def test_absorbing_constants():
    assert mk_and(b, FALSE) == FALSE
    assert mk_or(b, TRUE) == TRUE


def test_double_negation_cancels():
    assert mk_not(mk_not(b)) == b
    assert mk_not(TRUE) == FALSE


def test_constant_folding():
    assert mk_add(mk_int(2), mk_int(3)) == mk_int(5)
    assert mk_le(mk_int(1), mk_int(0)) == FALSE
    assert mk_ite(TRUE, mk_int(1), mk_int(2)) == mk_int(1)
    assert mk_rdiv(mk_real(1), mk_real(4)).value == Fraction(1, 4)


def test_euclidean_division_of_negative_numbers():
    assert mk_div(mk_int(-7), mk_int(2)) == mk_int(-4)
    assert mk_mod(mk_int(-7), mk_int(2)) == mk_int(1)
    assert mk_div(mk_int(7), mk_int(-2)) == mk_int(-3)
    assert mk_mod(mk_int(7), mk_int(-2)) == mk_int(1)


def test_sort_mismatch_is_rejected():
    with pytest.raises(SortError):
        mk_eq(x, b)
    with pytest.raises(SortError):
        mk_and(b, x)
    with pytest.raises(SortError):
        mk_add(x, mk_real(1))


def test_nonlinear_terms_are_rejected():
    with pytest.raises(NonlinearError):
        mk_mul(x, y)
    with pytest.raises(NonlinearError):
        mk_div(x, y)
    with pytest.raises(NonlinearError):
        mk_mod(x, mk_int(0))
    assert mk_mul(mk_int(2), x).op is Op.MUL


def test_terms_are_hash_consed_by_value():
    assert mk_le(x, mk_int(3)) == mk_le(mk_var("x", Sort.INT), mk_int(3))
    assert len({mk_le(x, mk_int(3)), mk_le(x, mk_int(3))}) == 1


def test_instantiate_indexes_current_and_previous_step():
    term = mk_eq(x, mk_add(mk_prev(x), mk_int(1)))
    stepped = instantiate(term, 3)
    assert {v.name for v in free_vars(stepped)} == {step_name("x", 3), step_name("x", 2)}
    assert not any(v.prev for v in free_vars(stepped))


def test_bool_constants():
    assert mk_bool(True) == TRUE
    assert str(FALSE) == "false"
