"""Seeded generator of well-sorted linear terms and matching valuations."""

import random
from fractions import Fraction
from typing import Dict, List

from minikind.term import (
    Sort,
    Term,
    Value,
    mk_add,
    mk_and,
    mk_bool,
    mk_div,
    mk_eq,
    mk_ge,
    mk_gt,
    mk_implies,
    mk_int,
    mk_ite,
    mk_le,
    mk_lt,
    mk_mod,
    mk_mul,
    mk_neg,
    mk_not,
    mk_or,
    mk_rdiv,
    mk_real,
    mk_sub,
    mk_var,
    mk_xor,
)

VARIABLES: Dict[Sort, List[str]] = {
    Sort.BOOL: ["p$0", "q$0"],
    Sort.INT: ["a$0", "b$0"],
    Sort.REAL: ["r$0", "s$0"],
}

COMPARISONS = [mk_lt, mk_le, mk_gt, mk_ge]


class TermGenerator:
    def __init__(self, seed: int, max_depth: int = 4):
        self.rng = random.Random(seed)
        self.max_depth = max_depth

    def constant(self, sort: Sort) -> Term:
        if sort is Sort.BOOL:
            return mk_bool(self.rng.random() < 0.5)
        if sort is Sort.INT:
            return mk_int(self.rng.randint(-20, 20))
        return mk_real(Fraction(self.rng.randint(-20, 20), self.rng.randint(1, 4)))

    def divisor(self, sort: Sort) -> Term:
        value = self.rng.choice([-5, -3, -2, -1, 1, 2, 3, 7])
        if sort is Sort.INT:
            return mk_int(value)
        return mk_real(Fraction(value, self.rng.randint(1, 3)))

    def leaf(self, sort: Sort) -> Term:
        if self.rng.random() < 0.3:
            return self.constant(sort)
        return mk_var(self.rng.choice(VARIABLES[sort]), sort)

    def term(self, sort: Sort, depth: int = 0) -> Term:
        if depth >= self.max_depth or self.rng.random() < 0.2:
            return self.leaf(sort)
        if sort is Sort.BOOL:
            return self.boolean(depth + 1)
        return self.numeric(sort, depth + 1)

    def boolean(self, depth: int) -> Term:
        def sub() -> Term:
            return self.term(Sort.BOOL, depth)

        numeric = self.rng.choice([Sort.INT, Sort.REAL])
        choice = self.rng.randrange(8)
        if choice == 0:
            return mk_not(sub())
        if choice == 1:
            return mk_and(sub(), sub())
        if choice == 2:
            return mk_or(sub(), sub())
        if choice == 3:
            return mk_xor(sub(), sub())
        if choice == 4:
            return mk_implies(sub(), sub())
        if choice == 5:
            return mk_ite(sub(), sub(), sub())
        if choice == 6:
            sort = self.rng.choice([Sort.BOOL, numeric])
            return mk_eq(self.term(sort, depth), self.term(sort, depth))
        compare = self.rng.choice(COMPARISONS)
        return compare(self.term(numeric, depth), self.term(numeric, depth))

    def numeric(self, sort: Sort, depth: int) -> Term:
        def sub() -> Term:
            return self.term(sort, depth)

        choice = self.rng.randrange(7)
        if choice == 0:
            return mk_add(sub(), sub())
        if choice == 1:
            return mk_sub(sub(), sub())
        if choice == 2:
            return mk_neg(sub())
        if choice == 3:
            return mk_mul(self.constant(sort), sub())
        if choice == 4:
            return mk_ite(self.term(Sort.BOOL, depth), sub(), sub())
        if sort is Sort.REAL:
            return mk_rdiv(sub(), self.divisor(sort))
        if choice == 5:
            return mk_div(sub(), self.divisor(sort))
        return mk_mod(sub(), self.divisor(sort))

    def valuation(self) -> Dict[str, Value]:
        values: Dict[str, Value] = {}
        for sort, names in VARIABLES.items():
            for name in names:
                if sort is Sort.BOOL:
                    values[name] = self.rng.random() < 0.5
                elif sort is Sort.INT:
                    values[name] = self.rng.randint(-10, 10)
                else:
                    values[name] = Fraction(self.rng.randint(-30, 30), self.rng.randint(1, 5))
        return values
