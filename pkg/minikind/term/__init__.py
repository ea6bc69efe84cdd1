from minikind.term.evaluate import Valuation, evaluate
from minikind.term.smtlib import declare_fun, quote_symbol, to_smtlib, value_to_smtlib
from minikind.term.term import (
    FALSE,
    TRUE,
    App,
    Const,
    Op,
    Sort,
    Term,
    Value,
    Var,
    free_vars,
    instantiate,
    iter_subterms,
    mk_add,
    mk_and,
    mk_app,
    mk_bool,
    mk_const,
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
    mk_neq,
    mk_not,
    mk_or,
    mk_prev,
    mk_rdiv,
    mk_real,
    mk_sub,
    mk_var,
    mk_xor,
    step_name,
    substitute_vars,
)
