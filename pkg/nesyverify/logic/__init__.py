"""Propositional logic front end: formulas, parsers and brute-force oracles."""
from nesyverify.logic.dimacs import looks_like_dimacs, parse_any, parse_dimacs, write_dimacs
from nesyverify.logic.formula import (
    FALSE,
    TRUE,
    And,
    ConstFalse,
    ConstTrue,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Var,
    VarId,
    VariablePool,
    evaluate,
    format_formula,
    variables,
)
from nesyverify.logic.oracles import (
    IntervalWeightMap,
    WeightMap,
    count_models,
    emajsat_brute,
    random_formula,
    restricted_counts,
    wmc_brute,
    wmc_partial,
)
from nesyverify.logic.parser import parse_formula
