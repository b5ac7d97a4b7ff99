"""Exact q-expansions of Eisenstein series and eta products, with identity verification."""

from .coeffring import RingElem, symbol_constant
from .exprlang import eval_exact, eval_numeric, parse, parse_expr
from .generators import GeneratorId, generate, parse_id
from .qseries import QSeries
from .verifier import Config, run_catalog, sturm_depth, verify_exact, verify_multimodular

__all__ = [
    "Config",
    "GeneratorId",
    "QSeries",
    "RingElem",
    "eval_exact",
    "eval_numeric",
    "generate",
    "parse",
    "parse_expr",
    "parse_id",
    "run_catalog",
    "sturm_depth",
    "symbol_constant",
    "verify_exact",
    "verify_multimodular",
]
