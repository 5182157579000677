"""MSO formulas: syntax, parser, brute-force model checking, fixture corpus."""

from .check import (
    DEFAULT_GUARD, RELAXED_GUARD, OpenFormulaError, PairReport, SizeGuard,
    SizeGuardError, classify_pair, models, spectrum_sample,
)
from .corpus import CorpusEntry, formula, load_corpus, load_formula_path
from .parse import FormulaSyntaxError, UnboundVariableError, UnknownSymbolError, parse
from .syntax import (
    And, Arc, Bottom, ColorIs, Eq, ExistsS, ExistsV, ForallS, ForallV, Formula,
    Iff, Implies, InSet, Not, Or, Top, Unary, free_variables, rank, to_text,
)
