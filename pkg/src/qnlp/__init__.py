"""Sentences to quantum circuits via pregroup grammar, with trainable classifiers."""

__version__ = "0.1.0"

from .pregroup import (  # noqa: F401
    Atom,
    Lexicon,
    ReductionWitness,
    SimpleType,
    assign_types,
    load_lexicon,
    parse_type,
    reduce,
)
