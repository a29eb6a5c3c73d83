"""Online distances of text prefixes to palindromes and squares."""

from .core import EXCEEDS, EditScript, PeriodCertificate, apply_script, as_symbols
from .roled import DelayedErrorMatcher, RoLedPal, RoLedSq
from .rohd import RoPal, RoSq
from .streamhd import PalStream, SqStream

__all__ = [
    "EXCEEDS",
    "EditScript",
    "PeriodCertificate",
    "apply_script",
    "as_symbols",
    "DelayedErrorMatcher",
    "RoLedPal",
    "RoLedSq",
    "RoPal",
    "RoSq",
    "PalStream",
    "SqStream",
]
