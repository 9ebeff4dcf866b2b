"""Language-side diagnostics for instruction-guided navigation datasets."""

__version__ = "0.1.0"

from .kernels import BACKEND  # noqa: E402
from .lexicon import CueSet, Lexicons, PosTag, default_lexicons  # noqa: E402
from .text import Instruction, Token, mask, mask_all_language, pos_tag, swap_left_right, tokenize  # noqa: E402

__all__ = [
    "BACKEND",
    "CueSet",
    "Instruction",
    "Lexicons",
    "PosTag",
    "Token",
    "default_lexicons",
    "mask",
    "mask_all_language",
    "pos_tag",
    "swap_left_right",
    "tokenize",
]
