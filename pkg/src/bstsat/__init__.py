"""Decision procedure and model builder for Boolean set theory with the
unordered Cartesian product."""
from .construct import build_model
from .formula import normalize, parse, to_dnf
from .fulfill import Certificate, Mode, ResourceLimit, Verdict, check_fulfills, decide, solve
from .hfset import EMPTY, HFSet, otimes, powast12, pow12
from .partition import evaluate

__all__ = [
    "EMPTY",
    "HFSet",
    "otimes",
    "pow12",
    "powast12",
    "parse",
    "to_dnf",
    "normalize",
    "evaluate",
    "Certificate",
    "Mode",
    "ResourceLimit",
    "Verdict",
    "check_fulfills",
    "decide",
    "solve",
    "build_model",
]
