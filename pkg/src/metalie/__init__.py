"""Exact computations in metabelian Lie algebras built from polynomial matrices."""
from .errors import MetalieError, ParseError, VerificationFailure
from .ring import GF, QQ, Field, LocalFrac, Poly, PolyRing
from .fmodule import FreeModElem, LocalModElem, Submodule
from .matlie import LocalMatElem, MatContext, MatElem, bracket, left_normed
from .freelie import NormalForm, gamma, normalize
from .parsing import parse_lie, parse_mat, parse_module, parse_poly
from .ualg import ConcreteAlgebra, presentation, phi_one_plus_f, embed_abstract
from .ext import clear_denominators, check_cdelta, discriminate, extend, localize

__version__ = "0.1.0"

__all__ = [
    "MetalieError", "ParseError", "VerificationFailure",
    "GF", "QQ", "Field", "LocalFrac", "Poly", "PolyRing",
    "FreeModElem", "LocalModElem", "Submodule",
    "LocalMatElem", "MatContext", "MatElem", "bracket", "left_normed",
    "NormalForm", "gamma", "normalize",
    "parse_lie", "parse_mat", "parse_module", "parse_poly",
    "ConcreteAlgebra", "presentation", "phi_one_plus_f", "embed_abstract",
    "clear_denominators", "check_cdelta", "discriminate", "extend", "localize",
]
