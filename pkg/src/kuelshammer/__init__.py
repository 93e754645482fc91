"""Kuelshammer ideals of finite dimensional algebras over finite fields."""

from __future__ import annotations

from .algebra import Algebra
from .families import Instance, instantiate, list_families
from .field import Field
from .form import BilinearForm, find_symmetric_form, socle_form
from .linalg import Subspace
from .presentation import Quiver, Relation, group_algebra, quotient_algebra, trivial_extension
from .report import compare, compute, report, to_json
from .tower import kuelshammer_ideals, t_spaces

__all__ = [
    "Algebra", "BilinearForm", "Field", "Instance", "Quiver", "Relation", "Subspace",
    "compare", "compute", "find_symmetric_form", "group_algebra", "instantiate", "kuelshammer_ideals",
    "list_families", "quotient_algebra", "report", "socle_form", "t_spaces", "to_json", "trivial_extension",
]

__version__ = "0.1.0"
