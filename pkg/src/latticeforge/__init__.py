"""Certified combinatorics of nonpositively curved triangle complexes.

Core layers:

* :mod:`latticeforge.complexes` — finite 2-complexes with exact angles.
* :mod:`latticeforge.builtins` — the reference complexes S, T0, T.
* :mod:`latticeforge.datum` — square-complex gluing data with D4 symmetry.
* :mod:`latticeforge.links` — metric links and building-type certification.
* :mod:`latticeforge.presentations` — fundamental groups and Tietze moves.
* :mod:`latticeforge.coset` — Todd-Coxeter enumeration, low-index subgroups.
* :mod:`latticeforge.permgroups` — small permutation groups, PSL(2,q),
  epimorphism counting.
* :mod:`latticeforge.cover` — universal-cover balls, automorphisms, rigidity.
* :mod:`latticeforge.search` — datum enumeration and prescribed-link
  completion search.
* :mod:`latticeforge.cli` — the ``latticeforge`` command.
"""

from .builtins import builtin, example_datum
from .complexes import (
    CellMap,
    Complex2D,
    read_complex,
    subdivide_squares,
    validate,
    validate_cell_map,
    write_complex,
)
from .cover import automorphisms, develop_ball, rigidity_check
from .datum import Datum, datum_to_complex, extension_presentation, validate_datum
from .links import certify_building_links, link, local_isometry_check
from .morphisms import find_isomorphism, isomorphisms
from .presentations import (
    Presentation,
    abelianization,
    pi1_presentation,
    tietze_simplify,
)
from .report import Report, verify_paper
from .search import SearchSpec, complete, enumerate_data, verify_completion

__all__ = [
    "CellMap",
    "Complex2D",
    "Datum",
    "Presentation",
    "Report",
    "SearchSpec",
    "abelianization",
    "automorphisms",
    "builtin",
    "certify_building_links",
    "complete",
    "datum_to_complex",
    "develop_ball",
    "enumerate_data",
    "example_datum",
    "extension_presentation",
    "find_isomorphism",
    "isomorphisms",
    "link",
    "local_isometry_check",
    "pi1_presentation",
    "read_complex",
    "rigidity_check",
    "subdivide_squares",
    "tietze_simplify",
    "validate",
    "validate_cell_map",
    "validate_datum",
    "verify_completion",
    "verify_paper",
    "write_complex",
]

__version__ = "0.1.0"
