"""Python access to the novikit reports. Functions return decoded JSON."""

import json

from . import _core
from ._core import NovikitError, collect, fingerprint, mapping_torus

__all__ = [
    "NovikitError",
    "advise",
    "collect",
    "duality",
    "fingerprint",
    "hirsch",
    "homology",
    "mapping_torus",
    "obstruction",
]


def hirsch(pres):
    return json.loads(_core.hirsch(pres))


def homology(path, char="", prec=_core.DEFAULT_PRECISION, strategy="lowest"):
    return json.loads(_core.homology(str(path), char, prec, strategy))


def duality(path, char="", prec=_core.DEFAULT_PRECISION):
    return json.loads(_core.duality(str(path), char, prec))


def advise(kind, dim, pres, torsion=False, euler=None, kernel_finite=False):
    return json.loads(_core.advise(kind, dim, pres, torsion, euler, kernel_finite))


def obstruction(path, char="", prec=_core.DEFAULT_PRECISION, whitehead_trivial=False, kernel_fp=False):
    return json.loads(_core.obstruction(str(path), char, prec, whitehead_trivial, kernel_fp))
