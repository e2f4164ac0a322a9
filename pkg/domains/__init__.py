"""
domains
=======

Basic refinement type lattices. Every instance speaks linear constraints over
the scope's numeric variables and the value symbol ν.

Public API (stable re-exports):
- Scope, BaseDomain, ScopeError (from base)
- LinCons, NU (from linear)
- PolyhedraDomain, OctagonDomain, PredicateDomain, Atom, STAR
- parse_qualifiers, parse_thresholds, load_qualifiers, load_thresholds,
  default_qualifiers, QualifierError (from qualifiers)
- make_domain, DOMAIN_NAMES
"""
from __future__ import annotations

from typing import Optional, Sequence

from .base import BaseDomain, Scope, ScopeError
from .linear import NU, LinCons
from .octagon import OctagonDomain
from .polyhedra import PolyhedraDomain
from .predicates import STAR, Atom, PredicateDomain
from .qualifiers import (
    QualifierError, default_qualifiers, load_qualifiers, load_thresholds, parse_qualifiers, parse_thresholds,
)

DOMAIN_NAMES = ("pred", "oct", "poly")


def make_domain(name: str, qualifiers: Optional[Sequence[Atom]] = None) -> BaseDomain:
    if name == "poly":
        return PolyhedraDomain()
    if name == "oct":
        return OctagonDomain()
    if name == "pred":
        if qualifiers is None:
            raise QualifierError("the predicate domain needs a qualifier set")
        return PredicateDomain(qualifiers)
    raise ValueError(f"unknown domain {name!r}; expected one of {', '.join(DOMAIN_NAMES)}")


__all__ = [
    "BaseDomain", "Scope", "ScopeError",
    "NU", "LinCons",
    "OctagonDomain", "PolyhedraDomain", "PredicateDomain", "Atom", "STAR",
    "QualifierError", "default_qualifiers", "load_qualifiers", "load_thresholds",
    "parse_qualifiers", "parse_thresholds",
    "make_domain", "DOMAIN_NAMES",
]
