"""Exact and asymptotic evaluation of SU(2) spin networks."""

import json
from fractions import Fraction

from . import _spinnet
from ._spinnet import (
    AdmissibilityError,
    DomainError,
    Graph,
    HypothesisError,
    InputError,
    NumericalError,
    PreconditionError,
    RegimeError,
    bundled_graph_names,
    theta_value as _theta_value,
)

__all__ = [
    "AdmissibilityError", "DomainError", "Graph", "HypothesisError", "InputError", "NumericalError", "PreconditionError",
    "RegimeError",
    "bundled_graph_names", "graph", "is_admissible", "internal_coloring", "evaluate", "theta_value",
    "bracket_square", "series_Z", "westbury_polynomial", "pfaffian_dimer_sum", "mc_bracket", "mc_W_point",
    "mc_orthogonality", "asymptotics",
]


def graph(name_or_path):
    """A bundled graph by name, or a graph loaded from a JSON file."""
    if name_or_path in bundled_graph_names():
        return Graph.bundled(name_or_path)
    return Graph.load(name_or_path)


def _coloring(g, c):
    if isinstance(c, dict):
        missing = [e for e in g.edge_ids if e not in c]
        if missing:
            raise InputError("coloring misses edges: " + ", ".join(missing))
        return [int(c[e]) for e in g.edge_ids]
    return [int(x) for x in c]


def _holonomy(h):
    if h is None:
        return ""
    return h if isinstance(h, str) else json.dumps(h)


def is_admissible(g, c):
    return _spinnet.is_admissible(g, _coloring(g, c))


def internal_coloring(g, c):
    return _spinnet.internal_coloring(g, _coloring(g, c))


def evaluate(g, c, holonomy=None):
    """<Gamma, c, psi> as (real, imaginary) Fractions."""
    re, im = _spinnet.evaluate(g, _coloring(g, c), _holonomy(holonomy))
    return Fraction(re), Fraction(im)


def theta_value(a, b, c):
    return Fraction(_theta_value(a, b, c))


def bracket_square(g, c, holonomy=None):
    return Fraction(_spinnet.bracket_square(g, _coloring(g, c), _holonomy(holonomy)))


def _poly(terms):
    return {tuple(sorted(ex.items())): (Fraction(re), Fraction(im)) for ex, re, im in terms}


def series_Z(g, degree, holonomy=None):
    """Truncated generating series as {((variable, exponent), ...): (re, im)}."""
    return _poly(_spinnet.series_Z(g, degree, _holonomy(holonomy)))


def westbury_polynomial(g):
    return _poly(_spinnet.westbury_polynomial(g))


def pfaffian_dimer_sum(g):
    return _poly(_spinnet.pfaffian_dimer_sum(g))


def mc_bracket(g, c, samples=100000, seed=20231101, workers=1, holonomy=None):
    return _spinnet.mc_bracket(g, _coloring(g, c), samples, seed, workers, _holonomy(holonomy))


def mc_W_point(g, y, samples=100000, seed=20231101, workers=1):
    if isinstance(y, dict):
        y = [float(y.get(e, 0.0)) for e in g.edge_ids]
    return _spinnet.mc_W_point(g, list(y), samples, seed, workers)


def mc_orthogonality(g, c, samples=100000, seed=20231101, workers=1):
    return _spinnet.mc_orthogonality(g, _coloring(g, c), samples, seed, workers)


def asymptotics(g, c, k_list=(10, 20, 40), restarts=200, tol=1e-10, seed=1):
    return _spinnet.asymptotics(g, _coloring(g, c), list(k_list), restarts, tol, seed)
