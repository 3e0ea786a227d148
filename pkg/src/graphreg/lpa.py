"""Exact arithmetic in the Leavitt path algebra of a finite row-finite graph.

Elements are finite rational combinations of monomials ``s_mu s_nu^*`` with
``s(mu) == s(nu)``.  A monomial is keyed by ``(mu, nu, x)`` where ``mu`` and
``nu`` are edge tuples (right to left) and ``x`` is their common source, so
``p_x`` is ``((), (), x)``.

Equality is decided by a normal form: for every vertex ``v`` that receives
edges, the least-id edge into ``v`` is *special*, and a monomial whose two
paths both end (at the source side) in the same special edge ``g`` is
rewritten with the relation ``s_g s_g^* = p_v - sum_{f != g} s_f s_f^*``.
Monomials without such a pair form a basis.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .errors import CycleError, GraphFormatError, NotRowFiniteError, PreconditionError
from .graph import Graph, Path, as_plain, has_cycle, iter_simple_paths_from

Term = tuple  # (mu: tuple[str, ...], nu: tuple[str, ...], source: str)


def _range(g: Graph, path: tuple, source: str) -> str:
    return g.dst(path[0]) if path else source


class LpaElement:
    __slots__ = ("graph", "terms")

    def __init__(self, graph: Graph, terms: Mapping[Term, object] | None = None):
        self.graph = graph
        clean = {}
        for key, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[key] = clean.get(key, 0) + c
        self.terms = {k: c for k, c in clean.items() if c}

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, graph: Graph) -> LpaElement:
        return cls(graph)

    @classmethod
    def monomial(cls, graph: Graph, mu: Path, nu: Path, coeff=1) -> LpaElement:
        if mu.source != nu.source:
            raise PreconditionError("s_mu s_nu^* needs s(mu) == s(nu)")
        return cls(graph, {(mu.edges, nu.edges, mu.source): coeff})

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: LpaElement):
        if other.graph is not self.graph and other.graph != self.graph:
            raise PreconditionError("elements live over different graphs")

    def __add__(self, other):
        if not isinstance(other, LpaElement):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return LpaElement(self.graph, out)

    def __neg__(self):
        return LpaElement(self.graph, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LpaElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LpaElement):
            return lpa_mul(self, other)
        if isinstance(other, (int, Fraction)):
            return LpaElement(self.graph, {k: c * other for k, c in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def star(self) -> LpaElement:
        return lpa_star(self)

    def normal_form(self) -> LpaElement:
        return normal_form(self)

    def is_zero(self) -> bool:
        """Structural test; use ``lpa_equal`` for equality in the algebra."""
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, LpaElement):
            return NotImplemented
        return self.graph == other.graph and self.terms == other.terms

    __hash__ = None

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"LpaElement({render(self)})"


# -- generators ------------------------------------------------------------------


def p(g: Graph, v: str) -> LpaElement:
    g.check_vertex(v)
    return LpaElement(g, {((), (), v): 1})


def s(g: Graph, *edges: str) -> LpaElement:
    """``s_mu`` for the path with edges listed right to left."""
    path = g.path(edges)
    return LpaElement(g, {(path.edges, (), path.source): 1})


def s_star(g: Graph, *edges: str) -> LpaElement:
    path = g.path(edges)
    return LpaElement(g, {((), path.edges, path.source): 1})


def ss(g: Graph, mu: Path, nu: Path, coeff=1) -> LpaElement:
    return LpaElement.monomial(g, mu, nu, coeff)


def unit_sum(g: Graph, paths: Iterable[Path]) -> LpaElement:
    """``sum s_lambda s_lambda^*`` over ``paths``."""
    out = {}
    for lam in paths:
        key = (lam.edges, lam.edges, lam.source)
        out[key] = out.get(key, 0) + 1
    return LpaElement(g, out)


# -- multiplication and involution -----------------------------------------------


def _mul_terms(g: Graph, a: Term, b: Term) -> Term | None:
    mu, nu, x = a
    gamma, lam, y = b
    if _range(g, nu, x) != _range(g, gamma, y):
        return None
    n, m = len(nu), len(gamma)
    if n <= m:
        if gamma[:n] != nu:
            return None
        return (mu + gamma[n:], lam, y)
    if nu[:m] != gamma:
        return None
    return (mu, lam + nu[m:], x)


def lpa_mul(a: LpaElement, b: LpaElement) -> LpaElement:
    """Bilinear extension of ``(s_mu s_nu^*)(s_g s_l^*)``: ``s_{mu g'} s_l^*`` if
    ``g = nu g'``, ``s_mu s_{l nu'}^*`` if ``nu = g nu'``, else 0."""
    a._check(b)
    g = a.graph
    out: dict = {}
    for ta, ca in a.terms.items():
        for tb, cb in b.terms.items():
            t = _mul_terms(g, ta, tb)
            if t is not None:
                out[t] = out.get(t, 0) + ca * cb
    return LpaElement(g, out)


def lpa_star(a: LpaElement) -> LpaElement:
    return LpaElement(a.graph, {(nu, mu, x): c for (mu, nu, x), c in a.terms.items()})


# -- normal form -----------------------------------------------------------------


def special_edges(g: Graph) -> dict[str, str]:
    """Least-id edge into each vertex that receives edges."""
    return {v: g.in_edges(v)[0].id for v in g.vertices if g.in_edges(v)}


def _require_row_finite(g: Graph):
    if not g.is_row_finite:
        raise NotRowFiniteError("normal forms need a row-finite graph")


def reduce_term(g: Graph, term: Term, coeff, special: Mapping[str, str] | None = None) -> dict:
    """Normal form of one monomial as ``{term: coeff}`` (not merged with others)."""
    special = special_edges(g) if special is None else special
    out = {}
    mu, nu, x = term
    while mu and nu and mu[-1] == nu[-1] and special.get(g.dst(mu[-1])) == mu[-1]:
        v = g.dst(mu[-1])
        mu, nu = mu[:-1], nu[:-1]
        for f in g.in_edges(v):
            if f.id != special[v]:
                key = (mu + (f.id,), nu + (f.id,), f.src)
                out[key] = out.get(key, 0) - coeff
        x = v
    out[(mu, nu, x)] = out.get((mu, nu, x), 0) + coeff
    return out


def rewrite_step(a: LpaElement, term: Term) -> LpaElement:
    """Apply the special-edge rewrite once to ``term`` (which must be reducible)."""
    g = a.graph
    special = special_edges(g)
    mu, nu, x = term
    c = a.terms[term]
    if not (mu and nu and mu[-1] == nu[-1] and special.get(g.dst(mu[-1])) == mu[-1]):
        raise PreconditionError(f"{render_term(term)} is already reduced")
    v = g.dst(mu[-1])
    out = dict(a.terms)
    del out[term]
    repl = {(mu[:-1], nu[:-1], v): c}
    for f in g.in_edges(v):
        if f.id != special[v]:
            repl[(mu[:-1] + (f.id,), nu[:-1] + (f.id,), f.src)] = -c
    for k, d in repl.items():
        out[k] = out.get(k, 0) + d
    return LpaElement(g, out)


def normal_form(a: LpaElement) -> LpaElement:
    g = a.graph
    _require_row_finite(g)
    special = special_edges(g)
    out: dict = {}
    for t, c in a.terms.items():
        for k, d in reduce_term(g, t, c, special).items():
            out[k] = out.get(k, 0) + d
    return LpaElement(g, out)


def is_normal(a: LpaElement) -> bool:
    special = special_edges(a.graph)
    return not any(
        mu and nu and mu[-1] == nu[-1] and special.get(a.graph.dst(mu[-1])) == mu[-1]
        for mu, nu, _ in a.terms
    )


def lpa_equal(a: LpaElement, b: LpaElement) -> bool:
    return normal_form(a - b).is_zero()


# -- Cuntz-Krieger relations -----------------------------------------------------


def verify_ck(g: Graph) -> list[tuple[str, bool]]:
    """Check every Cuntz-Krieger identity symbolically; one entry per identity."""
    g = as_plain(g)
    report = []

    def check(name, lhs, rhs):
        report.append((name, lpa_equal(lhs, rhs)))

    zero = LpaElement.zero(g)
    for e in g.edges:
        se, se_ = s(g, e.id), s_star(g, e.id)
        check(f"s_{e.id}^* s_{e.id} = p_{e.src}", se_ * se, p(g, e.src))
        check(f"p_{e.dst} s_{e.id} = s_{e.id}", p(g, e.dst) * se, se)
        for f in g.edges:
            if f.id != e.id:
                check(f"s_{e.id}^* s_{f.id} = 0", se_ * s(g, f.id), zero)
    for v in g.vertices:
        ins = g.in_edges(v)
        if ins:
            total = zero
            for e in ins:
                total = total + s(g, e.id) * s_star(g, e.id)
            check(f"p_{v} = sum_(r(e)={v}) s_e s_e^*", p(g, v), total)
        for w in g.vertices:
            check(f"p_{v} p_{w} = {'p_' + v if v == w else '0'}", p(g, v) * p(g, w), p(g, v) if v == w else zero)
    return report


# -- matrix representation of acyclic graphs -------------------------------------


def path_basis(g: Graph) -> dict[str, list[Path]]:
    """Paths grouped by source vertex; sources only, each list sorted."""
    g = as_plain(g)
    return {w: sorted(iter_simple_paths_from(g, w)) for w in g.sources}


def represent_acyclic(g: Graph, a: LpaElement) -> dict[str, np.ndarray]:
    """Evaluate ``a`` in the path-space representation of an acyclic graph.

    Block ``w`` acts on the span of the paths with source ``w``: ``s_e`` sends
    ``mu`` to ``e mu`` when ``s(e) == r(mu)`` and ``p_v`` projects onto paths
    with range ``v``.  Monomials are evaluated as products of these generator
    matrices, independently of the symbolic multiplication rule.
    """
    g = as_plain(g)
    if has_cycle(g):
        raise CycleError("the path representation is finite only for acyclic graphs")
    if a.graph != g:
        raise PreconditionError("element lives over a different graph")
    blocks = {}
    for w, basis in path_basis(g).items():
        index = {q.edges: i for i, q in enumerate(basis)}
        n = len(basis)

        def zeros():
            return np.full((n, n), Fraction(0), dtype=object)

        gen_s = {}
        for e in g.edges:
            m = zeros()
            for q in basis:
                if q.range == e.src:
                    m[index[(e.id,) + q.edges], index[q.edges]] = Fraction(1)
            gen_s[e.id] = m
        gen_p = {}
        for v in g.vertices:
            m = zeros()
            for q in basis:
                if q.range == v:
                    m[index[q.edges], index[q.edges]] = Fraction(1)
            gen_p[v] = m
        total = zeros()
        for (mu, nu, x), c in a.terms.items():
            m = gen_p[x]
            for eid in reversed(mu):
                m = gen_s[eid].dot(m)
            for eid in reversed(nu):
                m = m.dot(gen_s[eid].T)
            total = total + m * c
        blocks[w] = total
    return blocks


def represent_equal(x: Mapping[str, np.ndarray], y: Mapping[str, np.ndarray]) -> bool:
    return x.keys() == y.keys() and all(np.array_equal(x[k], y[k]) for k in x)


# -- text form -------------------------------------------------------------------


def _render_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def render_term(term: Term) -> str:
    mu, nu, x = term
    if not mu and not nu:
        return f"p_[{x}]"
    parts = []
    if mu:
        parts.append(f"s_[{'.'.join(mu)}]")
    if nu:
        parts.append(f"s*_[{'.'.join(nu)}]")
    return "·".join(parts)


def _term_order(t: Term):
    mu, nu, x = t
    return (len(mu) + len(nu), mu, nu, x)


def render(a: LpaElement) -> str:
    if not a.terms:
        return "0"
    pieces = []
    for t in sorted(a.terms, key=_term_order):
        c = a.terms[t]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = render_term(t) if mag == 1 else f"{_render_coeff(mag)}·{render_term(t)}"
        pieces.append((sign, body))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


_TOKEN = re.compile(
    r"\s*(?:(?P<gen>p_\[[^\]]*\]|s\*_\[[^\]]*\]|s_\[[^\]]*\])|(?P<num>\d+(?:/\d+)?)|(?P<op>[-+·*()]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise GraphFormatError(f"cannot parse element near {text[pos:pos + 12]!r}", f"col {pos + 1}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


def parse_element(g: Graph, text: str) -> LpaElement:
    """Parse the rendered grammar, e.g. ``2·s_[e.f]·s*_[g] - p_[v]``.

    Products of any factors are allowed (``*`` is accepted for ``·``) and are
    evaluated with :func:`lpa_mul`; parentheses group.
    """
    g = as_plain(g)
    toks = _tokenize(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else (None, None)

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def expr():
        kind, val = peek()
        neg = False
        if kind == "op" and val in "+-":
            take()
            neg = val == "-"
        acc = term()
        if neg:
            acc = -acc
        while peek()[0] == "op" and peek()[1] in "+-":
            _, op = take()
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term():
        acc = factor()
        while peek()[0] == "op" and peek()[1] in "·*":
            take()
            acc = acc * factor()
        if isinstance(acc, Fraction):
            raise GraphFormatError("a bare number is not an element (use c·p_[v])")
        return acc

    def factor():
        kind, val = peek()
        if kind is None:
            raise GraphFormatError("unexpected end of element")
        take()
        if kind == "num":
            return Fraction(val)
        if kind == "op" and val == "(":
            inner = expr()
            if take()[1] != ")":
                raise GraphFormatError("expected ')'")
            return inner
        if kind == "gen":
            head, body = val.split("_[", 1)
            body = body[:-1]
            if head == "p":
                return p(g, body)
            edges = body.split(".") if body else []
            if not edges:
                raise GraphFormatError(f"empty path in {val!r}")
            return s(g, *edges) if head == "s" else s_star(g, *edges)
        raise GraphFormatError(f"unexpected token {val!r}")

    if toks == [("num", "0")]:
        return LpaElement.zero(g)
    result = expr()
    if i != len(toks):
        raise GraphFormatError(f"trailing input at token {toks[i][1]!r}")
    return result


__all__ = [
    "LpaElement",
    "is_normal",
    "lpa_equal",
    "lpa_mul",
    "lpa_star",
    "normal_form",
    "p",
    "parse_element",
    "reduce_term",
    "rewrite_step",
    "render",
    "represent_acyclic",
    "represent_equal",
    "s",
    "s_star",
    "special_edges",
    "ss",
    "unit_sum",
    "verify_ck",
]
