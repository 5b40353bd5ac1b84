"""Multivariate polynomials and the monicization change of variables.

Variables are X1..Xd.  A polynomial is a sorted tuple of (exponent
vector, coefficient) pairs over any ring handle; the string grammar
matches the univariate one ("X1^2*X2-3" style, non-integer coefficients
parenthesised).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .errors import (
    MalformedSpec,
    NotAUnit,
    RingMismatch,
    SizeMismatch,
    ZeroPolynomial,
)
from .rings import Ideal, Ring, _fmt_coeff, _split_top, _unwrap

_VAR_RE = re.compile(r"X([0-9]+)(?:\^([0-9]+))?\Z")


@dataclass(frozen=True)
class MultiPoly:
    ring: Ring
    nvars: int
    terms: tuple  # ((exps, coeff), ...) with nonzero coeffs, sorted descending

    # -- construction ------------------------------------------------------
    @classmethod
    def make(cls, ring: Ring, nvars: int, mapping: dict) -> "MultiPoly":
        if nvars < 1:
            raise SizeMismatch(f"need at least one variable, got {nvars}")
        clean = {}
        for exps, c in mapping.items():
            exps = tuple(exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise MalformedSpec(f"bad exponent vector {exps!r}")
            c = ring.check(c)
            if c != ring.zero:
                clean[exps] = c
        return cls(ring, nvars, tuple(sorted(clean.items(), reverse=True)))

    @classmethod
    def const(cls, ring: Ring, nvars: int, c) -> "MultiPoly":
        return cls.make(ring, nvars, {(0,) * nvars: c})

    @classmethod
    def zero(cls, ring: Ring, nvars: int) -> "MultiPoly":
        return cls.make(ring, nvars, {})

    @classmethod
    def one(cls, ring: Ring, nvars: int) -> "MultiPoly":
        return cls.const(ring, nvars, ring.one)

    @classmethod
    def gen(cls, ring: Ring, nvars: int, j: int) -> "MultiPoly":
        if not (1 <= j <= nvars):
            raise SizeMismatch(f"variable X{j} out of range for {nvars} variables")
        exps = tuple(1 if k == j - 1 else 0 for k in range(nvars))
        return cls.make(ring, nvars, {exps: ring.one})

    # -- arithmetic ----------------------------------------------------------
    def _peer(self, other: "MultiPoly"):
        if self.ring != other.ring:
            raise RingMismatch("polynomials over different rings")
        if self.nvars != other.nvars:
            raise SizeMismatch("polynomials in different variable counts")

    def is_zero(self) -> bool:
        return not self.terms

    def add(self, other: "MultiPoly") -> "MultiPoly":
        self._peer(other)
        acc = dict(self.terms)
        r = self.ring
        for exps, c in other.terms:
            acc[exps] = r.add(acc.get(exps, r.zero), c)
        return MultiPoly.make(r, self.nvars, acc)

    def neg(self) -> "MultiPoly":
        r = self.ring
        return MultiPoly(r, self.nvars,
                         tuple((e, r.neg(c)) for e, c in self.terms))

    def sub(self, other: "MultiPoly") -> "MultiPoly":
        return self.add(other.neg())

    def mul(self, other: "MultiPoly") -> "MultiPoly":
        self._peer(other)
        r = self.ring
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = r.add(acc.get(e, r.zero), r.mul(c1, c2))
        return MultiPoly.make(r, self.nvars, acc)

    def pow(self, k: int) -> "MultiPoly":
        if k < 0:
            raise MalformedSpec("negative power of a polynomial")
        out = MultiPoly.one(self.ring, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out.mul(base)
            base = base.mul(base)
            k >>= 1
        return out

    def scale(self, c) -> "MultiPoly":
        r = self.ring
        c = r.check(c)
        return MultiPoly.make(r, self.nvars,
                              {e: r.mul(c, x) for e, x in self.terms})

    # -- degrees and coefficients ---------------------------------------------
    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e, _ in self.terms)

    def degree_in(self, j: int) -> int:
        if not self.terms:
            return -1
        return max(e[j - 1] for e, _ in self.terms)

    def coeff_in(self, j: int, k: int) -> "MultiPoly":
        """Coefficient of Xj^k, as a polynomial with the Xj exponent removed."""
        acc = {}
        for exps, c in self.terms:
            if exps[j - 1] == k:
                acc[exps[:j - 1] + (0,) + exps[j:]] = c
        return MultiPoly.make(self.ring, self.nvars, acc)

    def constant(self):
        for exps, c in self.terms:
            if not any(exps):
                return c
        return self.ring.zero

    # -- substitution ----------------------------------------------------------
    def substitute(self, mapping: dict) -> "MultiPoly":
        """Replace Xj by mapping[j] (1-based); unmapped variables stay fixed."""
        for p in mapping.values():
            self._peer(p)
        caches = {j: [MultiPoly.one(self.ring, self.nvars)] for j in mapping}

        def power(j: int, e: int) -> "MultiPoly":
            c = caches[j]
            while len(c) <= e:
                c.append(c[-1].mul(mapping[j]))
            return c[e]

        out = MultiPoly.zero(self.ring, self.nvars)
        for exps, coeff in self.terms:
            kept = tuple(0 if (k + 1) in mapping else e for k, e in enumerate(exps))
            term = MultiPoly(self.ring, self.nvars, ((kept, coeff),))
            for k, e in enumerate(exps):
                if e and (k + 1) in mapping:
                    term = term.mul(power(k + 1, e))
            out = out.add(term)
        return out

    def evaluate(self, point: Sequence):
        r = self.ring
        point = [r.check(x) for x in point]
        if len(point) != self.nvars:
            raise SizeMismatch(f"expected {self.nvars} coordinates")
        out = r.zero
        for exps, c in self.terms:
            v = c
            for x, e in zip(point, exps):
                if e:
                    v = r.mul(v, r.pow(x, e))
            out = r.add(out, v)
        return out

    # -- strings -------------------------------------------------------------
    def fmt(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.terms:
            vp = "*".join(f"X{k + 1}" if e == 1 else f"X{k + 1}^{e}"
                          for k, e in enumerate(exps) if e)
            cs = _fmt_coeff(self.ring, c)
            if not vp:
                parts.append(cs)
            elif cs == "1":
                parts.append(vp)
            elif cs == "-1":
                parts.append("-" + vp)
            else:
                parts.append(cs + "*" + vp)
        out = parts[0]
        for p in parts[1:]:
            out += p if p.startswith("-") else "+" + p
        return out

    @classmethod
    def parse(cls, ring: Ring, nvars: int, s: str) -> "MultiPoly":
        s = s.replace(" ", "")
        if not s:
            raise MalformedSpec("empty polynomial string")
        toks = _split_top(s, "+-")
        signed: list[tuple[int, str]] = []
        next_sign = 1
        for tok in toks:
            if tok == "+":
                continue
            if tok == "-":
                next_sign = -next_sign
                continue
            if tok == "":
                continue
            signed.append((next_sign, tok))
            next_sign = 1
        if not signed:
            raise MalformedSpec(f"no terms in {s!r}")
        acc: dict = {}
        for sg, term in signed:
            coeff = ring.one
            exps = [0] * nvars
            for factor in _split_top(term, "*"):
                if factor == "*":
                    continue
                m = _VAR_RE.match(factor)
                if m and not factor.startswith("("):
                    j = int(m.group(1))
                    if not (1 <= j <= nvars):
                        raise MalformedSpec(f"variable X{j} out of range in {s!r}")
                    exps[j - 1] += int(m.group(2)) if m.group(2) else 1
                else:
                    coeff = ring.mul(coeff, ring.parse(_unwrap(factor)))
            if sg < 0:
                coeff = ring.neg(coeff)
            e = tuple(exps)
            acc[e] = ring.add(acc.get(e, ring.zero), coeff)
        return cls.make(ring, nvars, acc)


# ---------------------------------------------------------------------------
# the monicization substitution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Substitution:
    """X1 fixed; Xj moves by +- phi(X1)^{r_j} for j = 2..d."""

    phi: MultiPoly
    exponents: tuple  # (r_2, ..., r_d)
    negate: bool = False

    def mapping(self) -> dict:
        ring, d = self.phi.ring, self.phi.nvars
        out = {}
        for j, r in enumerate(self.exponents, start=2):
            shift = self.phi.pow(r)
            if self.negate:
                shift = shift.neg()
            out[j] = MultiPoly.gen(ring, d, j).add(shift)
        return out

    def apply(self, f: MultiPoly) -> MultiPoly:
        self.phi._peer(f)
        return f.substitute(self.mapping())

    def inverse(self) -> "Substitution":
        return replace(self, negate=not self.negate)


def _check_phi(phi: MultiPoly) -> int:
    """phi must be univariate in X1, monic, of positive degree; returns it."""
    if any(any(e[1:]) for e, _ in phi.terms):
        raise MalformedSpec("phi must only involve X1")
    n = phi.degree_in(1)
    if n < 1:
        raise MalformedSpec("phi must have positive degree")
    if phi.coeff_in(1, n).constant() != phi.ring.one:
        raise MalformedSpec("phi must be monic")
    return n


def nagata_transform(f: MultiPoly, phi: Optional[MultiPoly] = None):
    """Change of variables making f a unit multiple of an X1-monic polynomial.

    Returns (substitution, c, h) with substitution(f) = c * h and h monic
    in X1.  Exponents are r_j = m^{j-1} where m = 1 + n * (largest
    exponent in f) separates the monomials of f by X1-degree.
    """
    if f.is_zero():
        raise ZeroPolynomial("cannot monicize the zero polynomial")
    ring, d = f.ring, f.nvars
    if phi is None:
        phi = MultiPoly.gen(ring, d, 1)
    f._peer(phi)
    n = _check_phi(phi)
    maxexp = max((e for exps, _ in f.terms for e in exps), default=0)
    m = 1 + n * maxexp
    exponents = tuple(m ** (j - 1) for j in range(2, d + 1))
    weights = [exps[0] + n * sum(r * e for r, e in zip(exponents, exps[1:]))
               for exps, _ in f.terms]
    assert len(set(weights)) == len(weights), "monomial weights collided"
    sub = Substitution(phi, exponents)
    g = sub.apply(f)
    w = g.degree_in(1)
    assert w == max(weights), "top weight does not match the substituted degree"
    lead = g.coeff_in(1, w)
    assert lead.total_degree() <= 0, "leading X1-coefficient is not constant"
    c = lead.constant()
    if not ring.is_unit(c):
        raise NotAUnit(f"leading coefficient {ring.fmt(c)} is not a unit")
    h = g.scale(ring.inv(c))
    return sub, c, h


# ---------------------------------------------------------------------------
# Weierstrass predicate for univariate polynomials over a ring
# ---------------------------------------------------------------------------

def is_weierstrass(ring, f, ideal: Ideal) -> bool:
    """Monic with every non-leading coefficient in the ideal.

    f is a payload of a univariate polynomial ring over the ideal's ring.
    """
    if ring.kind != "polynomial":
        raise RingMismatch("is_weierstrass needs a univariate polynomial ring")
    if ideal.ring != ring.base:
        raise RingMismatch("ideal must live over the coefficient ring")
    f = ring.check(f)
    if not f:
        return False
    if f[-1] != ring.base.one:
        return False
    return all(ideal.contains(c) for c in f[:-1])
