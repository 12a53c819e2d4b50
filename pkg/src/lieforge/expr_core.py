"""Exact symbolic expression kernel.

Expressions are finite sums  sum_m  q_m * m  where every q_m is a nonzero
``Fraction`` and every monomial m is a product of atom powers.  Atoms are
base symbols, jet coordinates (a dependent together with a multiset of
derivative indices), unknown functions with their own derivative multisets,
the imaginary unit, and opaque transcendental factors sin/cos/tan/exp of
polynomial arguments, plus reciprocals of whole expressions.

Canonicalisation keeps the representation strong enough to decide zero for
the class of expressions the toolkit manipulates:

* i^2 -> -1, so no monomial carries the imaginary unit above power one;
* exp factors inside one monomial are merged, exp(0) disappears;
* products of sin/cos are rewritten to Fourier form (product-to-sum) until
  each monomial holds at most one sin or cos factor;
* square-root symbols r = sqrt(c) rewrite as r^2 -> c;
* trig/exp arguments are sign-normalised (sin(-a) = -sin(a), cos(-a) = cos(a)).

tan is kept opaque with derivative 1 + tan^2 and is never rewritten into
sin/cos.  Reciprocal atoms make closed-form solution candidates expressible;
expressions containing them are outside the decidable class and fall back to
randomised numeric zero testing.
"""

from __future__ import annotations

import random
import threading
from fractions import Fraction
from typing import Callable, Iterable, Mapping

__all__ = [
    "Atom", "Sym", "Root", "Jet", "Func", "IUnit", "Trig", "ExpAtom", "Recip",
    "Expr", "DomainError", "PoleError", "UnboundAtomError", "CyclicBindingError",
    "ZeroStatus", "sym", "root", "jet", "func", "I", "rational", "integer",
    "sin_e", "cos_e", "tan_e", "exp_e", "recip_e", "sqrt_e",
    "derive", "substitute", "eval_numeric", "equals_zero", "to_canonical",
    "collect_terms", "atoms_of", "random_rational",
]


class DomainError(ValueError):
    """Construction or operation outside the supported expression class."""


class PoleError(ArithmeticError):
    """Numeric evaluation hit a pole (tan at odd pi/2, vanishing reciprocal)."""


class UnboundAtomError(KeyError):
    """Numeric evaluation found an atom with no value bound."""


class CyclicBindingError(ValueError):
    """Substitution bindings contain a cycle through distinct atoms."""


# ---------------------------------------------------------------------------
# atoms
# ---------------------------------------------------------------------------

_INTERN: dict[tuple, "Atom"] = {}
_INTERN_LOCK = threading.Lock()


class Atom:
    __slots__ = ("key", "_hash")

    def __new__(cls, *args):
        raise TypeError("use the atom constructor helpers")

    @classmethod
    def _make(cls, key: tuple, init: Callable[["Atom"], None]) -> "Atom":
        # equality falls back to structural keys, so a lost interning race
        # would still be correct; the lock keeps the table single-copy
        got = _INTERN.get(key)
        if got is not None:
            return got
        with _INTERN_LOCK:
            got = _INTERN.get(key)
            if got is not None:
                return got
            self = object.__new__(cls)
            self.key = key
            self._hash = hash(key)
            init(self)
            _INTERN[key] = self
            return self

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other or (isinstance(other, Atom) and self.key == other.key)

    def __lt__(self, other):
        return self.key < other.key

    def __repr__(self):
        from .parser import atom_text
        return atom_text(self)

    def as_expr(self) -> "Expr":
        return Expr._single(self, 1, Fraction(1))


class Sym(Atom):
    __slots__ = ("name",)


class Root(Atom):
    """Square root of a base symbol; canonicalisation applies r^2 -> Sym(of)."""

    __slots__ = ("of",)


class Jet(Atom):
    """Jet coordinate: dependent `dep` differentiated by the multiset `idx`."""

    __slots__ = ("dep", "idx")

    @property
    def order(self) -> int:
        return len(self.idx)


class Func(Atom):
    """Unknown function of declared arguments, with a derivative multiset."""

    __slots__ = ("name", "args", "idx")

    @property
    def order(self) -> int:
        return len(self.idx)


class IUnit(Atom):
    __slots__ = ()


class Trig(Atom):
    __slots__ = ("fn", "arg")


class ExpAtom(Atom):
    __slots__ = ("arg",)


class Recip(Atom):
    """Reciprocal of a canonical expression with leading coefficient one."""

    __slots__ = ("arg",)


def sym(name: str) -> Sym:
    return Sym._make((0, name), lambda a: setattr(a, "name", name))


def root(of: str) -> Root:
    return Root._make((1, of), lambda a: setattr(a, "of", of))


def jet(dep: str, idx: Iterable[str] = ()) -> Jet:
    tidx = tuple(sorted(idx))

    def init(a):
        a.dep = dep
        a.idx = tidx

    return Jet._make((2, dep, tidx), init)


def func(name: str, args: Iterable[str], idx: Iterable[str] = ()) -> Func:
    targs = tuple(args)
    tidx = tuple(sorted(idx))
    bad = set(tidx) - set(targs)
    if bad:
        raise DomainError(f"derivative of {name}{targs} by non-argument {sorted(bad)}")

    def init(a):
        a.name = name
        a.args = targs
        a.idx = tidx

    return Func._make((3, name, targs, tidx), init)


I: IUnit = IUnit._make((4,), lambda a: None)


def _check_transc_arg(arg: "Expr", fn: str, allow_i: bool) -> None:
    for mono in arg._terms:
        for atom, _ in mono:
            if isinstance(atom, (Trig, ExpAtom, Recip)):
                raise DomainError(f"{fn} argument contains a transcendental factor")
            if isinstance(atom, IUnit) and not allow_i:
                raise DomainError(f"{fn} argument may not contain I")


def _trig_atom(fn: str, arg: "Expr") -> tuple[Fraction, Atom | None]:
    """Normalised trig factor: returns (coefficient multiplier, atom or None)."""
    if not arg._terms:
        return (Fraction(0), None) if fn in ("sin", "tan") else (Fraction(1), None)
    if arg._lead_coeff() < 0:
        flip = Fraction(-1) if fn in ("sin", "tan") else Fraction(1)
        arg = -arg
    else:
        flip = Fraction(1)
    atom = Trig._make((6, fn, arg._key()), lambda a: (setattr(a, "fn", fn),
                                                      setattr(a, "arg", arg)))
    return flip, atom


def _exp_atom(arg: "Expr") -> Atom | None:
    if not arg._terms:
        return None
    return ExpAtom._make((5, arg._key()), lambda a: setattr(a, "arg", arg))


def _recip_atom(arg: "Expr") -> tuple[Fraction, Atom]:
    lead = arg._lead_coeff()
    scaled = arg * Expr.rational(1 / lead)
    atom = Recip._make((7, scaled._key()), lambda a: setattr(a, "arg", scaled))
    return 1 / lead, atom


def sin_e(arg: "Expr") -> "Expr":
    _check_transc_arg(arg, "sin", allow_i=False)
    q, a = _trig_atom("sin", arg)
    return Expr._single(a, 1, q) if a is not None else Expr.rational(q)


def cos_e(arg: "Expr") -> "Expr":
    _check_transc_arg(arg, "cos", allow_i=False)
    q, a = _trig_atom("cos", arg)
    return Expr._single(a, 1, q) if a is not None else Expr.rational(q)


def tan_e(arg: "Expr") -> "Expr":
    _check_transc_arg(arg, "tan", allow_i=False)
    q, a = _trig_atom("tan", arg)
    return Expr._single(a, 1, q) if a is not None else Expr.rational(q)


def exp_e(arg: "Expr") -> "Expr":
    _check_transc_arg(arg, "exp", allow_i=True)
    a = _exp_atom(arg)
    return a.as_expr() if a is not None else Expr.one()


def recip_e(arg: "Expr") -> "Expr":
    if not arg._terms:
        raise ZeroDivisionError("reciprocal of zero expression")
    inv = _invert_single(arg)
    if inv is not None:
        return inv
    q, a = _recip_atom(arg)
    return Expr._single(a, 1, q)


def sqrt_e(arg: "Expr") -> "Expr":
    """Exact square root of a rational perfect square, single symbol (fresh
    root atom with r^2 -> symbol rewrite), or monomial of even powers."""
    terms = arg._terms
    if not terms:
        return Expr.zero()
    if len(terms) != 1:
        raise DomainError("sqrt of a sum is outside the expression class")
    mono, q = next(iter(terms.items()))
    if q < 0:
        raise DomainError("sqrt of a negative coefficient")
    num, den = q.numerator, q.denominator
    rn, rd = _isqrt_exact(num), _isqrt_exact(den)
    out_atoms: list[tuple[Atom, int]] = []
    for atom, k in mono:
        if k % 2 == 0:
            out_atoms.append((atom, k // 2))
        elif k == 1 and isinstance(atom, Sym):
            out_atoms.append((root(atom.name), 1))
        else:
            raise DomainError("sqrt of an odd atom power")
    if rn is None or rd is None:
        raise DomainError("sqrt of a non-square rational")
    out = Expr.rational(Fraction(rn, rd))
    for atom, k in out_atoms:
        out = out * Expr._single(atom, k, Fraction(1))
    return out


def _isqrt_exact(n: int) -> int | None:
    r = int(n ** 0.5)
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand * cand == n:
            return cand
    return None


# ---------------------------------------------------------------------------
# expression
# ---------------------------------------------------------------------------

Monomial = tuple  # tuple[tuple[Atom, int], ...] sorted by atom key

_ONE_M: Monomial = ()


def _mono_key(m: Monomial):
    return tuple((a.key, k) for a, k in m)


class Expr:
    __slots__ = ("_terms", "_cached_key", "_cached_hash")

    def __init__(self, terms: dict | None = None):
        self._terms: dict[Monomial, Fraction] = terms if terms is not None else {}
        self._cached_key = None
        self._cached_hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Expr":
        return Expr({})

    @staticmethod
    def one() -> "Expr":
        return Expr({_ONE_M: Fraction(1)})

    @staticmethod
    def rational(q) -> "Expr":
        q = Fraction(q)
        return Expr({_ONE_M: q}) if q else Expr({})

    @staticmethod
    def integer(n: int) -> "Expr":
        return Expr.rational(Fraction(n))

    @staticmethod
    def _single(atom: Atom, k: int, q: Fraction) -> "Expr":
        out: dict[Monomial, Fraction] = {}
        _accumulate(out, [(atom, k)], q)
        return Expr(out)

    @staticmethod
    def from_terms(pairs: Iterable[tuple[Monomial, Fraction]]) -> "Expr":
        out: dict[Monomial, Fraction] = {}
        for m, q in pairs:
            _accumulate(out, list(m), q)
        return Expr(out)

    # -- identity ----------------------------------------------------------

    def _key(self):
        if self._cached_key is None:
            self._cached_key = tuple(sorted(
                (_mono_key(m), (q.numerator, q.denominator))
                for m, q in self._terms.items()))
        return self._cached_key

    def __hash__(self):
        if self._cached_hash is None:
            self._cached_hash = hash(self._key())
        return self._cached_hash

    def __eq__(self, other):
        if not isinstance(other, Expr):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __repr__(self):
        from .parser import expr_text
        return expr_text(self)

    def _lead_mono(self) -> Monomial:
        return min(self._terms, key=_mono_key)

    def _lead_coeff(self) -> Fraction:
        return self._terms[self._lead_mono()]

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "Expr":
        other = _coerce(other)
        if not self._terms:
            return other
        if not other._terms:
            return self
        out = dict(self._terms)
        for m, q in other._terms.items():
            s = out.get(m, Fraction(0)) + q
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Expr(out)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr({m: -q for m, q in self._terms.items()})

    def __sub__(self, other) -> "Expr":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Expr":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Expr":
        other = _coerce(other)
        if not self._terms or not other._terms:
            return Expr.zero()
        out: dict[Monomial, Fraction] = {}
        for m1, q1 in self._terms.items():
            for m2, q2 in other._terms.items():
                _accumulate(out, list(m1) + list(m2), q1 * q2)
        return Expr(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Expr":
        if not isinstance(n, int):
            raise DomainError("exponent must be an integer")
        if n < 0:
            inv = _invert_single(self) if len(self._terms) == 1 else None
            if inv is None:
                inv = recip_e(self)
            return inv ** (-n)
        out = Expr.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __truediv__(self, other) -> "Expr":
        other = _coerce(other)
        if not other._terms:
            raise ZeroDivisionError("division by zero expression")
        inv = _invert_single(other)
        if inv is None:
            inv = recip_e(other)
        return self * inv

    def __rtruediv__(self, other) -> "Expr":
        return _coerce(other) / self

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and _ONE_M in self._terms)

    def as_rational(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and _ONE_M in self._terms:
            return self._terms[_ONE_M]
        raise DomainError("expression is not a rational constant")

    def terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self._terms.items(), key=lambda t: _mono_key(t[0]))


def _coerce(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Expr.rational(Fraction(x))
    raise TypeError(f"cannot coerce {type(x)!r} to Expr")


def rational(q) -> Expr:
    return Expr.rational(q)


def integer(n: int) -> Expr:
    return Expr.integer(n)


def _invert_single(e: Expr) -> Expr | None:
    """Exact reciprocal of a single-term expression, or None."""
    if len(e._terms) != 1:
        return None
    mono, q = next(iter(e._terms.items()))
    factors: list[tuple[Atom, int]] = []
    coeff = 1 / q
    for atom, k in mono:
        if isinstance(atom, (Sym, Root, Jet, Func)):
            factors.append((atom, -k))
        elif isinstance(atom, IUnit):
            # i^-1 = -i
            coeff *= Fraction(-1) ** k
            factors.append((atom, k))
        elif isinstance(atom, ExpAtom):
            factors.append((atom, -k))
        else:
            return None
    out: dict[Monomial, Fraction] = {}
    _accumulate(out, factors, coeff)
    return Expr(out)


# ---------------------------------------------------------------------------
# monomial canonicalisation
# ---------------------------------------------------------------------------

def _accumulate(out: dict[Monomial, Fraction], factors: list[tuple[Atom, int]],
                coeff: Fraction) -> None:
    """Normalise a factor list and add the resulting terms into `out`."""
    stack = [(factors, coeff)]
    while stack:
        fl, q = stack.pop()
        if not q:
            continue
        powers: dict[Atom, int] = {}
        for atom, k in fl:
            powers[atom] = powers.get(atom, 0) + k

        # imaginary unit: reduce exponent mod 4
        ik = powers.pop(I, 0)
        if ik:
            ik %= 4
            if ik >= 2:
                q = -q
                ik -= 2
            if ik:
                powers[I] = 1

        # root symbols: r^k -> Sym(of)^((k - k%2)/2) * r^(k%2)
        for atom in [a for a in powers if isinstance(a, Root)]:
            k = powers.pop(atom)
            rem = k & 1
            shift = (k - rem) // 2
            if shift:
                base = sym(atom.of)
                powers[base] = powers.get(base, 0) + shift
                if powers[base] == 0:
                    del powers[base]
            if rem:
                powers[atom] = rem

        # merge exponentials
        exps = [(a, k) for a, k in powers.items() if isinstance(a, ExpAtom)]
        if exps:
            total = Expr.zero()
            for a, k in exps:
                del powers[a]
                total = total + a.arg * Expr.integer(k)
            na = _exp_atom(total)
            if na is not None:
                powers[na] = powers.get(na, 0) + 1

        # reciprocals that became invertible (e.g. after substitution)
        for atom in [a for a in powers if isinstance(a, Recip)]:
            k = powers[atom]
            if k < 0:
                raise DomainError("negative reciprocal power")
            inv = _invert_single(atom.arg)
            if inv is not None:
                del powers[atom]
                mono, iq = next(iter(inv._terms.items()))
                q *= iq ** k
                for a2, k2 in mono:
                    powers[a2] = powers.get(a2, 0) + k2 * k
            elif not atom.arg._terms:
                raise ZeroDivisionError("reciprocal of zero expression")

        # trig bookkeeping
        trig_sc: list[Trig] = []
        bad = False
        for atom in [a for a in powers if isinstance(a, Trig)]:
            k = powers[atom]
            if k < 0:
                raise DomainError("negative power of a trig factor")
            if not atom.arg._terms:
                # stale atom (argument collapsed to zero after substitution)
                del powers[atom]
                if atom.fn in ("sin", "tan"):
                    bad = True
                continue
            if atom.fn in ("sin", "cos"):
                trig_sc.extend([atom] * k)
                del powers[atom]
        if bad:
            continue

        if len(trig_sc) >= 2:
            a1, a2 = trig_sc[0], trig_sc[1]
            rest = [(a, 1) for a in trig_sc[2:]]
            others = [(a, k) for a, k in powers.items()]
            for fn, arg, w in _product_to_sum(a1, a2):
                wq = q * w
                flip, atom = _trig_atom(fn, arg)
                wq *= flip
                nl = others + rest + ([(atom, 1)] if atom is not None else [])
                stack.append((nl, wq))
            continue

        # single leftover sin/cos
        for atom in trig_sc:
            powers[atom] = powers.get(atom, 0) + 1

        mono = tuple(sorted(((a, k) for a, k in powers.items() if k != 0),
                            key=lambda t: t[0].key))
        s = out.get(mono, Fraction(0)) + q
        if s:
            out[mono] = s
        else:
            out.pop(mono, None)


def _product_to_sum(a1: Trig, a2: Trig):
    """sin/cos product rewriting; yields (fn, arg, weight)."""
    A, B = a1.arg, a2.arg
    half = Fraction(1, 2)
    if a1.fn == "sin" and a2.fn == "sin":
        yield ("cos", A - B, half)
        yield ("cos", A + B, -half)
    elif a1.fn == "cos" and a2.fn == "cos":
        yield ("cos", A - B, half)
        yield ("cos", A + B, half)
    elif a1.fn == "sin" and a2.fn == "cos":
        yield ("sin", A + B, half)
        yield ("sin", A - B, half)
    else:  # cos * sin
        yield ("sin", A + B, half)
        yield ("sin", B - A, half)


def to_canonical(e: Expr) -> Expr:
    """Re-normalise an expression (idempotent on canonical input)."""
    out: dict[Monomial, Fraction] = {}
    for m, q in e._terms.items():
        _accumulate(out, list(m), q)
    return Expr(out)


# ---------------------------------------------------------------------------
# structural queries
# ---------------------------------------------------------------------------

def atoms_of(e: Expr, recurse: bool = True) -> set[Atom]:
    """All atoms of an expression, by default descending into trig/exp/recip
    arguments."""
    seen: set[Atom] = set()
    stack = [e]
    while stack:
        cur = stack.pop()
        for m in cur._terms:
            for atom, _ in m:
                if atom in seen:
                    continue
                seen.add(atom)
                if recurse and isinstance(atom, (Trig, ExpAtom, Recip)):
                    stack.append(atom.arg)
    return seen


# ---------------------------------------------------------------------------
# calculus
# ---------------------------------------------------------------------------

def derive(e: Expr, a: Atom) -> Expr:
    """Partial derivative treating all other atoms as independent; chain rule
    through transcendental factors."""
    if not isinstance(a, (Sym, Jet, Func, Root)):
        raise DomainError("derivative only with respect to symbols, jets, or functions")
    out: dict[Monomial, Fraction] = {}
    for m, q in e._terms.items():
        for i, (atom, k) in enumerate(m):
            d = _datom(atom, a)
            if d is None:
                continue
            rest = list(m[:i]) + list(m[i + 1:])
            if k != 1:
                rest.append((atom, k - 1))
            for dm, dq in d._terms.items():
                _accumulate(out, rest + list(dm), q * k * dq)
    return Expr(out)


def _datom(atom: Atom, a: Atom) -> Expr | None:
    if atom is a:
        return Expr.one()
    if isinstance(atom, Trig):
        darg = derive(atom.arg, a)
        if not darg._terms:
            return None
        if atom.fn == "sin":
            return cos_e(atom.arg) * darg
        if atom.fn == "cos":
            return -sin_e(atom.arg) * darg
        t = tan_e(atom.arg)
        return (Expr.one() + t * t) * darg
    if isinstance(atom, ExpAtom):
        darg = derive(atom.arg, a)
        if not darg._terms:
            return None
        return atom.as_expr() * darg
    if isinstance(atom, Recip):
        darg = derive(atom.arg, a)
        if not darg._terms:
            return None
        r = atom.as_expr()
        return -darg * r * r
    return None


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------

def substitute(e: Expr, bindings: Mapping[Atom, Expr]) -> Expr:
    """Simultaneous substitution of atoms by expressions, then renormalise."""
    _check_acyclic(bindings)
    cache: dict[Atom, Expr] = {}

    def atom_value(atom: Atom) -> Expr:
        got = bindings.get(atom)
        if got is not None:
            return got
        got = cache.get(atom)
        if got is not None:
            return got
        if isinstance(atom, Trig):
            narg = substitute(atom.arg, bindings)
            val = atom.as_expr() if narg == atom.arg else \
                {"sin": sin_e, "cos": cos_e, "tan": tan_e}[atom.fn](narg)
        elif isinstance(atom, ExpAtom):
            narg = substitute(atom.arg, bindings)
            val = atom.as_expr() if narg == atom.arg else exp_e(narg)
        elif isinstance(atom, Recip):
            narg = substitute(atom.arg, bindings)
            val = atom.as_expr() if narg == atom.arg else recip_e(narg)
        else:
            val = atom.as_expr()
        cache[atom] = val
        return val

    out = Expr.zero()
    for m, q in e._terms.items():
        term = Expr.rational(q)
        for atom, k in m:
            term = term * atom_value(atom) ** k
        out = out + term
    return out


def _check_acyclic(bindings: Mapping[Atom, Expr]) -> None:
    keys = set(bindings)
    if len(keys) < 2:
        return
    graph = {}
    for k, v in bindings.items():
        graph[k] = (atoms_of(v) & keys) - {k}
    seen: dict[Atom, int] = {}

    def visit(n):
        state = seen.get(n, 0)
        if state == 1:
            raise CyclicBindingError("cyclic binding set")
        if state == 2:
            return
        seen[n] = 1
        for m in graph.get(n, ()):
            visit(m)
        seen[n] = 2

    for k in keys:
        visit(k)


# ---------------------------------------------------------------------------
# numeric evaluation and randomised zero testing
# ---------------------------------------------------------------------------

_POLE_TOL = 1e-13


def eval_numeric(e: Expr, point: Mapping[Atom, complex]) -> complex:
    """Floating evaluation; raises UnboundAtomError / PoleError."""
    import cmath

    def atom_val(atom: Atom) -> complex:
        if atom in point:
            return complex(point[atom])
        if isinstance(atom, IUnit):
            return 1j
        if isinstance(atom, Trig):
            z = eval_numeric(atom.arg, point)
            if atom.fn == "sin":
                return cmath.sin(z)
            if atom.fn == "cos":
                return cmath.cos(z)
            c = cmath.cos(z)
            if abs(c) < _POLE_TOL:
                raise PoleError(f"tan pole at argument {z}")
            return cmath.sin(z) / c
        if isinstance(atom, ExpAtom):
            return cmath.exp(eval_numeric(atom.arg, point))
        if isinstance(atom, Recip):
            d = eval_numeric(atom.arg, point)
            if abs(d) < _POLE_TOL:
                raise PoleError("reciprocal pole")
            return 1.0 / d
        raise UnboundAtomError(f"unbound atom {atom!r}")

    total = 0j
    for m, q in e._terms.items():
        val = complex(q)
        for atom, k in m:
            val *= atom_val(atom) ** k
        total += val
    return total


class ZeroStatus:
    ZERO = "Zero"
    NONZERO = "Nonzero"
    PROBABLY_ZERO = "ProbablyZero"


def random_rational(rng: random.Random, lo=-2, hi=2, den_max=7) -> Fraction:
    den = rng.randint(1, den_max)
    num = rng.randint(lo * den, hi * den)
    return Fraction(num, den)


def _sample_point(e: Expr, rng: random.Random) -> dict[Atom, complex]:
    point: dict[Atom, complex] = {}
    roots = [a for a in atoms_of(e) if isinstance(a, Root)]
    for r in roots:
        q = random_rational(rng, 0, 2)
        if q == 0:
            q = Fraction(1, 2)
        point[r] = complex(q)
        point[sym(r.of)] = complex(q * q)
    for a in atoms_of(e):
        if isinstance(a, (Sym, Jet, Func)) and a not in point:
            q = random_rational(rng)
            if q == 0:
                q = Fraction(1, 3)
            point[a] = complex(q)
    return point


def _is_decidable(e: Expr) -> bool:
    return not any(isinstance(a, Recip) for a in atoms_of(e, recurse=False))


def equals_zero(e: Expr, samples: int = 200, tol: float = 1e-10,
                seed: int = 42) -> str:
    """Decide zero: canonical-empty -> Zero; decidable class -> Nonzero;
    otherwise randomised evaluation at rational points -> ProbablyZero/Nonzero."""
    if not e._terms:
        return ZeroStatus.ZERO
    if _is_decidable(e):
        return ZeroStatus.NONZERO
    rng = random.Random(seed)
    done = 0
    attempts = 0
    while done < samples:
        attempts += 1
        if attempts > samples * 5:
            raise PoleError("all sampled points hit poles")
        point = _sample_point(e, rng)
        try:
            scale = 0.0
            total = 0j
            for m, q in e._terms.items():
                val = eval_numeric(Expr({m: q}), point)
                total += val
                scale += abs(val)
            if abs(total) > tol * max(1.0, scale):
                return ZeroStatus.NONZERO
            done += 1
        except PoleError:
            continue
    return ZeroStatus.PROBABLY_ZERO


# ---------------------------------------------------------------------------
# term collection
# ---------------------------------------------------------------------------

def collect_terms(e: Expr, family: Iterable[Expr]) -> dict[Expr, Expr]:
    """Split e = sum over classes class * cofactor.

    Each family member must be a single-monomial expression; the classifying
    atoms are the atoms appearing in any class.  Raises DomainError when the
    family does not partition the terms of e.
    """
    classes: dict[Monomial, Expr] = {}
    class_atoms: set[Atom] = set()
    for cl in family:
        if len(cl._terms) != 1:
            raise DomainError("collection classes must be single monomials")
        mono, q = next(iter(cl._terms.items()))
        if q != 1:
            raise DomainError("collection classes must have coefficient 1")
        if mono in classes:
            raise DomainError("duplicate collection class")
        classes[mono] = cl
        for atom, _ in mono:
            class_atoms.add(atom)
    out: dict[Expr, Expr] = {cl: Expr.zero() for cl in classes.values()}
    for m, q in e._terms.items():
        proj = tuple((a, k) for a, k in m if a in class_atoms)
        rest = tuple((a, k) for a, k in m if a not in class_atoms)
        cl = classes.get(proj)
        if cl is None:
            raise DomainError(f"term {Expr({m: q})!r} not covered by the class family")
        out[cl] = out[cl] + Expr({rest: q})
    return out


def split_by_content(e: Expr, classify) -> dict[Monomial, Expr]:
    """Group terms by the sub-monomial of atoms selected by `classify`;
    returns {class monomial: cofactor expression}."""
    out: dict[Monomial, dict[Monomial, Fraction]] = {}
    for m, q in e._terms.items():
        proj = tuple((a, k) for a, k in m if classify(a))
        rest = tuple((a, k) for a, k in m if not classify(a))
        out.setdefault(proj, {})[rest] = out.get(proj, {}).get(rest, Fraction(0)) + q
    return {proj: Expr({m: q for m, q in terms.items() if q})
            for proj, terms in out.items()}
