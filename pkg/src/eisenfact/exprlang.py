"""A small expression language for identities among q-series.

Grammar (whitespace insignificant)::

    expr      := term (('+' | '-') term)*
    term      := factor (('*' | '/') factor)*
    factor    := '-' factor | power
    power     := atom ('^' exponent)?
    exponent  := INT | '-' INT | '(' ['-'] INT ['/' INT] ')'
    atom      := INT | CONST | 't' | GEN ('[' transform ']')? | '(' expr ')'
    CONST     := 'i' | 'rho' | 'sqrt(' INT ')' | 'cbrt(4)' | 'zeta(' INT ')'
    GEN       := E2 | E4 | ... | 'F(' INT ',' INT ')' | 'Fp3(' INT ')' | ...
    transform := affine expression in t, e.g. 't/2', '(t+1)/2', '2*t',
                 '1/2*t-1/4', or a Fricke map '-1/(N*t)'

Rational constant subexpressions are folded while parsing, so ``1+2*3^2``
becomes the constant 19.  ``t`` (the variable tau) and fractional exponents
are only meaningful in numeric evaluation, where they express multipliers
such as ``(t/i)^(1/2)``.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from .coeffring import RingElem, UnknownConstant, complex_embed, symbol_constant
from .generators import GeneratorId, Registry, UnknownGenerator, parse_id, registry_for
from .qseries import EXACT, QSeries


class ExprSyntaxError(SyntaxError):
    def __init__(self, msg: str, offset: int, text: str = ""):
        super().__init__(f"{msg} at offset {offset}")
        self.offset = offset
        self.text = text


class MalformedTransform(ValueError):
    pass


class FrickeInExactMode(ValueError):
    pass


class NonConvergent(ValueError):
    pass


class CatalogError(ValueError):
    pass


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Affine:
    """tau -> scale*tau + shift."""
    scale: Fraction
    shift: Fraction

    def apply(self, tau: complex) -> complex:
        return float(self.scale) * tau + float(self.shift)


@dataclass(frozen=True)
class Fricke:
    """tau -> -1/(N*tau)."""
    N: int

    def apply(self, tau: complex) -> complex:
        return -1 / (self.N * tau)


Transform = Union[Affine, Fricke]


@dataclass(frozen=True)
class GenRef:
    gid: GeneratorId
    transform: Optional[Transform] = None


@dataclass(frozen=True)
class Rat:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Tau:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: Fraction


Expr = Union[GenRef, Rat, Sym, Tau, Neg, Add, Sub, Mul, Div, Pow]


# ---------------------------------------------------------------------------
# tokenizer / parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(src: str):
    toks = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m.end() == pos or not m.group(0).strip():
            break
        num, ident, ch = m.groups()
        start = m.start(m.lastindex) + 1  # 1-based column
        if num is not None:
            toks.append(("num", int(num), start))
        elif ident is not None:
            toks.append(("id", ident, start))
        else:
            toks.append(("op", ch, start))
        pos = m.end()
    toks.append(("end", None, len(src) + 1))
    return toks


def _fold(node):
    """Fold rational-constant arithmetic."""
    if isinstance(node, Neg) and isinstance(node.arg, Rat):
        return Rat(-node.arg.value)
    if isinstance(node, (Add, Sub, Mul, Div)) and isinstance(node.left, Rat) and isinstance(node.right, Rat):
        a, b = node.left.value, node.right.value
        if isinstance(node, Add):
            return Rat(a + b)
        if isinstance(node, Sub):
            return Rat(a - b)
        if isinstance(node, Mul):
            return Rat(a * b)
        if b == 0:
            raise ZeroDivisionError("division by zero in constant expression")
        return Rat(a / b)
    if isinstance(node, Pow) and isinstance(node.base, Rat) and node.exp.denominator == 1:
        if node.base.value == 0 and node.exp < 0:
            raise ZeroDivisionError("zero to a negative power")
        return Rat(node.base.value ** int(node.exp))
    return node


_FAMILY_NAMES = {"F", "G", "f", "g"}
_PRIMED = {"Fp3", "Gp3"}
_CONST_FUNCS = {"sqrt", "zeta", "cbrt"}


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ExprSyntaxError(msg, tok[2], self.src)

    def expect(self, kind, value=None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            self.error(f"expected {want!r}", tok)
        return tok

    def is_op(self, *ops):
        tok = self.peek()
        return tok[0] == "op" and tok[1] in ops

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.is_op("+", "-"):
            op = self.next()[1]
            rhs = self.term()
            node = _fold(Add(node, rhs) if op == "+" else Sub(node, rhs))
        return node

    def term(self):
        node = self.factor()
        while self.is_op("*", "/"):
            op = self.next()[1]
            rhs = self.factor()
            node = _fold(Mul(node, rhs) if op == "*" else Div(node, rhs))
        return node

    def factor(self):
        if self.is_op("-"):
            self.next()
            return _fold(Neg(self.factor()))
        return self.power()

    def power(self):
        base = self.atom()
        if self.is_op("^"):
            self.next()
            return _fold(Pow(base, self.exponent()))
        return base

    def _signed_int(self):
        neg = False
        if self.is_op("-"):
            self.next()
            neg = True
        tok = self.peek()
        if tok[0] != "num":
            self.error("expected an integer")
        self.next()
        return -tok[1] if neg else tok[1]

    def exponent(self):
        if self.is_op("("):
            self.next()
            num = self._signed_int()
            den = 1
            if self.is_op("/"):
                self.next()
                den = self.expect("num")[1]
                if den == 0:
                    self.error("zero denominator in exponent")
            self.expect("op", ")")
            return Fraction(num, den)
        return Fraction(self._signed_int())

    def atom(self):
        tok = self.peek()
        kind, val, pos = tok
        if kind == "num":
            self.next()
            return Rat(Fraction(val))
        if kind == "op" and val == "(":
            self.next()
            node = self.expr()
            self.expect("op", ")")
            return node
        if kind != "id":
            self.error(f"unexpected {val!r}" if val is not None else "unexpected end of input")
        self.next()
        if val == "t":
            return Tau()
        if val in ("i", "rho"):
            return Sym(val)
        if val in _CONST_FUNCS:
            self.expect("op", "(")
            arg = self._signed_int()
            self.expect("op", ")")
            name = f"{val}({arg})"
            try:
                symbol_constant(name)
            except UnknownConstant as exc:
                raise ExprSyntaxError(str(exc), pos, self.src) from None
            return Sym(name)
        if val in _FAMILY_NAMES:
            self.expect("op", "(")
            level = self._signed_int()
            self.expect("op", ",")
            j = self._signed_int()
            self.expect("op", ")")
            gid = GeneratorId(val, level, j)
        elif val in _PRIMED:
            self.expect("op", "(")
            j = self._signed_int()
            self.expect("op", ")")
            gid = GeneratorId(val[:2], 3, j)
        else:
            gid = parse_id(val)
        transform = None
        if self.is_op("["):
            open_tok = self.next()
            start = self.i
            depth = 1
            while depth:
                t = self.next()
                if t[0] == "end":
                    self.error("unterminated transform", open_tok)
                if t[0] == "op" and t[1] == "[":
                    depth += 1
                elif t[0] == "op" and t[1] == "]":
                    depth -= 1
            close_tok = self.toks[self.i - 1]
            inner = self.src[open_tok[2]:close_tok[2] - 1]
            if start == self.i - 1:
                raise MalformedTransform("empty transform")
            transform = parse_transform(inner)
        return GenRef(gid, transform)


_FRICKE_RE = re.compile(r"^-1/(?:\((\d+)\*?t\)|t)$")


def parse_transform(text: str) -> Transform:
    """Parse the inside of ``[...]``: an affine map of t or ``-1/(N*t)``."""
    compact = re.sub(r"\s+", "", text)
    m = _FRICKE_RE.match(compact)
    if m:
        N = int(m.group(1)) if m.group(1) else 1
        if N <= 0:
            raise MalformedTransform(f"bad Fricke level in {text!r}")
        return Fricke(N)
    try:
        node = _Parser(compact).parse()
    except ExprSyntaxError as exc:
        raise MalformedTransform(f"cannot parse transform {text!r}: {exc}") from None
    a, b = _affine(node, text)
    if a <= 0:
        raise MalformedTransform(f"transform {text!r} must have a positive coefficient of t")
    return Affine(a, b)


def _affine(node, text) -> tuple[Fraction, Fraction]:
    if isinstance(node, Tau):
        return Fraction(1), Fraction(0)
    if isinstance(node, Rat):
        return Fraction(0), node.value
    if isinstance(node, Neg):
        a, b = _affine(node.arg, text)
        return -a, -b
    if isinstance(node, (Add, Sub)):
        a1, b1 = _affine(node.left, text)
        a2, b2 = _affine(node.right, text)
        s = 1 if isinstance(node, Add) else -1
        return a1 + s * a2, b1 + s * b2
    if isinstance(node, Mul):
        a1, b1 = _affine(node.left, text)
        a2, b2 = _affine(node.right, text)
        if a1 and a2:
            raise MalformedTransform(f"transform {text!r} is not affine")
        return a1 * b2 + a2 * b1, b1 * b2
    if isinstance(node, Div):
        a1, b1 = _affine(node.left, text)
        a2, b2 = _affine(node.right, text)
        if a2 or not b2:
            raise MalformedTransform(f"transform {text!r} divides by a non-constant")
        return a1 / b2, b1 / b2
    raise MalformedTransform(f"transform {text!r} may only use t and rational constants")


def parse_expr(src: str) -> Expr:
    return _Parser(src).parse()


# ---------------------------------------------------------------------------
# printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _prec(node) -> int:
    if isinstance(node, Rat):
        v = node.value
        if v < 0:
            return 3 if v.denominator == 1 else 2
        return 5 if v.denominator == 1 else 2
    return _PREC.get(type(node), 5)


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_transform(tr: Transform) -> str:
    if isinstance(tr, Fricke):
        return f"-1/({tr.N}*t)"
    s = "t" if tr.scale == 1 else f"{_fmt_frac(tr.scale)}*t"
    if tr.shift > 0:
        s += f"+{_fmt_frac(tr.shift)}"
    elif tr.shift < 0:
        s += f"-{_fmt_frac(-tr.shift)}"
    return s


def to_source(node: Expr) -> str:
    """Render an AST so that ``parse_expr(to_source(e)) == e``."""
    def wrap(child, need):
        s = to_source(child)
        return f"({s})" if _prec(child) < need else s

    if isinstance(node, Rat):
        return _fmt_frac(node.value)
    if isinstance(node, Sym):
        return node.name
    if isinstance(node, Tau):
        return "t"
    if isinstance(node, GenRef):
        s = str(node.gid)
        if node.transform is not None:
            s += f"[{format_transform(node.transform)}]"
        return s
    if isinstance(node, Neg):
        return "-" + wrap(node.arg, 3)
    if isinstance(node, Add):
        return f"{wrap(node.left, 1)} + {wrap(node.right, 2)}"
    if isinstance(node, Sub):
        return f"{wrap(node.left, 1)} - {wrap(node.right, 2)}"
    if isinstance(node, Mul):
        return f"{wrap(node.left, 2)}*{wrap(node.right, 3)}"
    if isinstance(node, Div):
        return f"{wrap(node.left, 2)}/{wrap(node.right, 3)}"
    if isinstance(node, Pow):
        e = node.exp
        es = str(e.numerator) if e.denominator == 1 and e >= 0 else f"({_fmt_frac(e)})"
        return f"{wrap(node.base, 5)}^{es}"
    raise TypeError(f"not an expression node: {node!r}")


def generators_in(node: Expr) -> set[GeneratorId]:
    if isinstance(node, GenRef):
        return {node.gid}
    out: set[GeneratorId] = set()
    for name in ("arg", "left", "right", "base"):
        child = getattr(node, name, None)
        if child is not None:
            out |= generators_in(child)
    return out


def has_fricke(node: Expr) -> bool:
    if isinstance(node, GenRef):
        return isinstance(node.transform, Fricke)
    return any(has_fricke(getattr(node, n)) for n in ("arg", "left", "right", "base") if hasattr(node, n))


# ---------------------------------------------------------------------------
# exact evaluation


def eval_constant(node: Expr) -> RingElem:
    """Value of a generator-free, t-free expression in Q(z24, cbrt 4)."""
    if isinstance(node, Rat):
        return RingElem.from_rational(node.value)
    if isinstance(node, Sym):
        return symbol_constant(node.name)
    if isinstance(node, Neg):
        return -eval_constant(node.arg)
    if isinstance(node, Add):
        return eval_constant(node.left) + eval_constant(node.right)
    if isinstance(node, Sub):
        return eval_constant(node.left) - eval_constant(node.right)
    if isinstance(node, Mul):
        return eval_constant(node.left) * eval_constant(node.right)
    if isinstance(node, Div):
        return eval_constant(node.left) / eval_constant(node.right)
    if isinstance(node, Pow):
        if node.exp.denominator != 1:
            raise ValueError("fractional powers are not exact")
        return eval_constant(node.base) ** int(node.exp)
    raise ValueError(f"{to_source(node)} is not a constant")


def _eval_series(node: Expr, order: Fraction, reg: Registry):
    """Returns a QSeries or a domain scalar."""
    dom = reg.domain
    if isinstance(node, Rat):
        return dom.scalar(node.value)
    if isinstance(node, Sym):
        return dom.scalar(symbol_constant(node.name))
    if isinstance(node, Tau):
        raise ValueError("the variable t has no q-expansion")
    if isinstance(node, GenRef):
        tr = node.transform
        if tr is None:
            return reg.generate(node.gid, order)
        if isinstance(tr, Fricke):
            raise FrickeInExactMode(f"{to_source(node)} needs numeric evaluation")
        s = reg.generate(node.gid, order / tr.scale)
        return s.substitute(tr.scale, tr.shift)
    if isinstance(node, Neg):
        v = _eval_series(node.arg, order, reg)
        if isinstance(v, QSeries) or dom is EXACT:
            return -v
        return -v % dom.p
    if isinstance(node, (Add, Sub, Mul, Div)):
        a = _eval_series(node.left, order, reg)
        b = _eval_series(node.right, order, reg)
        sa, sb = isinstance(a, QSeries), isinstance(b, QSeries)
        if not sa and not sb:
            return _scalar_op(type(node), a, b, dom)
        if isinstance(node, Add):
            return a + b if sa else b + a
        if isinstance(node, Sub):
            return a - b if sa else (-b) + a
        if isinstance(node, Mul):
            return a * b if sa else b * a
        if sb:
            inv = b.inverse()
            return a * inv if sa else inv * a
        return a / b
    if isinstance(node, Pow):
        if node.exp.denominator != 1:
            raise ValueError("fractional powers need numeric evaluation")
        v = _eval_series(node.base, order, reg)
        k = int(node.exp)
        if isinstance(v, QSeries):
            return v ** k
        return _scalar_pow(v, k, dom)
    raise TypeError(f"not an expression node: {node!r}")


def _scalar_op(op, a, b, dom):
    if dom is EXACT:
        a, b = RingElem.coerce(a), RingElem.coerce(b)
        if op is Add:
            return a + b
        if op is Sub:
            return a - b
        if op is Mul:
            return a * b
        return a / b
    p = dom.p
    if op is Add:
        return (a + b) % p
    if op is Sub:
        return (a - b) % p
    if op is Mul:
        return a * b % p
    return a * dom.inv(b) % p


def _scalar_pow(v, k, dom):
    if dom is EXACT:
        return RingElem.coerce(v) ** k
    return pow(v, k, dom.p)


def eval_exact(node: Union[Expr, str], order, registry: Optional[Registry] = None) -> QSeries:
    """q-expansion of ``node`` known strictly below ``order``."""
    if isinstance(node, str):
        node = parse_expr(node)
    reg = registry or registry_for(EXACT)
    order = Fraction(order)
    attempt = order
    for _ in range(6):
        v = _eval_series(node, attempt, reg)
        if not isinstance(v, QSeries):
            return QSeries.constant(v, order, Fraction(0), reg.domain)
        if v.prec >= order:
            return v.truncate(order)
        attempt += order - v.prec + 1
    raise RuntimeError(f"could not evaluate {to_source(node)} to order {order}")


# ---------------------------------------------------------------------------
# numeric evaluation


def eval_numeric(node: Union[Expr, str], tau: complex, order=None, registry: Optional[Registry] = None,
                 im_floor: float = 0.05) -> complex:
    """Complex value of ``node`` at tau (Im tau > 0).

    Generators are summed from their q-expansions at the transformed point;
    with ``order=None`` the depth is chosen adaptively from the tail bound.
    """
    from . import numeric

    if isinstance(node, str):
        node = parse_expr(node)
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half-plane")
    reg = registry or registry_for(EXACT)

    def ev(n):
        if isinstance(n, Rat):
            return complex(n.value)
        if isinstance(n, Sym):
            return complex_embed(symbol_constant(n.name))
        if isinstance(n, Tau):
            return tau
        if isinstance(n, GenRef):
            point = tau if n.transform is None else n.transform.apply(tau)
            if point.imag < im_floor:
                raise NonConvergent(f"{to_source(n)} evaluated at Im {point.imag:.3g} < {im_floor}")
            return numeric.evaluate_generator(n.gid, point, reg, order=order)
        if isinstance(n, Neg):
            return -ev(n.arg)
        if isinstance(n, Add):
            return ev(n.left) + ev(n.right)
        if isinstance(n, Sub):
            return ev(n.left) - ev(n.right)
        if isinstance(n, Mul):
            return ev(n.left) * ev(n.right)
        if isinstance(n, Div):
            return ev(n.left) / ev(n.right)
        if isinstance(n, Pow):
            base = ev(n.base)
            if n.exp.denominator == 1:
                return base ** int(n.exp)
            return cmath.exp(float(n.exp) * cmath.log(base))
        raise TypeError(f"not an expression node: {n!r}")

    return ev(node)


# ---------------------------------------------------------------------------
# identity entries and catalog files

KINDS = ("exact-zero", "numeric-transform", "numeric-zero")


@dataclass(frozen=True)
class IdentityEntry:
    id: str
    kind: str
    level: int = 1
    weight: Fraction = Fraction(1)
    expr: Optional[Expr] = None
    lhs: Optional[Expr] = None
    rhs: Optional[Expr] = None
    multiplier: Optional[Expr] = None
    point: Optional[Expr] = None
    alt_point: Optional[Expr] = None
    depth: Optional[Fraction] = None
    tol: Optional[float] = None
    note: str = ""
    line: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise CatalogError(f"{self.id}: unknown kind {self.kind!r}")
        if not 1 <= self.level <= 24:
            raise CatalogError(f"{self.id}: level must be in 1..24")
        if self.weight < Fraction(1, 2):
            raise CatalogError(f"{self.id}: weight must be at least 1/2")
        need = {"exact-zero": ("expr",), "numeric-transform": ("lhs", "rhs", "multiplier"),
                "numeric-zero": ("expr", "point")}[self.kind]
        for k in need:
            if getattr(self, k) is None:
                raise CatalogError(f"{self.id}: kind {self.kind} needs '{k}'")
        if self.kind == "exact-zero" and has_fricke(self.expr):
            raise CatalogError(f"{self.id}: exact entries cannot use Fricke transforms")
        if self.point is not None and complex_embed(eval_constant(self.point)).imag <= 0:
            raise CatalogError(f"{self.id}: point must lie in the upper half-plane")

    def to_text(self) -> str:
        lines = [f"id: {self.id}", f"kind: {self.kind}", f"level: {self.level}",
                 f"weight: {_fmt_frac(self.weight)}"]
        for key in ("expr", "lhs", "rhs", "multiplier", "point", "alt_point"):
            v = getattr(self, key)
            if v is not None:
                lines.append(f"{key}: {to_source(v)}")
        if self.depth is not None:
            lines.append(f"depth: {_fmt_frac(self.depth)}")
        if self.tol is not None:
            lines.append(f"tol: {self.tol!r}")
        if self.note:
            lines.append(f"note: {self.note}")
        return "\n".join(lines)


_EXPR_KEYS = {"expr", "lhs", "rhs", "multiplier", "point", "alt_point"}
_ALL_KEYS = _EXPR_KEYS | {"id", "kind", "level", "weight", "depth", "tol", "note"}


def _entry_from_fields(fields: dict[str, tuple[str, int]], first_line: int) -> IdentityEntry:
    def get(key):
        return fields[key][0] if key in fields else None

    if "id" not in fields or "kind" not in fields:
        raise CatalogError(f"line {first_line}: entry needs 'id' and 'kind'")
    kw = {}
    for key in _EXPR_KEYS:
        if key in fields:
            text, line = fields[key]
            try:
                kw[key] = parse_expr(text)
            except (ExprSyntaxError, UnknownGenerator, MalformedTransform) as exc:
                raise CatalogError(f"line {line}: {key}: {exc}") from None
    try:
        return IdentityEntry(
            id=get("id"),
            kind=get("kind"),
            level=int(get("level") or 1),
            weight=Fraction(get("weight") or 1),
            depth=Fraction(get("depth")) if get("depth") else None,
            tol=float(get("tol")) if get("tol") else None,
            note=get("note") or "",
            line=first_line,
            **kw,
        )
    except (ValueError, ZeroDivisionError) as exc:
        raise CatalogError(f"line {first_line}: {exc}") from None


def parse_catalog(text: str) -> list[IdentityEntry]:
    """Parse catalog text: blank-line separated blocks of ``key: value`` lines."""
    entries: list[IdentityEntry] = []
    fields: dict[str, tuple[str, int]] = {}
    first = 0

    def flush():
        nonlocal fields
        if fields:
            entries.append(_entry_from_fields(fields, first))
        fields = {}

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            flush()
            continue
        if ":" not in line:
            raise CatalogError(f"line {lineno}: expected 'key: value'")
        key, value = line.split(":", 1)
        key = key.strip()
        if key not in _ALL_KEYS:
            raise CatalogError(f"line {lineno}: unknown key {key!r}")
        if not fields:
            first = lineno
        if key in fields:
            raise CatalogError(f"line {lineno}: duplicate key {key!r}")
        fields[key] = (value.strip(), lineno)
    flush()
    seen = set()
    for e in entries:
        if e.id in seen:
            raise CatalogError(f"duplicate entry id {e.id!r}")
        seen.add(e.id)
    return entries


def load_catalog(path) -> list[IdentityEntry]:
    return parse_catalog(Path(path).read_text(encoding="utf-8"))


def default_catalog_path() -> Path:
    return Path(__file__).with_name("catalog") / "paper.cat"


def parse(src: str):
    """Parse an expression, or an identity entry if the text has an ``id:`` line."""
    if re.search(r"^\s*id\s*:", src, re.MULTILINE):
        entries = parse_catalog(src)
        if len(entries) != 1:
            raise CatalogError("expected exactly one entry")
        return entries[0]
    return parse_expr(src)
