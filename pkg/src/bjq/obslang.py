"""Expression language for observables and operators.

Grammar (v1, stable):

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-'* power
    power   := atom ('^' INT)?
    atom    := INT | IDENT | '(' expr ')'

* ``^`` binds tighter than ``*``/``/``, which bind tighter than ``+``/``-``;
  ``*`` and ``/`` are left-associative.  Implicit multiplication is not
  allowed.
* Lower-case ``x``, ``p``, ``x1``..``x9``, ``p1``..``p9`` are classical
  variables (``x`` is ``x1``); upper-case ``X``, ``P``, ``X1``.. are
  operator variables.  One expression may not mix the two kinds.
* ``i`` is the imaginary unit, ``hbar`` the formal Planck constant.
* Division is only by nonzero rational constants (e.g. ``3/4``,
  ``(X*P+P*X)/2``); this keeps the language polynomial.
* Operator products are taken in written order and then normal-ordered:
  ``X*P - P*X`` evaluates to ``i*hbar``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exactalg import HCoeff, NormalOp, PhasePoly
from .quantizers import builtin, builtin_min_n, builtin_names

__all__ = [
    "ObsParseError",
    "ObsSemanticError",
    "parse_classical",
    "parse_operator",
    "print_canonical",
    "GRAMMAR_VERSION",
]

GRAMMAR_VERSION = 1

MAX_EXPONENT = 64
MAX_PAREN_DEPTH = 64
MAX_TERMS = 200_000


class ObsParseError(ValueError):
    """Syntax error; ``column`` is 1-based."""

    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column


class ObsSemanticError(ValueError):
    """Well-formed input with an invalid meaning; ``column`` is 1-based."""

    def __init__(self, message: str, column: int = 1):
        super().__init__(f"column {column}: {message}")
        self.column = column


# -- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    col: int


@dataclass(frozen=True)
class ImagUnit:
    col: int


@dataclass(frozen=True)
class HbarSym:
    col: int


@dataclass(frozen=True)
class Var:
    kind: str  # 'x' | 'p' | 'X' | 'P'
    index: int  # 1-based
    col: int


@dataclass(frozen=True)
class Builtin:
    name: str
    col: int


@dataclass(frozen=True)
class Neg:
    arg: "Node"
    col: int


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int
    col: int


@dataclass(frozen=True)
class BinOp:
    op: str  # '+' | '-' | '*' | '/'
    left: "Node"
    right: "Node"
    col: int


Node = Union[Num, ImagUnit, HbarSym, Var, Builtin, Neg, Pow, BinOp]


# -- lexer ------------------------------------------------------------------

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_NUM_RE = re.compile(r"[0-9]+")
_SYMBOLS = {"+", "-", "*", "/", "^", "(", ")"}


@dataclass(frozen=True)
class _Token:
    kind: str  # 'num' | 'ident' | one of _SYMBOLS | 'end'
    text: str
    col: int  # 1-based


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    length = len(text)
    while pos < length:
        ch = text[pos]
        if ch in " \t\r\n":
            pos += 1
            continue
        m = _NUM_RE.match(text, pos)
        if m:
            tokens.append(_Token("num", m.group(), pos + 1))
            pos = m.end()
            continue
        m = _IDENT_RE.match(text, pos)
        if m:
            tokens.append(_Token("ident", m.group(), pos + 1))
            pos = m.end()
            continue
        if ch in _SYMBOLS:
            tokens.append(_Token(ch, ch, pos + 1))
            pos += 1
            continue
        raise ObsParseError(f"unexpected character {ch!r}", pos + 1)
    tokens.append(_Token("end", "", length + 1))
    return tokens


# -- parser -----------------------------------------------------------------

_BUILTIN_KINDS = builtin_names()


def _classify_ident(name: str, col: int) -> Node:
    if name == "i":
        return ImagUnit(col)
    if name == "hbar":
        return HbarSym(col)
    if name in _BUILTIN_KINDS:
        return Builtin(name, col)
    m = re.fullmatch(r"([xpXP])([1-9])?", name)
    if m:
        index = int(m.group(2)) if m.group(2) else 1
        return Var(m.group(1), index, col)
    raise ObsSemanticError(f"unknown identifier {name!r}", col)


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._pos = 0
        self._depth = 0

    def _peek(self) -> _Token:
        return self._tokens[self._pos]

    def _take(self) -> _Token:
        tok = self._tokens[self._pos]
        self._pos += 1
        return tok

    def parse(self) -> Node:
        node = self._expr()
        tok = self._peek()
        if tok.kind != "end":
            raise ObsParseError(f"unexpected {tok.text!r}", tok.col)
        return node

    def _expr(self) -> Node:
        node = self._term()
        while self._peek().kind in ("+", "-"):
            tok = self._take()
            node = BinOp(tok.kind, node, self._term(), tok.col)
        return node

    def _term(self) -> Node:
        node = self._factor()
        while self._peek().kind in ("*", "/"):
            tok = self._take()
            node = BinOp(tok.kind, node, self._factor(), tok.col)
        return node

    def _factor(self) -> Node:
        negations = 0
        first_col = self._peek().col
        while self._peek().kind == "-":
            self._take()
            negations += 1
        node = self._power()
        if negations % 2:
            node = Neg(node, first_col)
        return node

    def _power(self) -> Node:
        node = self._atom()
        if self._peek().kind == "^":
            caret = self._take()
            tok = self._peek()
            if tok.kind != "num":
                raise ObsParseError(
                    "exponent must be a non-negative integer literal", tok.col
                )
            self._take()
            exponent = int(tok.text)
            if exponent > MAX_EXPONENT:
                raise ObsSemanticError(
                    f"exponent {exponent} exceeds the limit {MAX_EXPONENT}", tok.col
                )
            node = Pow(node, exponent, caret.col)
        return node

    def _atom(self) -> Node:
        tok = self._take()
        if tok.kind == "num":
            return Num(int(tok.text), tok.col)
        if tok.kind == "ident":
            return _classify_ident(tok.text, tok.col)
        if tok.kind == "(":
            self._depth += 1
            if self._depth > MAX_PAREN_DEPTH:
                raise ObsParseError("parentheses nested too deeply", tok.col)
            node = self._expr()
            closing = self._take()
            if closing.kind != ")":
                raise ObsParseError("expected ')'", closing.col)
            self._depth -= 1
            return node
        if tok.kind == "end":
            raise ObsParseError("unexpected end of input", tok.col)
        raise ObsParseError(f"unexpected {tok.text!r}", tok.col)


# -- kind/dof scan ----------------------------------------------------------


def _scan(node: Node, found: dict) -> None:
    if isinstance(node, Var):
        kind = "classical" if node.kind in ("x", "p") else "operator"
        found.setdefault(kind, node.col)
        found["min_n"] = max(found["min_n"], node.index)
    elif isinstance(node, Builtin):
        found.setdefault(_BUILTIN_KINDS[node.name], node.col)
        found["min_n"] = max(found["min_n"], builtin_min_n(node.name))
    elif isinstance(node, Neg):
        _scan(node.arg, found)
    elif isinstance(node, Pow):
        _scan(node.base, found)
    elif isinstance(node, BinOp):
        _scan(node.left, found)
        _scan(node.right, found)


# -- evaluation -------------------------------------------------------------


class _Evaluator:
    """Evaluates an AST into the carrier for the requested kind.

    Classical mode builds `PhasePoly`; operator mode builds `NormalOp`
    with products in written order (normal ordering happens inside the
    operator product).
    """

    def __init__(self, mode: str, n: int):
        self.mode = mode
        self.n = n

    def _scalar(self, coeff: HCoeff):
        if self.mode == "classical":
            return PhasePoly.scalar(coeff, self.n)
        return NormalOp.scalar(coeff, self.n)

    def _check_size(self, value):
        if len(value) > MAX_TERMS:
            raise ObsSemanticError("expression expands to too many terms")

    def eval(self, node: Node):
        if isinstance(node, Num):
            return self._scalar(HCoeff.rational(node.value))
        if isinstance(node, ImagUnit):
            return self._scalar(HCoeff.imag())
        if isinstance(node, HbarSym):
            return self._scalar(HCoeff.hbar())
        if isinstance(node, Var):
            return self._eval_var(node)
        if isinstance(node, Builtin):
            return self._eval_builtin(node)
        if isinstance(node, Neg):
            return -self.eval(node.arg)
        if isinstance(node, Pow):
            base = self.eval(node.base)
            out = base**node.exponent
            self._check_size(out)
            return out
        if isinstance(node, BinOp):
            return self._eval_binop(node)
        raise TypeError(f"unhandled node {node!r}")

    def _eval_var(self, node: Var):
        classical = node.kind in ("x", "p")
        if classical != (self.mode == "classical"):
            raise ObsSemanticError(
                f"variable {node.kind}{node.index} has the wrong kind here", node.col
            )
        j = node.index - 1
        if node.kind == "x":
            return PhasePoly.x(j, self.n)
        if node.kind == "p":
            return PhasePoly.p(j, self.n)
        if node.kind == "X":
            return NormalOp.x(j, self.n)
        return NormalOp.p(j, self.n)

    def _eval_builtin(self, node: Builtin):
        if _BUILTIN_KINDS[node.name] != self.mode:
            raise ObsSemanticError(
                f"builtin {node.name!r} has the wrong kind here", node.col
            )
        return builtin(node.name, self.n)

    def _eval_binop(self, node: BinOp):
        left = self.eval(node.left)
        if node.op == "/":
            divisor = self._rational_value(node.right, node.col)
            return left.scale(1 / divisor)
        right = self.eval(node.right)
        if node.op == "+":
            out = left + right
        elif node.op == "-":
            out = left - right
        else:
            out = left * right
        self._check_size(out)
        return out

    def _rational_value(self, node: Node, col: int) -> Fraction:
        """Divisors must be nonzero pure rational constants."""
        value = self.eval(node)
        scalar = value.scalar_part() if isinstance(value, NormalOp) else None
        if isinstance(value, PhasePoly):
            zero = ((0,) * self.n, (0,) * self.n)
            scalar = value.coefficient(*zero)
            nonscalar = len(value) > (1 if scalar else 0)
        else:
            nonscalar = len(value) > (1 if scalar else 0)
        if nonscalar:
            raise ObsSemanticError("division only by rational constants", col)
        if not scalar:
            raise ObsSemanticError("division by zero", col)
        items = list(scalar.items())
        if len(items) != 1 or items[0][0] != 0 or items[0][1][1] != 0:
            raise ObsSemanticError("division only by rational constants", col)
        return items[0][1][0]


def _parse(text: str, mode: str, n: int | None):
    if len(text) > 65536:
        raise ObsParseError("input longer than 64 KiB", 1)
    ast = _Parser(_tokenize(text)).parse()
    found = {"min_n": 1}
    _scan(ast, found)
    if "classical" in found and "operator" in found:
        raise ObsSemanticError(
            "expression mixes classical and operator variables",
            max(found["classical"], found["operator"]),
        )
    other = "operator" if mode == "classical" else "classical"
    if other in found:
        raise ObsSemanticError(f"{other} variables in a {mode} expression", found[other])
    dofs = found["min_n"]
    if n is not None:
        if n < dofs:
            raise ObsSemanticError(f"expression needs n >= {dofs}, got n={n}")
        dofs = n
    return _Evaluator(mode, dofs).eval(ast)


def parse_classical(text: str, n: int | None = None) -> PhasePoly:
    """Parse a classical observable; n is inferred from the highest
    variable index unless overridden."""
    return _parse(text, "classical", n)


def parse_operator(text: str, n: int | None = None) -> NormalOp:
    """Parse an operator expression; products are normal-ordered in
    written order."""
    return _parse(text, "operator", n)


# -- canonical printer ------------------------------------------------------


def _var_name(letter: str, dof: int, n: int) -> str:
    if n == 1:
        return letter
    return f"{letter}{dof + 1}"


def _var_part(key, n: int, upper: bool) -> str:
    alpha, beta = key
    xs = "XP" if upper else "xp"
    factors = []
    for j, e in enumerate(alpha):
        if e:
            name = _var_name(xs[0], j, n)
            factors.append(name if e == 1 else f"{name}^{e}")
    for j, e in enumerate(beta):
        if e:
            name = _var_name(xs[1], j, n)
            factors.append(name if e == 1 else f"{name}^{e}")
    return "*".join(factors)


def _piece(magnitude: Fraction, imag: bool, hpow: int, varpart: str) -> str:
    factors = []
    if magnitude != 1 or (not imag and hpow == 0 and not varpart):
        factors.append(str(magnitude))
    if imag:
        factors.append("i")
    if hpow == 1:
        factors.append("hbar")
    elif hpow > 1:
        factors.append(f"hbar^{hpow}")
    if varpart:
        factors.append(varpart)
    return "*".join(factors)


def print_canonical(value: PhasePoly | NormalOp) -> str:
    """Deterministic text form; ``parse(print(v)) == v`` exactly.

    Terms are ordered by descending total degree, then descending
    lexicographic multi-index (x before p, dof index ascending); within a
    term, hbar powers ascend and the real piece precedes the imaginary.
    """
    if isinstance(value, PhasePoly):
        upper = False
    elif isinstance(value, NormalOp):
        upper = True
    else:
        raise TypeError("print_canonical expects PhasePoly or NormalOp")
    n = value.n
    keys = sorted(
        (key for key, _ in value.items()),
        key=lambda key: (
            -(sum(key[0]) + sum(key[1])),
            tuple(-e for e in key[0] + key[1]),
        ),
    )
    pieces: list[tuple[bool, str]] = []  # (negative, text)
    for key in keys:
        coeff = value.coefficient(*key)
        varpart = _var_part(key, n, upper)
        for hpow, (re_part, im_part) in coeff.items():
            if re_part:
                pieces.append((re_part < 0, _piece(abs(re_part), False, hpow, varpart)))
            if im_part:
                pieces.append((im_part < 0, _piece(abs(im_part), True, hpow, varpart)))
    if not pieces:
        return "0"
    out = []
    for idx, (negative, text) in enumerate(pieces):
        if idx == 0:
            out.append(("-" if negative else "") + text)
        else:
            out.append((" - " if negative else " + ") + text)
    return "".join(out)
