"""Parser and canonical printer for the product-spec language.

Grammar (whitespace is insignificant)::

    spec     := '1' | factor ('*' factor)*
    factor   := atom ('^' power)?
    atom     := 'eta' '(' int ')' | 'theta' '(' int ')'
              | 'poch' '(' int ',' int ';' int ')' | 'q' | 'zeta'
    power    := int | '(' int ('/' int)? ')'

``q`` and ``zeta`` take rational powers, all other atoms integer powers.
Example: ``eta(1)^2 * theta(1)^-1``.
"""

import re
from fractions import Fraction

from .arith import fraction_str
from .errors import ParseError, SemanticError
from .qseries import Eta, Pochhammer, ProductSpec, Theta

_TOKEN = re.compile(r"(?P<int>[+-]?\d+)|(?P<name>[A-Za-z_]+)|(?P<sym>[()*^,;/])")
_SPACE = re.compile(r"\s*")
_ANY = {"integer", "name", "(", ")", "*", "^", ",", ";", "/"}


def _tokenize(text):
    for i, ch in enumerate(text):
        if not ch.isascii():
            raise ParseError(f"unexpected character {ch!r}", len(text[:i].encode("utf-8")), _ANY)
    tokens = []
    pos = _SPACE.match(text, 0).end()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, _ANY)
        tokens.append((m.lastgroup, m.group(), pos))
        pos = _SPACE.match(text, m.end()).end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind, value=None):
        tok = self.peek()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value if value is not None else kind
            raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", tok[2], {want})
        self.i += 1
        return tok

    def integer(self):
        return int(self.take("int")[1])

    def power(self, rational):
        tok = self.peek()
        if tok[0] == "int":
            return Fraction(self.integer())
        if tok[0] == "sym" and tok[1] == "(":
            self.take("sym", "(")
            num = self.integer()
            den = 1
            if self.peek()[:2] == ("sym", "/"):
                if not rational:
                    raise ParseError("integer power required", self.peek()[2], {")"})
                self.take("sym", "/")
                slash_pos = self.peek()[2]
                den = self.integer()
                if den == 0:
                    raise SemanticError(f"zero denominator at offset {slash_pos}")
            self.take("sym", ")")
            return Fraction(num, den)
        raise ParseError(f"unexpected {tok[1] or 'end of input'!r}", tok[2], {"integer", "("})

    def factor(self, acc):
        kind, name, pos = self.peek()
        if kind != "name":
            raise ParseError(f"unexpected {name or 'end of input'!r}", pos,
                             {"eta", "theta", "poch", "q", "zeta"})
        self.i += 1
        args = ()
        if name in ("eta", "theta"):
            self.take("sym", "(")
            args = (self.integer(),)
            self.take("sym", ")")
        elif name == "poch":
            self.take("sym", "(")
            m = self.integer()
            self.take("sym", ",")
            d = self.integer()
            self.take("sym", ";")
            a = self.integer()
            self.take("sym", ")")
            args = (m, d, a)
        elif name not in ("q", "zeta"):
            raise ParseError(f"unknown factor {name!r}", pos, {"eta", "theta", "poch", "q", "zeta"})
        power = Fraction(1)
        if self.peek()[:2] == ("sym", "^"):
            self.take("sym", "^")
            power = self.power(rational=name in ("q", "zeta"))
        try:
            if name == "q":
                acc["q"] += power
            elif name == "zeta":
                acc["z"] += power
            elif name == "eta":
                acc["named"].append(Eta(args[0], int(power)))
            elif name == "theta":
                acc["named"].append(Theta(args[0], int(power)))
            else:
                acc["poch"].append(Pochhammer(*args, int(power)))
        except SemanticError as exc:
            raise SemanticError(f"{exc} (factor at offset {pos})") from None

    def spec(self):
        acc = {"q": Fraction(0), "z": Fraction(0), "named": [], "poch": []}
        if self.peek()[:2] == ("int", "1") and self.tokens[self.i + 1][0] == "end":
            self.i += 1
        else:
            self.factor(acc)
            while self.peek()[:2] == ("sym", "*"):
                self.take("sym", "*")
                self.factor(acc)
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], {"*", "^", "end of input"})
        return ProductSpec(acc["q"], acc["z"], tuple(acc["poch"]), tuple(acc["named"]))


def parse_spec(text):
    """Parse DSL text into a :class:`ProductSpec`.

    Raises :class:`ParseError` (with byte offset and expected tokens) on bad
    syntax and :class:`SemanticError` for factors such as ``poch(0,1;0)``.
    """
    return _Parser(text).spec()


def _rational_power(x):
    return str(x.numerator) if x.denominator == 1 else f"({fraction_str(x)})"


def format_spec(spec):
    """Canonical text form; ``parse_spec(format_spec(s)) == s``."""
    parts = []
    if spec.q_prefactor:
        parts.append(f"q^{_rational_power(spec.q_prefactor)}")
    if spec.z_prefactor:
        parts.append(f"zeta^{_rational_power(spec.z_prefactor)}")
    for f in spec.named_factors:
        if isinstance(f, Eta):
            parts.append(f"eta({f.level})^{f.power}")
        else:
            parts.append(f"theta({f.scale})^{f.power}")
    for p in spec.pochhammer_factors:
        parts.append(f"poch({p.offset},{p.step};{p.shift})^{p.power}")
    return " * ".join(parts) if parts else "1"
