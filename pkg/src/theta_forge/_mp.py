"""Private multiprecision context shared by every module.

A dedicated ``mpmath.MPContext`` keeps the library free of global state:
user code touching ``mpmath.mp`` never changes our working precision.
"""

import re

import mpmath

DPS = 30

ctx = mpmath.MPContext()
ctx.dps = DPS

pi = ctx.pi
I = ctx.mpc(0, 1)

_COMPLEX_RE = re.compile(
    r"^\s*(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?"
    r"(?:(?P<im>[+-]?(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)[ij])?\s*$"
)

_IMAG_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)[ij]$")


def mpc(z):
    """Coerce numbers and ``a+bi`` strings to a context complex."""
    if isinstance(z, str):
        return parse_complex(z)
    return ctx.mpc(z)


def parse_complex(text):
    """Parse ``a+bi`` / ``a-bi`` / ``bi`` / ``a`` literals (``j`` also accepted)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    pure = _IMAG_RE.match(s)
    if pure is not None:
        return ctx.mpc(0, ctx.mpf(pure.group(1) + ("1" if pure.group(1) in ("", "+", "-") else "")))
    m = _COMPLEX_RE.match(s)
    if m is None or (m.group("re") is None and m.group("im") is None):
        raise ValueError(f"bad complex literal: {text!r}")
    re_part = m.group("re")
    im_part = m.group("im")
    if im_part is None:
        return ctx.mpc(ctx.mpf(re_part), 0)
    if im_part in ("", "+"):
        im_val = ctx.mpf(1)
    elif im_part == "-":
        im_val = ctx.mpf(-1)
    else:
        im_val = ctx.mpf(im_part)
    return ctx.mpc(ctx.mpf(re_part) if re_part else 0, im_val)


def format_complex(z, digits=17):
    """Render a complex number in the shared ``a+bi`` text format."""
    z = ctx.mpc(z)
    re_s = ctx.nstr(z.real, digits, min_fixed=-6, max_fixed=6)
    im = z.imag
    sign = "-" if im < 0 else "+"
    im_s = ctx.nstr(abs(im), digits, min_fixed=-6, max_fixed=6)
    return f"{re_s}{sign}{im_s}i"


def fabs(z):
    return float(abs(z))
