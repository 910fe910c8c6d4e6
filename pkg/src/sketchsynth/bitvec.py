"""Hash-consed 32-bit bitvector / boolean term DAG with constant folding.

Terms are immutable and interned: structurally equal terms are the same
object, so equality tests and caching downstream (bit-blasting) are identity
based.  Arithmetic follows 32-bit two's-complement wraparound; division
truncates toward zero.
"""

from __future__ import annotations

WIDTH = 32
MASK = (1 << WIDTH) - 1
SIGN_BIT = 1 << (WIDTH - 1)

_COMMUTATIVE = {"add", "mul", "eq", "and", "or"}


class Term:
    __slots__ = ("op", "args", "payload", "tid", "is_bool")

    def __init__(self, op, args, payload, tid, is_bool):
        self.op = op
        self.args = args
        self.payload = payload
        self.tid = tid
        self.is_bool = is_bool

    def __repr__(self):
        if self.op in ("const", "bconst", "var", "bvar"):
            return f"{self.op}({self.payload})"
        return f"{self.op}({', '.join(map(repr, self.args))})"


_table = {}


def _mk(op, args=(), payload=None, is_bool=False):
    if op in _COMMUTATIVE and len(args) == 2 and args[0].tid > args[1].tid:
        args = (args[1], args[0])
    key = (op, payload, tuple(a.tid for a in args))
    t = _table.get(key)
    if t is None:
        t = Term(op, args, payload, len(_table), is_bool)
        _table[key] = t
    return t


def clear_cache():
    """Drop the intern table (mainly for memory-sensitive test loops)."""
    _table.clear()


def to_signed(u):
    return u - (1 << WIDTH) if u & SIGN_BIT else u


def to_unsigned(v):
    return v & MASK


# -- leaves ----------------------------------------------------------------


def const(v):
    return _mk("const", payload=v & MASK)


def var(name, width=WIDTH):
    """Fresh-by-name variable; bits at and above ``width`` are zero."""
    return _mk("var", payload=(name, width))


TRUE = _mk("bconst", payload=True, is_bool=True)
FALSE = _mk("bconst", payload=False, is_bool=True)


def bconst(v):
    return TRUE if v else FALSE


def bvar(name):
    return _mk("bvar", payload=name, is_bool=True)


def is_const(t):
    return t.op == "const"


def is_true(t):
    return t is TRUE


def is_false(t):
    return t is FALSE


def const_value(t):
    assert t.op in ("const", "bconst")
    return t.payload


# -- bitvector arithmetic --------------------------------------------------


def add(a, b):
    if a.op == "const" and b.op == "const":
        return const(a.payload + b.payload)
    if a.op == "const" and a.payload == 0:
        return b
    if b.op == "const" and b.payload == 0:
        return a
    return _mk("add", (a, b))


def sub(a, b):
    if a.op == "const" and b.op == "const":
        return const(a.payload - b.payload)
    if b.op == "const" and b.payload == 0:
        return a
    if a is b:
        return const(0)
    return _mk("sub", (a, b))


def neg(a):
    return sub(const(0), a)


def mul(a, b):
    if a.op == "const" and b.op == "const":
        return const(a.payload * b.payload)
    for x, y in ((a, b), (b, a)):
        if x.op == "const":
            if x.payload == 0:
                return const(0)
            if x.payload == 1:
                return y
    return _mk("mul", (a, b))


def sdiv(a, b):
    """Java-style truncating division; behavior for b == 0 is unconstrained
    (the interpreter guards division by zero separately)."""
    if a.op == "const" and b.op == "const" and b.payload != 0:
        sa, sb = to_signed(a.payload), to_signed(b.payload)
        q = abs(sa) // abs(sb)
        if (sa < 0) != (sb < 0):
            q = -q
        return const(q)
    if b.op == "const" and b.payload == 1:
        return a
    return _mk("sdiv", (a, b))


def srem(a, b):
    if a.op == "const" and b.op == "const" and b.payload != 0:
        sa, sb = to_signed(a.payload), to_signed(b.payload)
        r = abs(sa) % abs(sb)
        if sa < 0:
            r = -r
        return const(r)
    return _mk("srem", (a, b))


def ite(c, a, b):
    if c.op == "bconst":
        return a if c.payload else b
    if a is b:
        return a
    if a.is_bool:
        return or_(and_(c, a), and_(not_(c), b))
    return _mk("ite", (c, a, b))


# -- comparisons -----------------------------------------------------------


def eq(a, b):
    if a is b:
        return TRUE
    if a.is_bool:
        return iff(a, b)
    if a.op == "const" and b.op == "const":
        return bconst(a.payload == b.payload)
    return _mk("eq", (a, b), is_bool=True)


def ne(a, b):
    return not_(eq(a, b))


def slt(a, b):
    if a is b:
        return FALSE
    if a.op == "const" and b.op == "const":
        return bconst(to_signed(a.payload) < to_signed(b.payload))
    return _mk("slt", (a, b), is_bool=True)


def sle(a, b):
    if a is b:
        return TRUE
    return not_(slt(b, a))


def ult(a, b):
    if a is b:
        return FALSE
    if a.op == "const" and b.op == "const":
        return bconst(a.payload < b.payload)
    return _mk("ult", (a, b), is_bool=True)


def ule(a, b):
    if a is b:
        return TRUE
    return not_(ult(b, a))


# -- boolean connectives ---------------------------------------------------


def not_(a):
    if a.op == "bconst":
        return bconst(not a.payload)
    if a.op == "not":
        return a.args[0]
    return _mk("not", (a,), is_bool=True)


def and_(a, b):
    if a.op == "bconst":
        return b if a.payload else FALSE
    if b.op == "bconst":
        return a if b.payload else FALSE
    if a is b:
        return a
    if a is not_(b):
        return FALSE
    return _mk("and", (a, b), is_bool=True)


def or_(a, b):
    if a.op == "bconst":
        return TRUE if a.payload else b
    if b.op == "bconst":
        return TRUE if b.payload else a
    if a is b:
        return a
    if a is not_(b):
        return TRUE
    return _mk("or", (a, b), is_bool=True)


def implies(a, b):
    return or_(not_(a), b)


def iff(a, b):
    if a is b:
        return TRUE
    if a.op == "bconst":
        return b if a.payload else not_(b)
    if b.op == "bconst":
        return a if b.payload else not_(a)
    return and_(implies(a, b), implies(b, a))


def conj(terms):
    out = TRUE
    for t in terms:
        out = and_(out, t)
    return out


# -- evaluation under a concrete assignment --------------------------------


def evaluate(term, env):
    """Evaluate a term given ``env`` mapping variable names to ints/bools.

    Variables absent from ``env`` default to 0/False.  Used to replay a SAT
    model or a concrete candidate without re-running the interpreter.
    """
    cache = {}

    def ev(t):
        r = cache.get(t.tid)
        if r is not None:
            return r
        op = t.op
        if op in ("const", "bconst"):
            r = t.payload
        elif op == "var":
            r = int(env.get(t.payload[0], 0)) & MASK
        elif op == "bvar":
            r = bool(env.get(t.payload, False))
        elif op == "ite":
            r = ev(t.args[1]) if ev(t.args[0]) else ev(t.args[2])
        elif op == "not":
            r = not ev(t.args[0])
        elif op == "and":
            r = ev(t.args[0]) and ev(t.args[1])
        elif op == "or":
            r = ev(t.args[0]) or ev(t.args[1])
        else:
            a, b = ev(t.args[0]), ev(t.args[1])
            if op == "add":
                r = (a + b) & MASK
            elif op == "sub":
                r = (a - b) & MASK
            elif op == "mul":
                r = (a * b) & MASK
            elif op == "sdiv":
                sa, sb = to_signed(a), to_signed(b)
                if sb == 0:
                    r = 0
                else:
                    q = abs(sa) // abs(sb)
                    r = to_unsigned(-q if (sa < 0) != (sb < 0) else q)
            elif op == "srem":
                sa, sb = to_signed(a), to_signed(b)
                if sb == 0:
                    r = 0
                else:
                    m = abs(sa) % abs(sb)
                    r = to_unsigned(-m if sa < 0 else m)
            elif op == "eq":
                r = a == b
            elif op == "slt":
                r = to_signed(a) < to_signed(b)
            elif op == "ult":
                r = a < b
            else:
                raise AssertionError(f"unknown op {op}")
        cache[t.tid] = r
        return r

    return ev(term)
