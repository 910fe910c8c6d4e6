"""AST-to-IR translation.

Every method body becomes a flat function named by the mangling scheme;
virtual call sites go through synthesized ``dyn_dispatch_*`` functions that
branch on the receiver's class id; constructors become ``new_*`` factory
functions returning a fresh object record; ``minimize(e)`` harness statements
become program-level objectives.
"""

from __future__ import annotations

from . import ast_nodes as A
from . import ir as I
from . import stdlib
from . import typetags as T
from .errors import HarnessShapeError, TypeLoweringError

ARITH_OPS = {"+", "-", "*", "/", "%"}
REL_OPS = {"<", "<=", ">", ">="}
EQ_OPS = {"==", "!="}
LOGIC_OPS = {"&&", "||"}


def lower_program(ast, table, registry):
    """Translate a desugared SketchAst into an IrProgram."""
    lw = _Lowerer(ast, table, registry)
    return lw.run()


class _Lowerer:
    def __init__(self, ast, table, registry):
        self.ast = ast
        self.table = table
        self.registry = registry
        self.prog = I.IrProgram(registry=registry, table=table)
        self.max_literal = 0
        self._dispatch_built = set()

    # -- driver ------------------------------------------------------------

    def run(self):
        self._collect_literals()
        self._build_static_init()
        for ci in self.table.classes:
            if ci.is_builtin or ci.is_interface:
                continue
            for mi in ci.methods:
                if mi.is_abstract:
                    continue
                if mi.is_constructor:
                    self._lower_constructor(ci, mi)
                else:
                    self._lower_method(ci, mi)
        self.prog.max_literal = self.max_literal
        return self.prog

    def _collect_literals(self):
        for n in A.walk(self.ast):
            if isinstance(n, A.IntLit):
                self.max_literal = max(self.max_literal, abs(n.value))
            elif isinstance(n, A.CharLit):
                self.max_literal = max(self.max_literal, n.value)
            elif isinstance(n, A.StringLit):
                for ch in n.value:
                    self.max_literal = max(self.max_literal, ord(ch))

    def _build_static_init(self):
        body = []
        for ci in self.table.classes:
            if ci.is_builtin or not isinstance(ci.decl, A.ClassDecl):
                continue
            for f in ci.decl.fields():
                if f.is_static and f.init is not None:
                    env = _Env(self, ci, None, static=True)
                    _, _, tag = self.table.resolve_field(ci.name, f.name)[1], None, None
                    owner, ftag, _ = self.table.resolve_field(ci.name, f.name)
                    expr, _ = env.lower_expr(f.init, expected=ftag)
                    body.append(I.AssignStatic(owner, f.name, expr))
        fn = I.IrFunction(self.prog.static_init, [], body, ret_tag=T.VOID)
        self.prog.functions[fn.name] = fn

    # -- methods -----------------------------------------------------------

    def _lower_method(self, ci, mi):
        decl = mi.decl
        if mi.is_harness:
            if not mi.is_static or mi.params or mi.ret != T.VOID:
                raise HarnessShapeError(
                    f"harness '{ci.name}.{mi.plain_name}' must be static, void "
                    "and parameterless", decl.span)
        env = _Env(self, ci, mi, static=mi.is_static)
        params = ([] if mi.is_static else ["self"]) + [p for p, _ in mi.params]
        body = env.lower_block(decl.body)
        fn = I.IrFunction(mi.mangled, params, body, ret_tag=mi.ret,
                          is_harness=mi.is_harness)
        self.prog.functions[fn.name] = fn
        if mi.is_harness:
            self.prog.harnesses.append(fn.name)
            for name, expr in env.objectives:
                self.prog.objectives.append((name, expr))
        elif env.objectives:
            raise TypeLoweringError(
                "minimize(...) may appear only inside harness bodies", decl.span)

    def _lower_constructor(self, ci, mi):
        env = _Env(self, ci, mi, static=False)
        init_body = []
        sup = ci.superclass
        if sup is not None and sup != stdlib.ROOT_CLASS:
            sup_ci = self.table.info(sup)
            if sup_ci.is_builtin:
                raise TypeLoweringError(
                    f"class '{ci.name}' may not extend builtin '{sup}'", ci.decl.span)
            sup_ctor = self._zero_arg_ctor(sup_ci)
            init_body.append(I.EvalInstr(
                I.Call("init_" + sup_ctor.mangled, [I.LocalRead("self")])))
        init_body.extend(env.lower_block(mi.decl.body))
        init_fn = I.IrFunction("init_" + mi.mangled,
                               ["self"] + [p for p, _ in mi.params], init_body,
                               ret_tag=T.VOID)
        self.prog.functions[init_fn.name] = init_fn
        factory_body = [
            I.AssignLocal("self", I.AllocObj(ci.name)),
            I.EvalInstr(I.Call(init_fn.name,
                               [I.LocalRead("self")] +
                               [I.LocalRead(p) for p, _ in mi.params])),
            I.ReturnInstr(I.LocalRead("self")),
        ]
        factory = I.IrFunction("new_" + mi.mangled, [p for p, _ in mi.params],
                               factory_body, ret_tag=T.obj(ci.name))
        self.prog.functions[factory.name] = factory

    def _zero_arg_ctor(self, ci):
        for m in ci.methods:
            if m.is_constructor and not m.params:
                return m
        raise TypeLoweringError(
            f"class '{ci.name}' needs a zero-argument constructor "
            "(implicit super call)", getattr(ci.decl, "span", None))

    # -- dynamic dispatch --------------------------------------------------

    def dispatch_call(self, plain_sig, recv, args, span):
        """Call through the per-signature dispatch chain; single-implementer
        signatures are inlined to a direct call."""
        arms = self.table.implementations(plain_sig)
        if not arms:
            raise TypeLoweringError(f"no implementation of '{plain_sig[0]}'", span)
        if len(arms) == 1:
            return self._arm_call(arms[0][1], recv, args, span)
        name = "dyn_dispatch_" + "_".join([plain_sig[0], *plain_sig[1]])
        if name not in self._dispatch_built:
            self._dispatch_built.add(name)
            self.prog.functions[name] = make_dyn_dispatch(plain_sig, self.table,
                                                          name=name)
        return I.Call(name, [recv] + args, span=span)

    def _arm_call(self, impl, recv, args, span):
        if impl.is_builtin:
            return I.CallBuiltin(impl.builtin_key, recv, args, span=span)
        return I.Call(impl.mangled, [recv] + args, span=span)


def make_dyn_dispatch(plain_sig, table, name=None):
    """Chain of ``if (self.class_id == C) return impl(self, ...)`` arms in
    ascending class-id order, trapping when no arm matches."""
    arms = table.implementations(plain_sig)
    nparams = len(plain_sig[1])
    params = ["self"] + [f"p{i}" for i in range(nparams)]
    args = [I.LocalRead(p) for p in params[1:]]
    body = []
    for cid, impl in arms:
        if impl.is_builtin:
            call = I.CallBuiltin(impl.builtin_key, I.LocalRead("self"), args)
        else:
            call = I.Call(impl.mangled, [I.LocalRead("self")] + args)
        ret = [I.ReturnInstr(call)]
        body.append(I.IfInstr(
            I.Bin("==", I.ClassIdRead(I.LocalRead("self")), I.Const(cid, T.INT)),
            ret))
    body.append(I.AssertInstr(I.Const(False, T.BOOL)))
    if name is None:
        name = "dyn_dispatch_" + "_".join([plain_sig[0], *plain_sig[1]])
    return I.IrFunction(name, params, body)


def lower_minrepeat(block_instrs, n, registry, repeat_uid):
    """n sequential copies of the template; copy i reads the iteration-i
    instances of the template unknowns.  Used by the interpreter when a
    repeat count is fixed; the IR itself keeps the template."""
    assert n >= 0
    return [(i, block_instrs) for i in range(n)]


# --------------------------------------------------------------------------
# per-function environment


class _Env:
    def __init__(self, lw, ci, mi, static):
        self.lw = lw
        self.table = lw.table
        self.registry = lw.registry
        self.ci = ci
        self.mi = mi
        self.static = static
        self.locals = {}
        self.objectives = []
        if mi is not None and not static:
            self.locals["self"] = T.obj(ci.name)
        if mi is not None:
            for pname, ptag in mi.params:
                self.locals[pname] = ptag

    # -- statements --------------------------------------------------------

    def lower_block(self, block):
        out = []
        for s in block.stmts:
            out.extend(self.lower_stmt(s))
        return out

    def lower_stmt(self, s):
        if isinstance(s, A.Block):
            return self.lower_block(s)
        if isinstance(s, A.LocalDecl):
            tag = self.table.tag_from_typeref(s.type)
            self.locals[s.name] = tag
            if s.init is None:
                return [I.AssignLocal(s.name, I.Const(_default(tag), tag))]
            expr, _ = self.lower_expr(s.init, expected=tag)
            return [I.AssignLocal(s.name, expr)]
        if isinstance(s, A.IfStmt):
            cond, ctag = self.lower_expr(s.cond)
            _require(ctag == T.BOOL, "if condition must be boolean", s.span)
            then = self.lower_stmt(s.then)
            els = self.lower_stmt(s.els) if s.els is not None else []
            return [I.IfInstr(cond, then, els)]
        if isinstance(s, A.WhileStmt):
            cond, ctag = self.lower_expr(s.cond)
            _require(ctag == T.BOOL, "while condition must be boolean", s.span)
            return [I.WhileInstr(cond, self.lower_stmt(s.body))]
        if isinstance(s, A.ReturnStmt):
            if s.value is None:
                return [I.ReturnInstr(None)]
            expr, _ = self.lower_expr(s.value,
                                      expected=self.mi.ret if self.mi else None)
            return [I.ReturnInstr(expr)]
        if isinstance(s, A.AssertStmt):
            cond, ctag = self.lower_expr(s.cond)
            _require(ctag == T.BOOL, "assert condition must be boolean", s.span)
            return [I.AssertInstr(cond, span=s.span)]
        if isinstance(s, A.MinRepeat):
            return [I.RepeatInstr(s.uid, self.lower_block(s.body))]
        if isinstance(s, A.ExprStmt):
            return self.lower_expr_stmt(s.expr)
        raise TypeLoweringError(f"unsupported statement {type(s).__name__}",
                                getattr(s, "span", None))

    def lower_expr_stmt(self, e):
        if isinstance(e, A.Assign):
            return [self.lower_assign(e)]
        if isinstance(e, A.MethodCall) and e.target is None and e.name == "minimize":
            return [self.lower_minimize(e)]
        expr, _ = self.lower_expr(e)
        return [I.EvalInstr(expr)]

    def lower_assign(self, e):
        value_of = lambda tag: self.lower_expr(e.value, expected=tag)[0]
        t = e.target
        if isinstance(t, A.Name):
            if t.ident in self.locals:
                return I.AssignLocal(t.ident, value_of(self.locals[t.ident]))
            owner, tag, is_static = self.table.resolve_field(self.ci.name, t.ident)
            if is_static:
                return I.AssignStatic(owner, t.ident, value_of(tag))
            _require(not self.static, f"instance field '{t.ident}' in static context",
                     t.span)
            return I.AssignField(I.LocalRead("self"), owner, t.ident, value_of(tag))
        if isinstance(t, A.FieldAccess):
            cls = self._class_ref(t.target)
            if cls is not None:
                owner, tag, is_static = self.table.resolve_field(cls, t.name)
                _require(is_static, f"'{cls}.{t.name}' is not a static field", t.span)
                return I.AssignStatic(owner, t.name, value_of(tag))
            recv, rtag = self.lower_expr(t.target)
            _require(rtag.kind == "obj", "field assignment on non-object", t.span)
            owner, tag, is_static = self.table.resolve_field(rtag.cls, t.name)
            if is_static:
                return I.AssignStatic(owner, t.name, value_of(tag))
            return I.AssignField(recv, owner, t.name, value_of(tag))
        raise TypeLoweringError("unsupported assignment target", e.span)

    def lower_minimize(self, e):
        _require(self.mi is not None and self.mi.is_harness,
                 "minimize(...) may appear only inside harness bodies", e.span)
        _require(len(e.args) == 1, "minimize takes exactly one argument", e.span)
        expr, tag = self.lower_expr(e.args[0])
        _require(tag.is_numeric, "minimize objective must be an integer", e.span)
        for n in I.walk_ir(expr):
            if isinstance(n, I.LocalRead):
                raise TypeLoweringError(
                    "minimize objective may not read locals or parameters", e.span)
        name = self.mi.mangled
        if any(n == name for n, _ in self.objectives):
            name = f"{name}_{len(self.objectives) + 1}"
        self.objectives.append((name, expr))
        return I.EvalInstr(I.Const(0, T.INT))

    # -- expressions -------------------------------------------------------

    def lower_expr(self, e, expected=None):
        if isinstance(e, A.IntLit):
            return I.Const(e.value, T.INT), T.INT
        if isinstance(e, A.CharLit):
            return I.Const(e.value, T.CHAR), T.CHAR
        if isinstance(e, A.BoolLit):
            return I.Const(e.value, T.BOOL), T.BOOL
        if isinstance(e, A.StringLit):
            return I.Const(e.value, T.STR), T.STR
        if isinstance(e, A.NullLit):
            return I.Const(None, T.NULL), T.NULL
        if isinstance(e, A.Hole):
            tag = expected if expected in (T.INT, T.BOOL, T.CHAR) else T.INT
            if tag == T.BOOL:
                self.registry.hole_info(e.uid).is_bool = True
            return I.HoleRead(e.uid), tag
        if isinstance(e, A.Choice):
            alts = []
            tag = None
            for alt in e.alternatives:
                ex, t = self.lower_expr(alt, expected=expected if expected else tag)
                if tag is None:
                    tag = t
                else:
                    _require(T.compatible(t, tag) or T.compatible(tag, t),
                             "choice alternatives must share a type", e.span)
                alts.append(ex)
            return I.ChoiceRead(e.uid, alts), tag
        if isinstance(e, A.ThisExpr):
            _require(not self.static, "'this' in static context", e.span)
            return I.LocalRead("self"), T.obj(self.ci.name)
        if isinstance(e, A.Name):
            return self.lower_name(e)
        if isinstance(e, A.FieldAccess):
            return self.lower_field_access(e)
        if isinstance(e, A.MethodCall):
            return self.lower_call(e)
        if isinstance(e, A.NewObject):
            return self.lower_new(e)
        if isinstance(e, A.BinOp):
            return self.lower_binop(e)
        if isinstance(e, A.UnOp):
            op, tag = self.lower_expr(e.operand)
            if e.op == "!":
                _require(tag == T.BOOL, "'!' needs a boolean operand", e.span)
                return I.Un("!", op), T.BOOL
            _require(tag.is_numeric, "unary '-' needs a numeric operand", e.span)
            return I.Un("-", op), T.INT
        if isinstance(e, A.Assign):
            raise TypeLoweringError("assignment is only supported as a statement",
                                    e.span)
        raise TypeLoweringError(f"unsupported expression {type(e).__name__}",
                                getattr(e, "span", None))

    def lower_name(self, e):
        if e.ident in self.locals:
            return I.LocalRead(e.ident), self.locals[e.ident]
        try:
            owner, tag, is_static = self.table.resolve_field(self.ci.name, e.ident)
        except TypeLoweringError:
            if self.table.has_class(e.ident):
                raise TypeLoweringError(
                    f"class name '{e.ident}' cannot be used as a value", e.span)
            raise TypeLoweringError(f"unknown name '{e.ident}'", e.span)
        if is_static:
            return I.StaticRead(owner, e.ident), tag
        _require(not self.static, f"instance field '{e.ident}' in static context",
                 e.span)
        return I.FieldRead(I.LocalRead("self"), owner, e.ident), tag

    def _class_ref(self, target):
        """Class name used as a qualifier, or None."""
        if (isinstance(target, A.Name) and target.ident not in self.locals
                and self.table.has_class(target.ident)):
            try:
                self.table.resolve_field(self.ci.name, target.ident)
            except TypeLoweringError:
                return target.ident
        return None

    def lower_field_access(self, e):
        cls = self._class_ref(e.target)
        if cls is not None:
            owner, tag, is_static = self.table.resolve_field(cls, e.name)
            _require(is_static, f"'{cls}.{e.name}' is not a static field", e.span)
            return I.StaticRead(owner, e.name), tag
        recv, rtag = self.lower_expr(e.target)
        _require(rtag.kind == "obj", "field access on non-object", e.span)
        owner, tag, is_static = self.table.resolve_field(rtag.cls, e.name)
        if is_static:
            return I.StaticRead(owner, e.name), tag
        return I.FieldRead(recv, owner, e.name), tag

    def lower_call(self, e):
        lowered_args = [self.lower_expr(a) for a in e.args]
        args = [x for x, _ in lowered_args]
        arg_tags = [t for _, t in lowered_args]

        if e.target is None:
            _require(e.name != "minimize",
                     "minimize(...) may appear only as a harness statement", e.span)
            if e.name in stdlib.FREE_FUNCTIONS:
                spec = stdlib.FREE_FUNCTIONS[e.name]
                _require(len(args) == len(spec.params),
                         f"'{e.name}' expects {len(spec.params)} argument(s)", e.span)
                return I.CallBuiltin(spec.key, None, args, span=e.span), spec.ret
            mi = self.table.resolve_method(self.ci.name, e.name, arg_tags, e.span)
            if mi.is_static:
                return I.Call(mi.mangled, args, span=e.span), mi.ret
            _require(not self.static,
                     f"instance method '{e.name}' called from static context", e.span)
            call = self.lw.dispatch_call(mi.plain_sig, I.LocalRead("self"), args,
                                         e.span)
            return call, mi.ret

        cls = self._class_ref(e.target)
        if cls is not None:
            mi = self.table.resolve_method(cls, e.name, arg_tags, e.span)
            _require(mi.is_static, f"'{cls}.{e.name}' is not static", e.span)
            return I.Call(mi.mangled, args, span=e.span), mi.ret

        recv, rtag = self.lower_expr(e.target)
        if rtag == T.STR:
            spec = stdlib.STRING_METHODS.get(e.name)
            _require(spec is not None, f"unknown String method '{e.name}'", e.span)
            return I.CallBuiltin(spec.key, recv, args, span=e.span), spec.ret
        _require(rtag.kind == "obj", "method call on non-object", e.span)
        mi = self.table.resolve_method(rtag.cls, e.name, arg_tags, e.span)
        if mi.is_static:
            return I.Call(mi.mangled, args, span=e.span), mi.ret
        call = self.lw.dispatch_call(mi.plain_sig, recv, args, e.span)
        return call, mi.ret

    def lower_new(self, e):
        name = e.type.name
        ci = self.table.info(name)
        if ci.is_builtin:
            key = stdlib.BUILTIN_CTORS.get(name)
            _require(key is not None and ci.constructible,
                     f"builtin '{name}' cannot be instantiated", e.span)
            _require(not e.args, f"'{name}' constructor takes no arguments", e.span)
            return I.CallBuiltin(key, None, [], span=e.span), T.obj(name)
        _require(not ci.is_interface, f"cannot instantiate interface '{name}'", e.span)
        lowered = [self.lower_expr(a) for a in e.args]
        arg_tags = [t for _, t in lowered]
        ctors = [m for m in ci.methods if m.is_constructor
                 and len(m.params) == len(arg_tags)]
        exact = [m for m in ctors if m.arg_tags == arg_tags]
        ok = exact or [m for m in ctors
                       if all(T.compatible(a, p)
                              for a, p in zip(arg_tags, m.arg_tags))]
        _require(bool(ok), f"no matching constructor for '{name}'", e.span)
        mi = ok[0]
        return I.Call("new_" + mi.mangled, [x for x, _ in lowered],
                      span=e.span), T.obj(name)

    def lower_binop(self, e):
        left, ltag = self.lower_expr(e.left)
        right, rtag = self.lower_expr(e.right, expected=ltag)
        op = e.op
        if op in ARITH_OPS:
            _require(ltag.is_numeric and rtag.is_numeric,
                     f"'{op}' needs numeric operands", e.span)
            return I.Bin(op, left, right), T.INT
        if op in REL_OPS:
            _require(ltag.is_numeric and rtag.is_numeric,
                     f"'{op}' needs numeric operands", e.span)
            return I.Bin(op, left, right), T.BOOL
        if op in EQ_OPS:
            okay = ((ltag.is_numeric and rtag.is_numeric)
                    or (ltag == T.BOOL and rtag == T.BOOL)
                    or (ltag.is_object and rtag.is_object)
                    or (ltag == T.STR and rtag == T.STR))
            _require(okay, f"'{op}' on incompatible types {ltag} and {rtag}", e.span)
            return I.Bin(op, left, right), T.BOOL
        if op in LOGIC_OPS:
            _require(ltag == T.BOOL and rtag == T.BOOL,
                     f"'{op}' needs boolean operands", e.span)
            return I.Bin(op, left, right), T.BOOL
        raise TypeLoweringError(f"unknown operator '{op}'", e.span)


def _default(tag):
    if tag.is_numeric:
        return 0
    if tag == T.BOOL:
        return False
    if tag == T.STR:
        return ""
    return None


def _require(cond, message, span):
    if not cond:
        raise TypeLoweringError(message, span)
