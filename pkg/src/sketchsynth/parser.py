"""Recursive-descent parser producing a SketchAst.

Grammar is the Java-like subset appearing in the tool's documentation:
classes, interfaces, inner/anonymous classes, fields, methods, constructors,
and the sketch constructs ``??``, ``{| e, e |}`` and ``minrepeat { ... }``.
Operator precedence follows the conventional C-family table.
"""

from __future__ import annotations

from pathlib import Path

from . import ast_nodes as A
from .ast_nodes import SourceSpan
from .errors import DuplicateTypeError, ParseError
from .lexer import Token, tokenize

MODIFIER_KINDS = {
    "public", "private", "protected", "static", "final", "abstract",
    "harness", "generator",
}

TYPE_START = {"int", "boolean", "char", "void"}


class _Parser:
    def __init__(self, tokens, file_id="<input>"):
        self.toks = list(tokens)
        self.pos = 0
        self.file_id = str(file_id)
        self._eof_span = (
            self.toks[-1].span if self.toks else SourceSpan(self.file_id, 1, 1, 0)
        )

    # -- token plumbing ----------------------------------------------------

    def peek(self, offset=0):
        i = self.pos + offset
        if i < len(self.toks):
            return self.toks[i]
        return Token("EOF", "", self._eof_span)

    def at(self, *kinds):
        return self.peek().kind in kinds

    def next(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(tok.span, repr(kind), repr(tok.text or tok.kind))
        return self.next()

    def error(self, expected):
        tok = self.peek()
        raise ParseError(tok.span, expected, repr(tok.text or tok.kind))

    # -- declarations ------------------------------------------------------

    def parse_unit(self):
        types = []
        while not self.at("EOF"):
            types.append(self.parse_type_decl())
        return A.CompilationUnit(file=self.file_id, types=types)

    def parse_type_decl(self):
        mods = self.parse_modifiers()
        if self.at("class"):
            return self.parse_class(mods, is_interface=False)
        if self.at("interface"):
            return self.parse_class(mods, is_interface=True)
        self.error("'class' or 'interface'")

    def parse_modifiers(self):
        mods = []
        while self.peek().kind in MODIFIER_KINDS:
            mods.append(self.next().kind)
        return mods

    def parse_class(self, mods, is_interface):
        kw = self.next()  # class | interface
        name = self.expect("IDENT")
        superclass = None
        interfaces = []
        if self.at("extends"):
            self.next()
            if is_interface:
                interfaces.append(self.parse_type_ref())
                while self.at(","):
                    self.next()
                    interfaces.append(self.parse_type_ref())
            else:
                superclass = self.parse_type_ref()
        if self.at("implements"):
            self.next()
            interfaces.append(self.parse_type_ref())
            while self.at(","):
                self.next()
                interfaces.append(self.parse_type_ref())
        members = self.parse_class_body(name.text)
        return A.ClassDecl(
            name=name.text,
            is_interface=is_interface,
            is_generator="generator" in mods,
            superclass=superclass,
            interfaces=interfaces,
            members=members,
            modifiers=mods,
            span=kw.span,
        )

    def parse_class_body(self, class_name):
        self.expect("{")
        members = []
        while not self.at("}"):
            members.append(self.parse_member(class_name))
        self.expect("}")
        return members

    def parse_member(self, class_name):
        mods = self.parse_modifiers()
        if self.at("class"):
            return self.parse_class(mods, is_interface=False)
        if self.at("interface"):
            return self.parse_class(mods, is_interface=True)
        # constructor: ClassName '('
        if self.at("IDENT") and self.peek().text == class_name and self.peek(1).kind == "(":
            name = self.next()
            params = self.parse_params()
            body = self.parse_block()
            return A.MethodDecl(
                name=name.text,
                return_type=None,
                params=params,
                body=body,
                is_constructor=True,
                modifiers=mods,
                span=name.span,
            )
        rtype = self.parse_type_ref(allow_void=True)
        name = self.expect("IDENT")
        if self.at("("):
            params = self.parse_params()
            if self.at(";"):
                self.next()
                body = None  # abstract / interface method
            else:
                body = self.parse_block()
            return A.MethodDecl(
                name=name.text,
                return_type=rtype,
                params=params,
                body=body,
                is_static="static" in mods,
                is_harness="harness" in mods,
                modifiers=mods,
                span=name.span,
            )
        init = None
        if self.at("="):
            self.next()
            init = self.parse_expr()
        self.expect(";")
        return A.FieldDecl(
            type=rtype,
            name=name.text,
            init=init,
            is_static="static" in mods,
            modifiers=mods,
            span=name.span,
        )

    def parse_params(self):
        self.expect("(")
        params = []
        while not self.at(")"):
            if params:
                self.expect(",")
            ptype = self.parse_type_ref()
            pname = self.expect("IDENT")
            params.append(A.Param(type=ptype, name=pname.text, span=pname.span))
        self.expect(")")
        return params

    def parse_type_ref(self, allow_void=False):
        tok = self.peek()
        if tok.kind in TYPE_START:
            if tok.kind == "void" and not allow_void:
                self.error("a type")
            self.next()
            return A.TypeRef(tok.kind, span=tok.span)
        if tok.kind == "IDENT":
            self.next()
            args = []
            if self.at("<"):
                self.next()
                args.append(self.parse_type_ref())
                while self.at(","):
                    self.next()
                    args.append(self.parse_type_ref())
                self.expect(">")
            return A.TypeRef(tok.text, args, span=tok.span)
        self.error("a type")

    # -- statements --------------------------------------------------------

    def parse_block(self):
        lbrace = self.expect("{")
        stmts = []
        while not self.at("}"):
            stmts.append(self.parse_stmt())
        self.expect("}")
        return A.Block(stmts=stmts, span=lbrace.span)

    def parse_stmt(self):
        tok = self.peek()
        if tok.kind == "{":
            return self.parse_block()
        if tok.kind == "if":
            self.next()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            then = self.parse_stmt()
            els = None
            if self.at("else"):
                self.next()
                els = self.parse_stmt()
            return A.IfStmt(cond=cond, then=then, els=els, span=tok.span)
        if tok.kind == "while":
            self.next()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            body = self.parse_stmt()
            return A.WhileStmt(cond=cond, body=body, span=tok.span)
        if tok.kind == "return":
            self.next()
            value = None
            if not self.at(";"):
                value = self.parse_expr()
            self.expect(";")
            return A.ReturnStmt(value=value, span=tok.span)
        if tok.kind == "assert":
            self.next()
            cond = self.parse_expr()
            self.expect(";")
            return A.AssertStmt(cond=cond, span=tok.span)
        if tok.kind == "minrepeat":
            self.next()
            body = self.parse_block()
            return A.MinRepeat(body=body, span=tok.span)
        if self.looks_like_local_decl():
            vtype = self.parse_type_ref()
            name = self.expect("IDENT")
            init = None
            if self.at("="):
                self.next()
                init = self.parse_expr()
            self.expect(";")
            return A.LocalDecl(type=vtype, name=name.text, init=init, span=name.span)
        expr = self.parse_expr()
        self.expect(";")
        return A.ExprStmt(expr=expr, span=tok.span)

    def looks_like_local_decl(self):
        if self.peek().kind in TYPE_START:
            return True
        if self.peek().kind != "IDENT":
            return False
        # IDENT IDENT          e.g. "Monitor m"
        if self.peek(1).kind == "IDENT":
            return True
        # IDENT '<' IDENT (',' IDENT)* '>' IDENT    e.g. "Iterator<Token> it"
        if self.peek(1).kind == "<":
            i = 2
            while True:
                if self.peek(i).kind != "IDENT":
                    return False
                i += 1
                if self.peek(i).kind == ",":
                    i += 1
                    continue
                break
            return self.peek(i).kind == ">" and self.peek(i + 1).kind == "IDENT"
        return False

    # -- expressions -------------------------------------------------------

    def parse_expr(self):
        return self.parse_assign()

    def parse_assign(self):
        lhs = self.parse_or()
        if self.at("="):
            eq = self.next()
            if not isinstance(lhs, (A.Name, A.FieldAccess)):
                raise ParseError(eq.span, "assignable target", repr("="))
            value = self.parse_assign()
            return A.Assign(target=lhs, value=value, span=eq.span)
        return lhs

    def _binop_level(self, ops, sub):
        left = sub()
        while self.peek().kind in ops:
            op = self.next()
            right = sub()
            left = A.BinOp(op=op.kind, left=left, right=right, span=op.span)
        return left

    def parse_or(self):
        return self._binop_level({"||"}, self.parse_and)

    def parse_and(self):
        return self._binop_level({"&&"}, self.parse_eq)

    def parse_eq(self):
        return self._binop_level({"==", "!="}, self.parse_rel)

    def parse_rel(self):
        return self._binop_level({"<", "<=", ">", ">="}, self.parse_add)

    def parse_add(self):
        return self._binop_level({"+", "-"}, self.parse_mul)

    def parse_mul(self):
        return self._binop_level({"*", "/", "%"}, self.parse_unary)

    def parse_unary(self):
        tok = self.peek()
        if tok.kind in ("!", "-"):
            self.next()
            return A.UnOp(op=tok.kind, operand=self.parse_unary(), span=tok.span)
        return self.parse_postfix()

    def parse_postfix(self):
        expr = self.parse_primary()
        while self.at("."):
            dot = self.next()
            name = self.expect("IDENT")
            if self.at("("):
                args = self.parse_args()
                expr = A.MethodCall(target=expr, name=name.text, args=args, span=dot.span)
            else:
                expr = A.FieldAccess(target=expr, name=name.text, span=dot.span)
        return expr

    def parse_args(self):
        self.expect("(")
        args = []
        while not self.at(")"):
            if args:
                self.expect(",")
            args.append(self.parse_expr())
        self.expect(")")
        return args

    def parse_primary(self):
        tok = self.peek()
        if tok.kind == "INT":
            self.next()
            return A.IntLit(value=int(tok.text), span=tok.span)
        if tok.kind == "STRING":
            self.next()
            return A.StringLit(value=tok.text, span=tok.span)
        if tok.kind == "CHAR":
            self.next()
            return A.CharLit(value=ord(tok.text), span=tok.span)
        if tok.kind in ("true", "false"):
            self.next()
            return A.BoolLit(value=tok.kind == "true", span=tok.span)
        if tok.kind == "null":
            self.next()
            return A.NullLit(span=tok.span)
        if tok.kind == "this":
            self.next()
            return A.ThisExpr(span=tok.span)
        if tok.kind == "??":
            self.next()
            return A.Hole(span=tok.span)
        if tok.kind == "{|":
            self.next()
            alts = [self.parse_expr()]
            while self.at(","):
                self.next()
                alts.append(self.parse_expr())
            self.expect("|}")
            return A.Choice(alternatives=alts, span=tok.span)
        if tok.kind == "new":
            self.next()
            tref = self.parse_type_ref()
            args = self.parse_args()
            anon = None
            if self.at("{"):
                self.next()
                anon = []
                while not self.at("}"):
                    anon.append(self.parse_member(tref.name))
                self.expect("}")
            return A.NewObject(type=tref, args=args, anon_members=anon, span=tok.span)
        if tok.kind == "(":
            self.next()
            expr = self.parse_expr()
            self.expect(")")
            return expr
        if tok.kind == "IDENT":
            self.next()
            if self.at("("):
                args = self.parse_args()
                return A.MethodCall(target=None, name=tok.text, args=args, span=tok.span)
            return A.Name(ident=tok.text, span=tok.span)
        self.error("an expression")


def parse_unit(tokens, file_id="<input>"):
    """Parse one token stream into a CompilationUnit."""
    return _Parser(tokens, file_id).parse_unit()


def parse_source(text, file_id="<input>"):
    return parse_unit(tokenize(text, file_id), file_id)


def parse_program(files):
    """Parse and merge ≥1 source files, rejecting duplicate type names."""
    if not files:
        raise ValueError("at least one input file is required")
    units = []
    for f in files:
        path = Path(f)
        text = path.read_text(encoding="utf-8")
        units.append(parse_source(text, path))
    ast = A.SketchAst(units=units)
    seen = {}
    for unit in ast.units:
        for decl in unit.types:
            if decl.name in seen:
                raise DuplicateTypeError(decl.name, seen[decl.name], decl.span)
            seen[decl.name] = decl.span
    return ast


def parse_program_texts(named_texts):
    """Like parse_program but over (name, text) pairs; used by tests."""
    units = [parse_source(text, name) for name, text in named_texts]
    ast = A.SketchAst(units=units)
    seen = {}
    for unit in ast.units:
        for decl in unit.types:
            if decl.name in seen:
                raise DuplicateTypeError(decl.name, seen[decl.name], decl.span)
            seen[decl.name] = decl.span
    return ast
