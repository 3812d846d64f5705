"""Lexer and recursive-descent parser for benchmark files (.lng)."""
from __future__ import annotations

from dataclasses import dataclass

from .lang import (
    AdtDef,
    AdtType,
    BIGINT,
    BOOL,
    BinaryOp,
    Choose,
    ConstructorApp,
    ConstructorDef,
    CtorPattern,
    Ensuring,
    Expr,
    FieldDef,
    FieldSelect,
    FunctionCall,
    FunDef,
    Hole,
    IfExpr,
    INT,
    Let,
    Literal,
    MatchCase,
    MatchExpr,
    Param,
    Pattern,
    Program,
    TuplePattern,
    TupleExpr,
    TupleSelect,
    TupleType,
    TypeRef,
    TypeVar,
    UnaryOp,
    Variable,
    VarPattern,
    WildcardPattern,
    free_vars,
    pattern_binders,
)


class ParseError(Exception):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


KEYWORDS = {
    "adt", "def", "val", "match", "case", "choose", "require", "ensuring",
    "if", "else", "true", "false",
}

_PUNCT = [
    "???", "=>", "==", "!=", "<=", ">=", "&&", "||",
    "(", ")", "[", "]", "{", "}", ",", ":", ";", "|", "@", ".",
    "=", "<", ">", "+", "-", "*", "/", "%", "!", "_",
]


@dataclass
class Token:
    kind: str  # "ident" | "int" | "punct" | "kw" | "eof"
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(src)
    while i < n:
        c = src[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if src.startswith("//", i):
            while i < n and src[i] != "\n":
                i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(Token("int", src[i:j], line, col))
            col += j - i
            i = j
            continue
        if c.isalpha():
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            text = src[i:j]
            toks.append(Token("kw" if text in KEYWORDS else "ident", text, line, col))
            col += j - i
            i = j
            continue
        if c == "_" and i + 1 < n and (src[i + 1].isalnum() or src[i + 1] == "_"):
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            toks.append(Token("ident", src[i:j], line, col))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if src.startswith(p, i):
                toks.append(Token("punct", p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


class Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.pos = 0
        self._type_params: set[str] = set()
        self._pending_adt_refs: list[tuple[str, int, int]] = []

    # ------------------------------------------------------------ plumbing

    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, text: str) -> bool:
        t = self.peek()
        return t.text == text and t.kind in ("punct", "kw")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        t = self.peek()
        if not self.at(text):
            raise ParseError(f"expected {text!r}, found {t.text!r}", t.line, t.col)
        return self.next()

    def ident(self) -> str:
        t = self.peek()
        if t.kind != "ident":
            raise ParseError(f"expected identifier, found {t.text!r}", t.line, t.col)
        return self.next().text

    def err(self, msg: str) -> ParseError:
        t = self.peek()
        return ParseError(msg, t.line, t.col)

    # ------------------------------------------------------------ program

    def program(self) -> Program:
        adts: list[AdtDef] = []
        funs: list[FunDef] = []
        while self.peek().kind != "eof":
            if self.at("adt"):
                adts.append(self.adt_decl())
            elif self.at("def"):
                funs.append(self.fun_decl())
            else:
                raise self.err("expected 'adt' or 'def'")
        return Program(tuple(adts), tuple(funs))

    def adt_decl(self) -> AdtDef:
        self.expect("adt")
        name = self.ident()
        params: list[str] = []
        if self.accept("["):
            params.append(self.ident())
            while self.accept(","):
                params.append(self.ident())
            self.expect("]")
        self.expect("=")
        self._type_params = set(params)
        ctors = [self.ctor_decl()]
        while self.accept("|"):
            ctors.append(self.ctor_decl())
        self._type_params = set()
        return AdtDef(name, tuple(params), tuple(ctors))

    def ctor_decl(self) -> ConstructorDef:
        name = self.ident()
        self.expect("(")
        fields: list[FieldDef] = []
        if not self.at(")"):
            while True:
                fname = self.ident()
                self.expect(":")
                fields.append(FieldDef(fname, self.type_ref()))
                if not self.accept(","):
                    break
        self.expect(")")
        return ConstructorDef(name, tuple(fields))

    def type_ref(self) -> TypeRef:
        if self.accept("("):
            elems = [self.type_ref()]
            while self.accept(","):
                elems.append(self.type_ref())
            self.expect(")")
            if len(elems) == 1:
                return elems[0]
            return TupleType(tuple(elems))
        t = self.peek()
        name = self.ident()
        if name == "Bool":
            return BOOL
        if name == "Int":
            return INT
        if name == "BigInt":
            return BIGINT
        if name in self._type_params:
            return TypeVar(name)
        args: list[TypeRef] = []
        if self.accept("["):
            args.append(self.type_ref())
            while self.accept(","):
                args.append(self.type_ref())
            self.expect("]")
        self._pending_adt_refs.append((name, t.line, t.col))
        return AdtType(name, tuple(args))

    def fun_decl(self) -> FunDef:
        self.expect("def")
        name = self.ident()
        tparams: list[str] = []
        if self.accept("["):
            tparams.append(self.ident())
            while self.accept(","):
                tparams.append(self.ident())
            self.expect("]")
        saved = self._type_params
        self._type_params = set(tparams)
        self.expect("(")
        params: list[Param] = []
        if not self.at(")"):
            while True:
                pname = self.ident()
                self.expect(":")
                params.append(Param(pname, self.type_ref()))
                if not self.accept(","):
                    break
        self.expect(")")
        self.expect(":")
        rtype = self.type_ref()
        self.expect("=")
        self.expect("{")
        pre = None
        if self.accept("require"):
            self.expect("(")
            pre = self.expr()
            self.expect(")")
            self.accept(";")
        body = self.block_tail()
        self.expect("}")
        post = None
        if self.accept("ensuring"):
            self.expect("{")
            binder = self.ident()
            self.expect("=>")
            post = Ensuring(binder, self.expr())
            self.expect("}")
        self._type_params = saved
        return FunDef(name, tuple(params), rtype, body, pre, post, tuple(tparams))

    def block_tail(self) -> Expr:
        """val-definitions followed by a final expression."""
        if self.at("val"):
            self.next()
            name = self.ident()
            self.expect("=")
            value = self.expr()
            self.accept(";")
            return Let(name, value, self.block_tail())
        e = self.expr()
        self.accept(";")
        return e

    # ------------------------------------------------------------ expressions

    def expr(self) -> Expr:
        e = self.or_expr()
        while self.at("match"):
            self.next()
            self.expect("{")
            cases = []
            while self.at("case"):
                self.next()
                pat = self.pattern()
                self.expect("=>")
                cases.append(MatchCase(pat, self.block_tail()))
            self.expect("}")
            if not cases:
                raise self.err("match with no cases")
            e = MatchExpr(e, tuple(cases))
        return e

    def or_expr(self) -> Expr:
        e = self.and_expr()
        while self.at("||"):
            self.next()
            e = BinaryOp("||", e, self.and_expr())
        return e

    def and_expr(self) -> Expr:
        e = self.cmp_expr()
        while self.at("&&"):
            self.next()
            e = BinaryOp("&&", e, self.cmp_expr())
        return e

    def cmp_expr(self) -> Expr:
        e = self.add_expr()
        t = self.peek()
        if t.kind == "punct" and t.text in ("==", "!=", "<", "<=", ">", ">="):
            self.next()
            rhs = self.add_expr()
            if t.text == "==":
                return BinaryOp("==", e, rhs)
            if t.text == "!=":
                return UnaryOp("!", BinaryOp("==", e, rhs))
            if t.text == "<":
                return BinaryOp("<", e, rhs)
            if t.text == "<=":
                return BinaryOp("<=", e, rhs)
            if t.text == ">":
                return BinaryOp("<", rhs, e)
            return BinaryOp("<=", rhs, e)
        return e

    def add_expr(self) -> Expr:
        e = self.mul_expr()
        while True:
            if self.at("+"):
                self.next()
                e = BinaryOp("+", e, self.mul_expr())
            elif self.at("-"):
                self.next()
                e = BinaryOp("-", e, self.mul_expr())
            else:
                return e

    def mul_expr(self) -> Expr:
        e = self.unary_expr()
        while True:
            if self.at("*"):
                self.next()
                e = BinaryOp("*", e, self.unary_expr())
            elif self.at("/"):
                self.next()
                e = BinaryOp("div", e, self.unary_expr())
            elif self.at("%"):
                self.next()
                e = BinaryOp("mod", e, self.unary_expr())
            else:
                return e

    def unary_expr(self) -> Expr:
        if self.at("!"):
            self.next()
            return UnaryOp("!", self.unary_expr())
        if self.at("-"):
            t = self.next()
            operand = self.unary_expr()
            if isinstance(operand, Literal) and not isinstance(operand.value, bool):
                return Literal(-operand.value, operand.type, pos=(t.line, t.col))
            return UnaryOp("neg", operand)
        return self.postfix_expr()

    def postfix_expr(self) -> Expr:
        e = self.atom()
        while self.at("."):
            self.next()
            name = self.ident()
            if name.startswith("_") and name[1:].isdigit():
                e = TupleSelect(e, int(name[1:]) - 1)
            else:
                e = FieldSelect(e, name)
        return e

    def atom(self) -> Expr:
        t = self.peek()
        if t.kind == "int":
            self.next()
            return Literal(int(t.text), None, pos=(t.line, t.col))
        if self.accept("true"):
            return Literal(True, BOOL, pos=(t.line, t.col))
        if self.accept("false"):
            return Literal(False, BOOL, pos=(t.line, t.col))
        if self.accept("???"):
            return Hole(pos=(t.line, t.col))
        if self.accept("if"):
            self.expect("(")
            cond = self.expr()
            self.expect(")")
            then = self.expr()
            self.expect("else")
            els = self.expr()
            return IfExpr(cond, then, els, pos=(t.line, t.col))
        if self.accept("choose"):
            self.expect("{")
            self.expect("(")
            cvars: list[Param] = []
            while True:
                vname = self.ident()
                self.expect(":")
                cvars.append(Param(vname, self.type_ref()))
                if not self.accept(","):
                    break
            self.expect(")")
            self.expect("=>")
            pred = self.expr()
            self.expect("}")
            return Choose(tuple(cvars), pred, pos=(t.line, t.col))
        if self.accept("{"):
            e = self.block_tail()
            self.expect("}")
            return e
        if self.accept("("):
            elems = [self.expr()]
            while self.accept(","):
                elems.append(self.expr())
            self.expect(")")
            if len(elems) == 1:
                return elems[0]
            return TupleExpr(tuple(elems), pos=(t.line, t.col))
        if t.kind == "ident":
            name = self.ident()
            if self.at("("):
                self.next()
                args: list[Expr] = []
                if not self.at(")"):
                    args.append(self.expr())
                    while self.accept(","):
                        args.append(self.expr())
                self.expect(")")
                if name == "BigInt":
                    if len(args) != 1 or not isinstance(args[0], Literal):
                        raise ParseError("BigInt(...) takes one integer literal", t.line, t.col)
                    return Literal(args[0].value, BIGINT, pos=(t.line, t.col))
                return FunctionCall(name, tuple(args), pos=(t.line, t.col))
            return Variable(name, pos=(t.line, t.col))
        raise self.err(f"unexpected token {t.text!r}")

    # ------------------------------------------------------------ patterns

    def pattern(self) -> Pattern:
        t = self.peek()
        if self.accept("_"):
            return WildcardPattern()
        if self.accept("("):
            elems = [self.pattern()]
            while self.accept(","):
                elems.append(self.pattern())
            self.expect(")")
            if len(elems) == 1:
                raise ParseError("tuple pattern needs at least two elements", t.line, t.col)
            return TuplePattern(tuple(elems))
        name = self.ident()
        if self.accept("@"):
            inner = self.pattern()
            if isinstance(inner, TuplePattern):
                return TuplePattern(inner.elems, name)
            if isinstance(inner, CtorPattern):
                return CtorPattern(inner.ctor, inner.args, name)
            raise ParseError("binder must be attached to a tuple or constructor pattern", t.line, t.col)
        if self.at("("):
            self.next()
            args: list[Pattern] = []
            if not self.at(")"):
                args.append(self.pattern())
                while self.accept(","):
                    args.append(self.pattern())
            self.expect(")")
            return CtorPattern(name, tuple(args))
        return VarPattern(name)


# ---------------------------------------------------------------- resolution

def _resolve_calls(e: Expr, ctors: set[str], funs: set[str]) -> Expr:
    """Rewrite FunctionCall nodes that actually name constructors."""
    from .lang import IsConstructor, Unsolved

    def go(e: Expr) -> Expr:
        if isinstance(e, FunctionCall):
            args = tuple(go(a) for a in e.args)
            if e.name in ctors:
                return ConstructorApp(e.name, args, None, pos=e.pos)
            if e.name not in funs:
                raise ParseError(f"unresolved name {e.name!r}", *(e.pos or (0, 0)))
            return FunctionCall(e.name, args, pos=e.pos)
        if isinstance(e, (Literal, Variable, Hole, Unsolved)):
            return e
        if isinstance(e, BinaryOp):
            return BinaryOp(e.op, go(e.lhs), go(e.rhs), pos=e.pos)
        if isinstance(e, UnaryOp):
            return UnaryOp(e.op, go(e.operand), pos=e.pos)
        if isinstance(e, IfExpr):
            return IfExpr(go(e.cond), go(e.then), go(e.els), pos=e.pos)
        if isinstance(e, Let):
            return Let(e.name, go(e.value), go(e.body), pos=e.pos)
        if isinstance(e, MatchExpr):
            return MatchExpr(
                go(e.scrutinee),
                tuple(MatchCase(c.pattern, go(c.body)) for c in e.cases),
                pos=e.pos,
            )
        if isinstance(e, ConstructorApp):
            return ConstructorApp(e.ctor, tuple(go(a) for a in e.args), e.type_args, pos=e.pos)
        if isinstance(e, TupleExpr):
            return TupleExpr(tuple(go(x) for x in e.elems), pos=e.pos)
        if isinstance(e, TupleSelect):
            return TupleSelect(go(e.base), e.index, pos=e.pos)
        if isinstance(e, FieldSelect):
            return FieldSelect(go(e.base), e.field, pos=e.pos)
        if isinstance(e, Choose):
            return Choose(e.vars, go(e.pred), pos=e.pos)
        if isinstance(e, IsConstructor):
            return IsConstructor(go(e.expr), e.ctor, pos=e.pos)
        raise TypeError(e)

    return go(e)


def _check_scope(f: FunDef) -> None:
    bound = {p.name for p in f.params}
    from .lang import Choose as _Choose

    def visit(e: Expr, env: frozenset[str]) -> None:
        if isinstance(e, Variable):
            if e.name not in env:
                raise ParseError(f"unresolved name {e.name!r}", *(e.pos or (0, 0)))
            return
        if isinstance(e, Let):
            visit(e.value, env)
            visit(e.body, env | {e.name})
            return
        if isinstance(e, MatchExpr):
            visit(e.scrutinee, env)
            for c in e.cases:
                visit(c.body, env | pattern_binders(c.pattern))
            return
        if isinstance(e, _Choose):
            visit(e.pred, env | {v.name for v in e.vars})
            return
        for name in ("lhs", "rhs", "operand", "cond", "then", "els", "base", "expr", "pred"):
            child = getattr(e, name, None)
            if isinstance(child, Expr):
                visit(child, env)
        for name in ("args", "elems"):
            children = getattr(e, name, None)
            if isinstance(children, tuple):
                for c in children:
                    if isinstance(c, Expr):
                        visit(c, env)

    visit(f.body, frozenset(bound))
    if f.precondition is not None:
        visit(f.precondition, frozenset(bound))
    if f.postcondition is not None:
        visit(f.postcondition.pred, frozenset(bound | {f.postcondition.binder}))


def parse_program(src: str) -> Program:
    """Parse a benchmark file into a Program; raises ParseError on bad input."""
    parser = Parser(src)
    prog = parser.program()
    seen_adts = set(prog.adts_by_name)
    for name, line, col in parser._pending_adt_refs:
        if name not in seen_adts:
            raise ParseError(f"unknown type {name!r}", line, col)
    ctors = set(prog.ctor_to_adt)
    funs = set(prog.functions_by_name)
    dup = len(prog.adts) != len(prog.adts_by_name) or len(prog.functions) != len(funs)
    if dup or len(ctors) != sum(len(a.constructors) for a in prog.adts):
        raise ParseError("duplicate declaration", 1, 1)
    resolved = []
    for f in prog.functions:
        body = _resolve_calls(f.body, ctors, funs)
        pre = _resolve_calls(f.precondition, ctors, funs) if f.precondition is not None else None
        post = (
            Ensuring(f.postcondition.binder, _resolve_calls(f.postcondition.pred, ctors, funs))
            if f.postcondition is not None
            else None
        )
        g = FunDef(f.name, f.params, f.return_type, body, pre, post, f.type_params)
        _check_scope(g)
        resolved.append(g)
    return Program(prog.adts, tuple(resolved))


def parse_expr(src: str) -> Expr:
    """Parse a single expression (no name resolution); test helper."""
    parser = Parser(src)
    e = parser.expr()
    t = parser.peek()
    if t.kind != "eof":
        raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
    return e
