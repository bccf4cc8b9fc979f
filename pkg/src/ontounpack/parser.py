"""Textual frontend: lexer, recursive-descent parser, and DSL renderer.

Parsing is total: `parse_text` always returns either a resolved Model or a
non-empty list of ParseErrors, never raises on malformed input. On a syntax
error inside a declaration the parser records the error and resynchronizes at
the next declaration keyword, so several errors are reported in one pass.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .core import (
    Classifier,
    Derivation,
    Direction,
    GeneralizationSet,
    Model,
    Multiplicity,
    QualitySpace,
    RelationDecl,
    RelationStereotype,
    SourceSpan,
    Stereotype,
    ViaQuality,
)

CLASSIFIER_KEYWORDS = {s.value: s for s in Stereotype}
RELATION_KEYWORDS = {s.value: s for s in RelationStereotype}
DECL_KEYWORDS = set(CLASSIFIER_KEYWORDS) | set(RELATION_KEYWORDS) | {"genset", "space"}
KEYWORDS = DECL_KEYWORDS | {
    "model", "specializes", "ordered", "nominal",
    "general", "specifics", "disjoint", "complete",
    "derivedFrom", "via", "asc", "desc",
}


@dataclass(frozen=True)
class ParseError:
    span: SourceSpan
    message: str
    expected: tuple[str, ...] = ()

    def __str__(self) -> str:
        hint = f" (expected {', '.join(self.expected)})" if self.expected else ""
        return f"{self.span.line}:{self.span.column}: {self.message}{hint}"

    def to_dict(self) -> dict:
        return {
            "span": self.span.to_dict(),
            "message": self.message,
            "expected": list(self.expected),
        }


@dataclass(frozen=True)
class _Token:
    kind: str  # IDENT INT KEYWORD PUNCT EOF
    text: str
    line: int
    column: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.line, self.column, max(len(self.text), 1))


_SCANNER = re.compile(
    r"""(?P<ws>[ \t\r]+)
      | (?P<comment>\#[^\n]*)
      | (?P<nl>\n)
      | (?P<int>\d+)
      | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
      | (?P<dotdot>\.\.)
      | (?P<dashdash>--)
      | (?P<punct>[:,\[\]{}*=])
    """,
    re.VERBOSE,
)


def _lex(text: str) -> tuple[list[_Token], list[ParseError]]:
    tokens: list[_Token] = []
    errors: list[ParseError] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _SCANNER.match(text, pos)
        if m is None:
            ch = text[pos]
            errors.append(ParseError(SourceSpan(line, col, 1), f"illegal character {ch!r}"))
            pos += 1
            col += 1
            continue
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(lexeme)
        else:
            if kind == "ident":
                tk = "KEYWORD" if lexeme in KEYWORDS else "IDENT"
            elif kind == "int":
                tk = "INT"
            else:
                tk = "PUNCT"
            tokens.append(_Token(tk, lexeme, line, col))
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Token("EOF", "", line, col))
    return tokens, errors


class _Unexpected(Exception):
    def __init__(self, error: ParseError):
        self.error = error


# Raw declarations collected by the syntax pass; resolution happens afterwards
# so forward references work and structural errors come with proper spans.

@dataclass
class _RawClassifier:
    stereotype: Stereotype
    name: str
    parents: list[tuple[str, SourceSpan]]
    span: SourceSpan


@dataclass
class _RawRelation:
    stereotype: RelationStereotype
    name: str
    source: tuple[str, SourceSpan]
    target: tuple[str, SourceSpan]
    source_mult: Multiplicity | None
    target_mult: Multiplicity | None
    derived: tuple[str, SourceSpan, Multiplicity | None] | None
    via: tuple[str, SourceSpan, Direction] | None
    span: SourceSpan


@dataclass
class _RawGenset:
    name: str
    general: tuple[str, SourceSpan]
    specifics: list[tuple[str, SourceSpan]]
    disjoint: bool
    complete: bool
    span: SourceSpan


@dataclass
class _RawSpace:
    owner: str
    ordered: tuple[int, int] | None
    labels: tuple[str, ...] | None
    span: SourceSpan


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0
        self.errors: list[ParseError] = []
        self.model_name: str | None = None
        self.classifiers: list[_RawClassifier] = []
        self.relations: list[_RawRelation] = []
        self.gensets: list[_RawGenset] = []
        self.spaces: list[_RawSpace] = []

    # -- token helpers ---------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def fail(self, tok: _Token, message: str, expected: tuple[str, ...] = ()):
        raise _Unexpected(ParseError(tok.span, message, expected))

    def expect_keyword(self, word: str) -> _Token:
        tok = self.peek()
        if tok.kind == "KEYWORD" and tok.text == word:
            return self.advance()
        self.fail(tok, f"found {self._show(tok)}", expected=(f"'{word}'",))

    def expect_punct(self, text: str) -> _Token:
        tok = self.peek()
        if tok.kind == "PUNCT" and tok.text == text:
            return self.advance()
        self.fail(tok, f"found {self._show(tok)}", expected=(f"'{text}'",))

    def expect_ident(self, what: str = "identifier") -> _Token:
        tok = self.peek()
        if tok.kind == "IDENT":
            return self.advance()
        if tok.kind == "KEYWORD":
            self.fail(tok, f"'{tok.text}' is a reserved word", expected=(what,))
        self.fail(tok, f"found {self._show(tok)}", expected=(what,))

    def expect_int(self) -> tuple[int, _Token]:
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            return int(tok.text), tok
        self.fail(tok, f"found {self._show(tok)}", expected=("integer",))

    def at_punct(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "PUNCT" and tok.text == text

    def at_keyword(self, *words: str) -> bool:
        tok = self.peek()
        return tok.kind == "KEYWORD" and tok.text in words

    @staticmethod
    def _show(tok: _Token) -> str:
        return "end of input" if tok.kind == "EOF" else f"'{tok.text}'"

    def sync(self):
        """Skip to the next declaration keyword (or EOF)."""
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                return
            if tok.kind == "KEYWORD" and tok.text in DECL_KEYWORDS:
                return
            self.advance()

    # -- grammar ----------------------------------------------------------

    def parse(self):
        try:
            self.expect_keyword("model")
            self.model_name = self.expect_ident("model name").text
        except _Unexpected as exc:
            self.errors.append(exc.error)
            self.sync()
        while self.peek().kind != "EOF":
            tok = self.peek()
            if tok.kind != "KEYWORD" or tok.text not in DECL_KEYWORDS:
                self.errors.append(ParseError(
                    tok.span,
                    f"found {self._show(tok)}",
                    expected=("declaration keyword",),
                ))
                self.advance()
                self.sync()
                continue
            try:
                if tok.text in CLASSIFIER_KEYWORDS:
                    self.classifier_decl()
                elif tok.text in RELATION_KEYWORDS:
                    self.relation_decl()
                elif tok.text == "genset":
                    self.genset_decl()
                else:
                    self.space_decl()
            except _Unexpected as exc:
                self.errors.append(exc.error)
                self.sync()

    def classifier_decl(self):
        kw = self.advance()
        stereo = CLASSIFIER_KEYWORDS[kw.text]
        name_tok = self.expect_ident("classifier name")
        parents: list[tuple[str, SourceSpan]] = []
        if self.at_keyword("specializes"):
            self.advance()
            while True:
                p = self.expect_ident("parent classifier name")
                parents.append((p.text, p.span))
                if self.at_punct(","):
                    self.advance()
                    continue
                break
        self.classifiers.append(_RawClassifier(stereo, name_tok.text, parents, name_tok.span))

    def card(self) -> Multiplicity:
        open_tok = self.expect_punct("[")
        lo, lo_tok = self.expect_int()
        dd = self.peek()
        if not (dd.kind == "PUNCT" and dd.text == ".."):
            self.fail(dd, f"found {self._show(dd)}", expected=("'..'",))
        self.advance()
        tok = self.peek()
        if tok.kind == "INT":
            self.advance()
            hi: int | None = int(tok.text)
        elif tok.kind == "PUNCT" and tok.text == "*":
            self.advance()
            hi = None
        else:
            self.fail(tok, f"found {self._show(tok)}", expected=("integer", "'*'"))
        self.expect_punct("]")
        try:
            return Multiplicity(lo, hi)
        except ValueError as exc:
            raise _Unexpected(ParseError(
                SourceSpan(open_tok.line, open_tok.column, 1), str(exc),
            )) from exc

    def relation_decl(self):
        kw = self.advance()
        stereo = RELATION_KEYWORDS[kw.text]
        name_tok = self.expect_ident("relation name")
        self.expect_punct(":")
        src = self.expect_ident("source classifier")
        src_mult = self.card() if self.at_punct("[") else None
        dd = self.peek()
        if not (dd.kind == "PUNCT" and dd.text == "--"):
            self.fail(dd, f"found {self._show(dd)}", expected=("'--'",))
        self.advance()
        tgt_mult = self.card() if self.at_punct("[") else None
        tgt = self.expect_ident("target classifier")
        derived = None
        if self.at_keyword("derivedFrom"):
            self.advance()
            rel_tok = self.expect_ident("relator name")
            dmult = self.card() if self.at_punct("[") else None
            derived = (rel_tok.text, rel_tok.span, dmult)
        via = None
        if self.at_keyword("via"):
            self.advance()
            q_tok = self.expect_ident("quality name")
            dir_tok = self.peek()
            if dir_tok.kind == "KEYWORD" and dir_tok.text in ("asc", "desc"):
                self.advance()
                direction = Direction(dir_tok.text)
            else:
                self.fail(dir_tok, f"found {self._show(dir_tok)}", expected=("'asc'", "'desc'"))
            via = (q_tok.text, q_tok.span, direction)
        self.relations.append(_RawRelation(
            stereo, name_tok.text, (src.text, src.span), (tgt.text, tgt.span),
            src_mult, tgt_mult, derived, via, name_tok.span,
        ))

    def genset_decl(self):
        self.advance()
        name_tok = self.expect_ident("generalization set name")
        disjoint = complete = False
        while self.at_keyword("disjoint", "complete"):
            tok = self.advance()
            if tok.text == "disjoint":
                disjoint = True
            else:
                complete = True
        self.expect_keyword("general")
        gen = self.expect_ident("general classifier")
        self.expect_keyword("specifics")
        specifics: list[tuple[str, SourceSpan]] = []
        while True:
            s = self.expect_ident("specific classifier")
            specifics.append((s.text, s.span))
            if self.at_punct(","):
                self.advance()
                continue
            break
        self.gensets.append(_RawGenset(
            name_tok.text, (gen.text, gen.span), specifics, disjoint, complete, name_tok.span,
        ))

    def space_decl(self):
        self.advance()
        owner = self.expect_ident("quality name")
        if self.at_keyword("ordered"):
            self.advance()
            lo, lo_tok = self.expect_int()
            dd = self.peek()
            if not (dd.kind == "PUNCT" and dd.text == ".."):
                self.fail(dd, f"found {self._show(dd)}", expected=("'..'",))
            self.advance()
            hi, hi_tok = self.expect_int()
            if lo > hi:
                raise _Unexpected(ParseError(
                    hi_tok.span, f"ordered space upper bound {hi} is below lower bound {lo}",
                ))
            self.spaces.append(_RawSpace(owner.text, (lo, hi), None, owner.span))
            return
        if self.at_keyword("nominal"):
            self.advance()
            self.expect_punct("{")
            labels: list[str] = []
            while True:
                lab = self.expect_ident("label")
                labels.append(lab.text)
                if self.at_punct(","):
                    self.advance()
                    continue
                break
            self.expect_punct("}")
            if len(set(labels)) != len(labels):
                raise _Unexpected(ParseError(owner.span, "nominal labels must be distinct"))
            self.spaces.append(_RawSpace(owner.text, None, tuple(labels), owner.span))
            return
        tok = self.peek()
        self.fail(tok, f"found {self._show(tok)}", expected=("'ordered'", "'nominal'"))


def _resolve(p: _Parser) -> Model | list[ParseError]:
    """Second pass: name resolution plus the structural declaration invariants."""
    errors = list(p.errors)

    names: dict[str, SourceSpan] = {}
    for rc in p.classifiers:
        if rc.name in names:
            errors.append(ParseError(rc.span, f"duplicate classifier name '{rc.name}'"))
        else:
            names[rc.name] = rc.span

    def known(ref: tuple[str, SourceSpan], what: str) -> bool:
        name, span = ref
        if name not in names:
            errors.append(ParseError(span, f"unknown {what} '{name}'"))
            return False
        return True

    classifiers: dict[str, Classifier] = {}
    for rc in p.classifiers:
        if names.get(rc.name) is not rc.span:
            continue
        parents = tuple(pr[0] for pr in rc.parents if known(pr, "classifier"))
        classifiers[rc.name] = Classifier(rc.name, rc.stereotype, parents, span=rc.span)

    # specialization cycles make every taxonomy query meaningless: reject here
    state: dict[str, int] = {}

    def cyclic(name: str) -> bool:
        if state.get(name) == 2:
            return False
        if state.get(name) == 1:
            return True
        state[name] = 1
        hit = any(cyclic(par) for par in classifiers[name].parents if par in classifiers)
        state[name] = 2
        return hit

    for name in sorted(classifiers):
        if state.get(name) is None and cyclic(name):
            errors.append(ParseError(
                classifiers[name].span, f"specialization cycle through '{name}'",
            ))
            break

    def stereo(name: str) -> Stereotype | None:
        cls = classifiers.get(name)
        return cls.stereotype if cls else None

    relations: dict[str, RelationDecl] = {}
    for rr in p.relations:
        if rr.name in relations:
            errors.append(ParseError(rr.span, f"duplicate relation name '{rr.name}'"))
            continue
        if rr.name in names:
            errors.append(ParseError(rr.span, f"relation '{rr.name}' collides with a classifier"))
            continue
        ok = known(rr.source, "classifier") & known(rr.target, "classifier")

        is_comparative = rr.stereotype is RelationStereotype.COMPARATIVE
        if is_comparative:
            if rr.source_mult is not None or rr.target_mult is not None:
                errors.append(ParseError(
                    rr.span, "comparative relations carry no multiplicities",
                ))
                ok = False
            if rr.via is None:
                errors.append(ParseError(
                    rr.span, f"comparative '{rr.name}' needs a grounding ('via Quality asc|desc')",
                ))
                ok = False
        else:
            if rr.source_mult is None or rr.target_mult is None:
                errors.append(ParseError(
                    rr.span, f"relation '{rr.name}' needs multiplicities on both ends",
                ))
                ok = False
            if rr.via is not None:
                errors.append(ParseError(
                    rr.span, "only comparative relations take a 'via' grounding",
                ))
                ok = False

        if rr.derived is not None and rr.stereotype is not RelationStereotype.MATERIAL:
            errors.append(ParseError(
                rr.span, "only material relations take 'derivedFrom'",
            ))
            ok = False

        if rr.stereotype is RelationStereotype.MEDIATION and ok:
            if stereo(rr.source[0]) is not Stereotype.RELATOR:
                errors.append(ParseError(
                    rr.source[1], f"mediation source '{rr.source[0]}' must be a relator",
                ))
                ok = False
        if rr.stereotype is RelationStereotype.CHARACTERIZATION and ok:
            if stereo(rr.source[0]) not in (Stereotype.MODE, Stereotype.QUALITY):
                errors.append(ParseError(
                    rr.source[1],
                    f"characterization source '{rr.source[0]}' must be a mode or quality",
                ))
                ok = False
        if rr.stereotype is RelationStereotype.PARTICIPATION and ok:
            if stereo(rr.source[0]) is not Stereotype.EVENT:
                errors.append(ParseError(
                    rr.source[1], f"participation source '{rr.source[0]}' must be an event",
                ))
                ok = False

        derivation = None
        if rr.derived is not None:
            rel_name, rel_span, dmult = rr.derived
            if rel_name not in names:
                errors.append(ParseError(rel_span, f"unknown classifier '{rel_name}'"))
                ok = False
            elif stereo(rel_name) is not Stereotype.RELATOR:
                errors.append(ParseError(
                    rel_span, f"derivedFrom must name a relator, '{rel_name}' is not one",
                ))
                ok = False
            else:
                derivation = Derivation(rel_name, dmult if dmult is not None else Multiplicity(1, None))

        via = None
        if rr.via is not None:
            q_name, q_span, direction = rr.via
            if q_name not in names:
                errors.append(ParseError(q_span, f"unknown classifier '{q_name}'"))
                ok = False
            else:
                via = ViaQuality(q_name, direction)

        if ok:
            relations[rr.name] = RelationDecl(
                rr.name, rr.stereotype, rr.source[0], rr.target[0],
                rr.source_mult, rr.target_mult, derivation, via, rr.span,
            )

    gensets: dict[str, GeneralizationSet] = {}
    # ancestor checks below need the taxonomy of what resolved so far
    probe = Model(name=p.model_name or "", classifiers=classifiers)
    for rg in p.gensets:
        if rg.name in gensets:
            errors.append(ParseError(rg.span, f"duplicate generalization set '{rg.name}'"))
            continue
        ok = known(rg.general, "classifier")
        specifics = []
        for sp in rg.specifics:
            if known(sp, "classifier"):
                specifics.append(sp)
        if len(rg.specifics) < 2:
            errors.append(ParseError(
                rg.span, f"generalization set '{rg.name}' needs at least two specifics",
            ))
            ok = False
        if ok:
            for sp_name, sp_span in specifics:
                if rg.general[0] not in probe.ancestors(sp_name):
                    errors.append(ParseError(
                        sp_span,
                        f"'{sp_name}' does not specialize '{rg.general[0]}'",
                    ))
                    ok = False
        if ok and len(specifics) == len(rg.specifics):
            gensets[rg.name] = GeneralizationSet(
                rg.name, rg.general[0], tuple(s[0] for s in specifics),
                rg.disjoint, rg.complete, rg.span,
            )

    spaces: dict[str, QualitySpace] = {}
    for rs in p.spaces:
        if rs.owner in spaces:
            errors.append(ParseError(rs.span, f"duplicate space for quality '{rs.owner}'"))
            continue
        if rs.owner not in names:
            errors.append(ParseError(rs.span, f"unknown quality '{rs.owner}'"))
            continue
        if stereo(rs.owner) is not Stereotype.QUALITY:
            errors.append(ParseError(
                rs.span, f"space owner '{rs.owner}' must be a quality classifier",
            ))
            continue
        spaces[rs.owner] = QualitySpace(rs.owner, rs.ordered, rs.labels, rs.span)

    if errors:
        return sorted(errors, key=lambda e: (e.span.line, e.span.column, e.message))
    return Model(
        name=p.model_name or "",
        classifiers=classifiers,
        relations=relations,
        gensets=gensets,
        spaces=spaces,
    )


def parse_text(text: str) -> Model | list[ParseError]:
    """Parse DSL source into a Model, or report every error found."""
    tokens, lex_errors = _lex(text)
    parser = _Parser(tokens)
    parser.errors.extend(lex_errors)
    parser.parse()
    return _resolve(parser)


def parse_file(path) -> Model | list[ParseError]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_text(fh.read())


# -- rendering ------------------------------------------------------------


def render_dsl(model: Model) -> str:
    """Model back to canonical DSL text (sorted declarations, LF endings)."""
    out: list[str] = [f"model {model.name}", ""]
    for cls in sorted(model.classifiers.values(), key=lambda c: c.name):
        line = f"{cls.stereotype.value} {cls.name}"
        if cls.parents:
            line += " specializes " + ", ".join(cls.parents)
        out.append(line)
    if model.spaces:
        out.append("")
        for sp in sorted(model.spaces.values(), key=lambda s: s.owner):
            if sp.ordered is not None:
                out.append(f"space {sp.owner} ordered {sp.ordered[0]}..{sp.ordered[1]}")
            else:
                out.append(f"space {sp.owner} nominal {{{', '.join(sp.labels or ())}}}")
    if model.gensets:
        out.append("")
        for gs in sorted(model.gensets.values(), key=lambda g: g.name):
            flags = ("disjoint " if gs.is_disjoint else "") + ("complete " if gs.is_complete else "")
            out.append(
                f"genset {gs.name} {flags}general {gs.general} "
                f"specifics {', '.join(gs.specifics)}"
            )
    if model.relations:
        out.append("")
        for rel in sorted(model.relations.values(), key=lambda r: r.name):
            if rel.stereotype is RelationStereotype.COMPARATIVE:
                line = f"comparative {rel.name} : {rel.source} -- {rel.target}"
            else:
                line = (
                    f"{rel.stereotype.value} {rel.name} : {rel.source} {rel.source_mult} "
                    f"-- {rel.target_mult} {rel.target}"
                )
            if rel.derived_from is not None:
                line += f" derivedFrom {rel.derived_from.relator} {rel.derived_from.mult}"
            if rel.via is not None:
                line += f" via {rel.via.quality} {rel.via.direction.value}"
            out.append(line)
    out.append("")
    return "\n".join(out)


__all__ = ["ParseError", "parse_text", "parse_file", "render_dsl"]
