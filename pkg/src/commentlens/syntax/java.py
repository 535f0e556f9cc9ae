"""Lightweight Java parser producing the uniform span tree.

This is a structural parser, not a full grammar: it recognizes the
declarations, statements and expression atoms that the comment analyses
key on, and collapses everything else to Other nodes.  It never gives up
on a file; unrecognized token runs are consumed into recovery nodes so a
corpus pass cannot abort.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    BLOCK, LINE, CommentToken, ParsedFile, SourceSpan, SyntaxNode,
    build_line_index, span_from_offsets,
)

WORD = "word"
NUM = "num"
STR = "str"
CHAR = "char"
PUNCT = "punct"

RESERVED = frozenset("""
    abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package
    private protected public return short static strictfp super switch
    synchronized this throw throws transient try void volatile while
    true false null
""".split())

PRIMITIVES = frozenset({"boolean", "byte", "char", "short", "int", "long",
                        "float", "double", "void"})

MODIFIERS = frozenset({"public", "protected", "private", "static", "final",
                       "abstract", "native", "synchronized", "transient",
                       "volatile", "strictfp", "default", "sealed"})

_MULTI_OPS = ("->", "::", ">>>=", "<<=", ">>=", ">>>", "<<", ">>", "<=",
              ">=", "==", "!=", "&&", "||", "++", "--", "+=", "-=", "*=",
              "/=", "%=", "&=", "|=", "^=")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    start: int
    end: int


def _lex(text: str) -> tuple[list[_Tok], list[tuple[int, int, str]]]:
    """Tokenize; returns (tokens, comment regions as (start, end, style))."""
    toks: list[_Tok] = []
    comments: list[tuple[int, int, str]] = []
    n = len(text)
    i = 0
    while i < n:
        ch = text[i]
        if ch in " \t\r\n\f":
            i += 1
            continue
        if ch == "/" and i + 1 < n:
            nxt = text[i + 1]
            if nxt == "/":
                j = text.find("\n", i)
                j = n if j == -1 else j
                comments.append((i, j, LINE))
                i = j
                continue
            if nxt == "*":
                j = text.find("*/", i + 2)
                j = n if j == -1 else j + 2
                comments.append((i, j, BLOCK))
                i = j
                continue
        if text.startswith('"""', i):
            j = i + 3
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text.startswith('"""', j):
                    j += 3
                    break
                j += 1
            else:
                j = n
            toks.append(_Tok(STR, text[i:j], i, j))
            i = j
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] not in '"\n':
                if text[j] == "\\":
                    j += 1  # escape may sit at EOF; clamp below
                j += 1
            j = min(j, n)
            j = min(j + 1, n) if j < n and text[j] == '"' else j
            toks.append(_Tok(STR, text[i:j], i, j))
            i = j
            continue
        if ch == "'":
            j = i + 1
            while j < n and text[j] not in "'\n":
                if text[j] == "\\":
                    j += 1
                j += 1
            j = min(j, n)
            j = min(j + 1, n) if j < n and text[j] == "'" else j
            toks.append(_Tok(CHAR, text[i:j], i, j))
            i = j
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n:
                c = text[j]
                if c.isalnum() or c in "._":
                    j += 1
                elif c in "+-" and text[j - 1] in "eEpP":
                    j += 1
                else:
                    break
            # a trailing '.' belongs to a following method call, not the number
            if text[j - 1] == "." and j - 1 > i:
                j -= 1
            toks.append(_Tok(NUM, text[i:j], i, j))
            i = j
            continue
        if ch.isalpha() or ch in "_$":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_$"):
                j += 1
            toks.append(_Tok(WORD, text[i:j], i, j))
            i = j
            continue
        for op in _MULTI_OPS:
            if text.startswith(op, i):
                toks.append(_Tok(PUNCT, op, i, i + len(op)))
                i += len(op)
                break
        else:
            toks.append(_Tok(PUNCT, ch, i, i + 1))
            i += 1
    return toks, comments


def parse_java(text: str, file_id: str) -> ParsedFile:
    """Parse Java source; comments are collected from the lexer."""
    line_index = build_line_index(text)
    toks, comment_regions = _lex(text)
    parser = _Parser(text, toks, line_index)
    root = parser.parse_root()
    comments = [
        CommentToken(
            span=span_from_offsets(text, line_index, start, end),
            style=style,
            raw_text=text[start:end],
            file_id=file_id,
        )
        for start, end, style in comment_regions
    ]
    return ParsedFile(file_id, "java", text, root, comments, line_index)


class _Parser:
    def __init__(self, text: str, toks: list[_Tok],
                 line_index: list[int]) -> None:
        self.text = text
        self.toks = toks
        self.line_index = line_index
        self.i = 0

    # --- token helpers -------------------------------------------------

    def _peek(self, ahead: int = 0) -> _Tok | None:
        j = self.i + ahead
        return self.toks[j] if j < len(self.toks) else None

    def _advance(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def _at(self, *texts: str) -> bool:
        t = self._peek()
        return t is not None and t.text in texts

    def _eof(self) -> bool:
        return self.i >= len(self.toks)

    def _node(self, kind: str, start_tok: int, end_tok: int,
              children: list[SyntaxNode]) -> SyntaxNode:
        start = self.toks[start_tok].start
        end = self.toks[end_tok].end
        if children:
            start = min(start, children[0].span.start_offset)
            end = max(end, children[-1].span.end_offset)
        span = span_from_offsets(self.text, self.line_index, start, end)
        return SyntaxNode(kind, span, children)

    def _tok_node(self, kind: str, tok_i: int) -> SyntaxNode:
        return self._node(kind, tok_i, tok_i, [])

    # --- top level ------------------------------------------------------

    def parse_root(self) -> SyntaxNode:
        children: list[SyntaxNode] = []
        while not self._eof():
            before = self.i
            node = self._parse_top_level()
            if node is not None:
                children.append(node)
            if self.i == before:
                self.i += 1  # never stall
        span = span_from_offsets(self.text, self.line_index, 0,
                                 len(self.text))
        return SyntaxNode("Root", span, children)

    def _parse_top_level(self) -> SyntaxNode | None:
        t = self._peek()
        if t is None:
            return None
        if t.text in ("package", "import"):
            start = self.i
            self._consume_until({";"})
            if self._at(";"):
                self._advance()
            return self._node("Other", start, self.i - 1, [])
        if t.text == ";":
            self._advance()
            return None
        start = self.i
        self._skip_annotations_and_modifiers()
        if self._at("class", "interface", "enum") or self._looks_like_record():
            return self._parse_type_decl(start)
        if self._at("{"):
            return self._parse_block()
        if self._at("}"):
            self._advance()
            return None
        # Bare statements (snippets, recovery): parse as statement so the
        # tree still carries useful structure.
        return self._parse_statement()

    def _skip_annotations_and_modifiers(self) -> None:
        while True:
            t = self._peek()
            if t is None:
                return
            if t.text == "@":
                self._advance()
                while self._peek() is not None and self._peek().kind == WORD:
                    self._advance()
                    if self._at("."):
                        self._advance()
                        continue
                    break
                if self._at("("):
                    self._skip_balanced("(", ")")
                continue
            if t.kind == WORD and t.text in MODIFIERS:
                self._advance()
                continue
            if t.kind == WORD and t.text == "non":
                # 'non-sealed' lexes as three tokens
                nxt, nxt2 = self._peek(1), self._peek(2)
                if (nxt is not None and nxt.text == "-"
                        and nxt2 is not None and nxt2.text == "sealed"):
                    self.i += 3
                    continue
            return

    def _looks_like_record(self) -> bool:
        t = self._peek()
        if t is None or t.text != "record":
            return False
        nxt, nxt2 = self._peek(1), self._peek(2)
        return (nxt is not None and nxt.kind == WORD
                and nxt2 is not None and nxt2.text == "(")

    def _parse_type_decl(self, start: int) -> SyntaxNode:
        self._advance()  # class/interface/enum/record
        if self._peek() is not None and self._peek().kind == WORD:
            self._advance()  # name
        if self._at("<"):
            self._skip_generic_group()
        if self._at("("):  # record header
            self._skip_balanced("(", ")")
        self._consume_until({"{", ";"})  # extends/implements/permits
        members: list[SyntaxNode] = []
        if self._at("{"):
            self._advance()
            while not self._eof() and not self._at("}"):
                before = self.i
                members.extend(self._parse_member())
                if self.i == before:
                    self.i += 1
            if self._at("}"):
                self._advance()
        elif self._at(";"):
            self._advance()
        return self._node("Other", start, self.i - 1, members)

    # --- class members ---------------------------------------------------

    def _parse_member(self) -> list[SyntaxNode]:
        start = self.i
        self._skip_annotations_and_modifiers()
        t = self._peek()
        if t is None:
            return []
        if t.text == ";":
            self._advance()
            return []
        if t.text == "{":
            return [self._parse_block()]
        if t.text in ("class", "interface", "enum") or self._looks_like_record():
            return [self._parse_type_decl(start)]
        if t.text == "<":
            self._skip_generic_group()
        first = self._scan_first_of({"(", "=", ";", "{", "}"})
        if first == "(":
            return [self._parse_method(start)]
        if first in ("=", ";"):
            return [self._parse_field(start)]
        self._consume_until({";", "}"})
        if self._at(";"):
            self._advance()
        end = max(start, self.i - 1)
        return [self._node("Other", start, end, [])]

    def _scan_first_of(self, targets: set[str]) -> str | None:
        """First of ``targets`` ahead of the cursor, skipping <...> groups."""
        j = self.i
        depth = 0
        while j < len(self.toks):
            text = self.toks[j].text
            if text == "<":
                depth += 1
            elif text == ">":
                depth = max(0, depth - 1)
            elif text == ">>":
                depth = max(0, depth - 2)
            elif depth == 0 and text in targets:
                return text
            j += 1
        return None

    def _parse_method(self, start: int) -> SyntaxNode:
        while not self._eof() and not self._at("("):
            if self._at("<"):
                self._skip_generic_group()
            else:
                self._advance()
        children: list[SyntaxNode] = []
        if self._at("("):
            self._advance()
            children.extend(self._parse_atoms({")"}))
            if self._at(")"):
                self._advance()
        # throws clause / annotation default values
        while not self._eof() and not self._at("{", ";", "}"):
            self._advance()
        if self._at("{"):
            children.append(self._parse_block())
        elif self._at(";"):
            self._advance()
        return self._node("MethodDeclaration", start, self.i - 1, children)

    def _parse_field(self, start: int) -> SyntaxNode:
        children = self._parse_atoms({";"})
        if self._at(";"):
            self._advance()
        return self._node("VariableDeclaration", start, self.i - 1, children)

    # --- statements -------------------------------------------------------

    def _parse_block(self) -> SyntaxNode:
        start = self.i
        self._advance()  # '{'
        children: list[SyntaxNode] = []
        while not self._eof() and not self._at("}"):
            before = self.i
            node = self._parse_statement()
            if node is not None:
                children.append(node)
            if self.i == before:
                self.i += 1
        if self._at("}"):
            self._advance()
        return self._node("Block", start, self.i - 1, children)

    def _parse_statement(self) -> SyntaxNode | None:
        t = self._peek()
        if t is None:
            return None
        text = t.text
        if text == ";":
            self._advance()
            return None
        if text == "{":
            return self._parse_block()
        if text == "if":
            return self._parse_if()
        if text == "for":
            return self._parse_for()
        if text == "while":
            return self._parse_while()
        if text == "do":
            return self._parse_do()
        if text == "switch":
            return self._parse_switch()
        if text == "try":
            return self._parse_try()
        if text == "return":
            start = self.i
            self._advance()
            children = self._parse_atoms({";"})
            if self._at(";"):
                self._advance()
            return self._node("ReturnStatement", start, self.i - 1, children)
        if text in ("throw", "assert", "break", "continue", "yield",
                    "package", "import"):
            start = self.i
            self._advance()
            children = self._parse_atoms({";"})
            if self._at(";"):
                self._advance()
            return self._node("Other", start, self.i - 1, children)
        if text == "synchronized":
            start = self.i
            self._advance()
            children: list[SyntaxNode] = []
            if self._at("("):
                self._advance()
                children.extend(self._parse_atoms({")"}))
                if self._at(")"):
                    self._advance()
            if self._at("{"):
                children.append(self._parse_block())
            return self._node("Other", start, self.i - 1, children)
        if text in ("class", "interface", "enum"):
            return self._parse_type_decl(self.i)
        if text in ("final", "@") or text in MODIFIERS:
            start = self.i
            self._skip_annotations_and_modifiers()
            if self._at("class", "interface", "enum") or self._looks_like_record():
                return self._parse_type_decl(start)
            return self._parse_field(start)  # annotated local variable
        # label:
        nxt = self._peek(1)
        if (t.kind == WORD and t.text not in RESERVED and nxt is not None
                and nxt.text == ":"):
            start = self.i
            self.i += 2
            inner = self._parse_statement()
            children = [inner] if inner is not None else []
            return self._node("Other", start, self.i - 1, children)
        if self._looks_like_var_decl():
            start = self.i
            return self._parse_field(start)
        # expression statement
        start = self.i
        children = self._parse_atoms({";"})
        if self._at(";"):
            self._advance()
        if self.i == start:
            return None
        return self._node("ExpressionStatement", start, self.i - 1, children)

    def _parse_paren_condition(self) -> list[SyntaxNode]:
        children: list[SyntaxNode] = []
        if self._at("("):
            self._advance()
            children = self._parse_atoms({")"})
            if self._at(")"):
                self._advance()
        return children

    def _parse_if(self) -> SyntaxNode:
        start = self.i
        self._advance()
        children = self._parse_paren_condition()
        then_branch = self._parse_statement()
        if then_branch is not None:
            children.append(then_branch)
        if self._at("else"):
            self._advance()
            else_branch = self._parse_statement()
            if else_branch is not None:
                children.append(else_branch)
        return self._node("IfStatement", start, self.i - 1, children)

    def _parse_for(self) -> SyntaxNode:
        start = self.i
        self._advance()
        children = self._parse_paren_condition()
        body = self._parse_statement()
        if body is not None:
            children.append(body)
        return self._node("ForStatement", start, self.i - 1, children)

    def _parse_while(self) -> SyntaxNode:
        start = self.i
        self._advance()
        children = self._parse_paren_condition()
        body = self._parse_statement()
        if body is not None:
            children.append(body)
        return self._node("Other", start, self.i - 1, children)

    def _parse_do(self) -> SyntaxNode:
        start = self.i
        self._advance()
        children: list[SyntaxNode] = []
        body = self._parse_statement()
        if body is not None:
            children.append(body)
        if self._at("while"):
            self._advance()
            children.extend(self._parse_paren_condition())
        if self._at(";"):
            self._advance()
        return self._node("Other", start, self.i - 1, children)

    def _parse_switch(self) -> SyntaxNode:
        start = self.i
        self._advance()
        children = self._parse_paren_condition()
        if self._at("{"):
            children.append(self._parse_switch_body())
        return self._node("Other", start, self.i - 1, children)

    def _parse_switch_body(self) -> SyntaxNode:
        start = self.i
        self._advance()  # '{'
        children: list[SyntaxNode] = []
        while not self._eof() and not self._at("}"):
            before = self.i
            if self._at("case", "default"):
                self._advance()
                while not self._eof() and not self._at(":", "->", "}"):
                    if self._at("("):
                        self._skip_balanced("(", ")")
                    else:
                        self._advance()
                if self._at(":", "->"):
                    self._advance()
                continue
            node = self._parse_statement()
            if node is not None:
                children.append(node)
            if self.i == before:
                self.i += 1
        if self._at("}"):
            self._advance()
        return self._node("Block", start, self.i - 1, children)

    def _parse_try(self) -> SyntaxNode:
        start = self.i
        self._advance()
        children: list[SyntaxNode] = []
        if self._at("("):
            self._advance()
            children.extend(self._parse_atoms({")"}))
            if self._at(")"):
                self._advance()
        if self._at("{"):
            children.append(self._parse_block())
        while self._at("catch"):
            cstart = self.i
            self._advance()
            cchildren: list[SyntaxNode] = []
            if self._at("("):
                self._advance()
                cchildren.extend(self._parse_atoms({")"}))
                if self._at(")"):
                    self._advance()
            if self._at("{"):
                cchildren.append(self._parse_block())
            children.append(self._node("CatchClause", cstart, self.i - 1,
                                       cchildren))
        if self._at("finally"):
            self._advance()
            if self._at("{"):
                children.append(self._parse_block())
        return self._node("Other", start, self.i - 1, children)

    # --- declarations vs expressions ---------------------------------------

    def _looks_like_var_decl(self) -> bool:
        j = self.i
        toks = self.toks

        def text(k: int) -> str | None:
            return toks[k].text if k < len(toks) else None

        def kind(k: int) -> str | None:
            return toks[k].kind if k < len(toks) else None

        if text(j) in PRIMITIVES or text(j) == "var":
            j += 1
        elif kind(j) == WORD and text(j) not in RESERVED:
            j += 1
            while text(j) == "." and kind(j + 1) == WORD:
                j += 2
            if text(j) == "<":
                j = self._scan_generic(j)
                if j < 0:
                    return False
        else:
            return False
        while text(j) == "[" and text(j + 1) == "]":
            j += 2
        if kind(j) != WORD or text(j) in RESERVED:
            return False
        j += 1
        while text(j) == "[" and text(j + 1) == "]":
            j += 2
        return text(j) in ("=", ";", ",")

    def _scan_generic(self, j: int) -> int:
        """Return index after a balanced, type-looking <...>; -1 if not one."""
        assert self.toks[j].text == "<"
        depth = 0
        allowed_punct = {",", ".", "?", "&", "[", "]", "@"}
        while j < len(self.toks):
            t = self.toks[j]
            if t.text == "<":
                depth += 1
            elif t.text == ">":
                depth -= 1
                if depth == 0:
                    return j + 1
            elif t.text == ">>":
                depth -= 2
                if depth <= 0:
                    return j + 1
            elif t.kind == WORD:
                if t.text in RESERVED and t.text not in PRIMITIVES \
                        and t.text not in ("extends", "super"):
                    return -1
            elif t.text not in allowed_punct:
                return -1
            j += 1
        return -1

    # --- expression atoms ---------------------------------------------------

    def _parse_atoms(self, terminators: set[str]) -> list[SyntaxNode]:
        atoms: list[SyntaxNode] = []
        prev_text: str | None = None
        while not self._eof():
            t = self._peek()
            if t.text in terminators or t.text in (")", "]", "}"):
                break
            if t.kind == WORD:
                if t.text in ("true", "false", "null"):
                    atoms.append(self._tok_node("Other", self.i))
                    self._advance()
                elif t.text in ("this", "super") or t.text not in RESERVED:
                    atoms.extend(self._parse_primary())
                else:
                    self._advance()  # new, instanceof, primitive casts, ...
            elif t.kind == STR:
                atoms.append(self._tok_node("StringLiteral", self.i))
                self._advance()
            elif t.kind == NUM:
                atoms.append(self._tok_node("NumberLiteral", self.i))
                self._advance()
            elif t.kind == CHAR:
                atoms.append(self._tok_node("Other", self.i))
                self._advance()
            elif t.text == "(":
                self._advance()
                atoms.extend(self._parse_atoms({")"}))
                if self._at(")"):
                    self._advance()
            elif t.text == "[":
                self._advance()
                atoms.extend(self._parse_atoms({"]"}))
                if self._at("]"):
                    self._advance()
            elif t.text == "{":
                if prev_text == "->":
                    atoms.append(self._parse_block())
                else:
                    start = self.i
                    self._advance()
                    inner = self._parse_atoms({"}"})
                    if self._at("}"):
                        self._advance()
                    atoms.append(self._node("ArrayInitializer", start,
                                            self.i - 1, inner))
            else:
                self._advance()
            prev_text = t.text
        return atoms

    def _parse_primary(self) -> list[SyntaxNode]:
        """An identifier chain with optional calls: a.b.c(x).d(y)"""
        start = self.i
        primary: SyntaxNode | None = None
        pending: list[int] = [self.i]
        self._advance()
        while True:
            t = self._peek()
            if t is not None and t.text == ".":
                nxt = self._peek(1)
                if nxt is not None and nxt.kind == WORD \
                        and nxt.text not in RESERVED:
                    self._advance()
                    pending.append(self.i)
                    self._advance()
                    continue
                if nxt is not None and nxt.kind == WORD:  # .this / .class
                    self.i += 2
                    continue
                break
            if t is not None and t.text == "(":
                self._advance()
                args = self._parse_atoms({")"})
                if self._at(")"):
                    self._advance()
                children = ([primary] if primary is not None else [])
                children += [self._name_node(k) for k in pending]
                children += args
                primary = self._node("MethodInvocation", start, self.i - 1,
                                     children)
                pending = []
                continue
            if t is not None and t.text == "[":
                # array access inside the chain: a[i].b — flush names,
                # bracket group parses as sibling atoms
                break
            break
        tail = [self._name_node(k) for k in pending]
        return ([primary] if primary is not None else []) + tail

    def _name_node(self, tok_i: int) -> SyntaxNode:
        tok = self.toks[tok_i]
        kind = "Other" if tok.text in RESERVED else "SimpleName"
        return self._tok_node(kind, tok_i)

    # --- small skippers -----------------------------------------------------

    def _skip_balanced(self, opener: str, closer: str) -> None:
        if not self._at(opener):
            return
        depth = 0
        while not self._eof():
            t = self._advance()
            if t.text == opener:
                depth += 1
            elif t.text == closer:
                depth -= 1
                if depth == 0:
                    return

    def _skip_generic_group(self) -> None:
        end = self._scan_generic(self.i)
        if end > 0:
            self.i = end
        else:
            self._advance()  # lone '<', treat as operator

    def _consume_until(self, stops: set[str]) -> None:
        depth = 0
        while not self._eof():
            t = self._peek()
            if depth == 0 and t.text in stops:
                return
            if t.text in ("(", "[", "{"):
                depth += 1
            elif t.text in (")", "]", "}"):
                if depth == 0 and t.text in stops:
                    return
                if depth == 0:
                    return
                depth -= 1
            self._advance()


__all__ = ["parse_java"]
