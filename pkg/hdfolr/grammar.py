# Copyright (C) 2024 The hdfolr developers
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#            http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Concrete syntax: one lark grammar for sentences, actions, terms and the
line-oriented document format shared by every file kind.

Names are resolved against a signature after parsing; a bare name in
sentence position is a nominal if the signature (or an enclosing binder)
declares it as one and a relation otherwise.
"""

import dataclasses
import json
import logging

from lark import Lark, Token, Tree
from lark.exceptions import LarkError, UnexpectedInput
from lark.visitors import Interpreter

from hdfolr.exceptions import ParseError, SignatureError
from hdfolr.signatures import (ANY, FOSignature, HDSignature, OpDecl,
                               RelDecl, Variable, extend)
from hdfolr import syntax

logger = logging.getLogger('hdfolr')

GRAMMAR = r"""
?sentence: "exists" varlist "." sentence -> exists
         | "forall" varlist "." sentence -> forall
         | "store" NAME "." sentence -> store
         | iff

?iff: imp
    | imp "<->" imp -> iff

?imp: disj
    | disj "->" imp -> implies

?disj: conj
     | conj ("or" conj)+ -> disj

?conj: unary
     | unary ("and" unary)+ -> conj

?unary: "not" unary -> neg
      | "@" NAME unary -> at
      | "<" action ">" unary -> dia
      | "[" action "]" unary -> box
      | primary

?primary: "(" sentence ")"
        | "(" "or" sentence ")" -> single
        | "bot" -> bot
        | "top" -> top
        | term "=" term -> eq
        | term "!=" term -> neq
        | term -> atom

term: NAME -> name
    | NAME "(" args ")" -> app
    | "(" "at" NAME NAME ")" -> at_name
    | "(" "at" NAME NAME ")" "(" args ")" -> at_app

args: term ("," term)*

?action: seqs
       | action "|" seqs -> choice

?seqs: starred
     | seqs ";" starred -> seq

?starred: action_atom
        | starred "*" -> star

?action_atom: NAME -> modality
            | "(" action ")"

varlist: (var ("," var)*)?
var: NAME (":" NAME)?

document: statement*

?statement: "nominal" names ";" -> nominal_decl
          | "modality" names ";" -> modality_decl
          | RIGID? "sort" names ";" -> sort_decl
          | RIGID? "op" NAME ":" sorts "->" NAME ";" -> op_decl
          | RIGID? "rel" NAME (":" sorts)? ";" -> rel_decl
          | "axiom" sentence ";" -> axiom
          | NAME ":" NAME "->" term ";" -> subst_entry
          | "order" NAME "<" NAME ";" -> order_decl
          | "condition" NAME "{" (sentence ";")* "}" -> condition
          | "type" NAME "(" varlist ")" "{" (sentence ";")* "}" -> type_decl
          | "model" "{" model_statement* "}" -> model

?model_statement: "worlds" elements ";" -> worlds
                | "truncated" ";" -> truncated
                | "denote" NAME "=" element ";" -> denote
                | "edge" NAME ":" element "->" element ";" -> edge
                | "carrier" NAME world? "=" "{" elements? "}" ";" -> carrier
                | "op" NAME world? ":" row "->" element ";" -> op_entry
                | "rel" NAME world? ":" row ";" -> rel_entry

world: "@" element
row: "(" elements? ")"
names: NAME ("," NAME)*
elements: element ("," element)*
?element: NAME | ESCAPED_STRING
sorts: NAME*

RIGID: "rigid"
NAME: /[A-Za-z0-9_'][A-Za-z0-9_']*/
COMMENT: /#[^\n]*/

%import common.ESCAPED_STRING
%import common.WS
%ignore WS
%ignore COMMENT
"""

_parser = Lark(GRAMMAR, parser='lalr',
               start=['sentence', 'document', 'term', 'action'],
               propagate_positions=True)


def parse_tree(text, start):
    try:
        return _parser.parse(text, start=start)
    except UnexpectedInput as e:
        token = getattr(e, 'token', None)
        if token is not None:
            message = 'Unexpected token %r' % str(token)
        else:
            message = 'Unexpected character %r' % getattr(e, 'char', '')
        line = e.line if isinstance(e.line, int) and e.line > 0 else None
        raise ParseError(message, line, e.column if line else None)
    except LarkError as e:
        raise ParseError(str(e))


def _element(token):
    if token.type == 'ESCAPED_STRING':
        return json.loads(token)
    return str(token)


def _position(node):
    if isinstance(node, Token):
        return node.line, node.column
    meta = getattr(node, 'meta', None)
    if meta is None or getattr(meta, 'empty', True):
        return None, None
    return meta.line, meta.column


def _error(node, message):
    line, column = _position(node)
    return ParseError(message, line, column)


class Resolver(Interpreter):
    """Turns parse trees into ASTs over a signature.

    Binders extend ``self.sig`` for the extent of their body.
    """

    def __init__(self, sig):
        self.sig = sig

    def bind(self, tree, variables, body):
        outer = self.sig
        try:
            self.sig = extend(outer, variables)
        except SignatureError as e:
            raise _error(tree, str(e))
        try:
            return self.visit(body)
        finally:
            self.sig = outer

    def variables(self, tree):
        result = []
        for var in tree.children:
            name = str(var.children[0])
            sort = str(var.children[1]) if len(var.children) > 1 else ANY
            if sort != ANY and sort not in self.sig.sorts:
                raise _error(var, 'Unknown sort %s' % sort)
            result.append(Variable(name, sort))
        if len(set(v.name for v in result)) != len(result):
            raise _error(tree, 'Repeated variable')
        return frozenset(result)

    def nominal(self, token):
        name = str(token)
        if name not in self.sig.nominals:
            raise _error(token, 'Unknown nominal %s' % name)
        return name

    # sentences

    def exists(self, tree):
        varlist, body = tree.children
        variables = self.variables(varlist)
        return syntax.Exists(variables, self.bind(tree, variables, body))

    def forall(self, tree):
        varlist, body = tree.children
        variables = self.variables(varlist)
        return syntax.forall(variables, self.bind(tree, variables, body))

    def store(self, tree):
        name, body = tree.children
        var = Variable(str(name), ANY)
        return syntax.Store(var.name, self.bind(tree, [var], body))

    def iff(self, tree):
        return syntax.iff(*self.visit_children(tree))

    def implies(self, tree):
        return syntax.implies(*self.visit_children(tree))

    def disj(self, tree):
        return syntax.disj(*self.visit_children(tree))

    def conj(self, tree):
        return syntax.conj(*self.visit_children(tree))

    def neg(self, tree):
        body, = self.visit_children(tree)
        return syntax.Not(body)

    def at(self, tree):
        name, body = tree.children
        return syntax.At(self.nominal(name), self.visit(body))

    def dia(self, tree):
        action, body = self.visit_children(tree)
        return syntax.Dia(action, body)

    def box(self, tree):
        action, body = self.visit_children(tree)
        return syntax.box(action, body)

    def single(self, tree):
        body, = self.visit_children(tree)
        return syntax.Or(frozenset([body]))

    def bot(self, tree):
        return syntax.BOT

    def top(self, tree):
        return syntax.TOP

    def eq(self, tree):
        left, right = [self.term(t) for t in tree.children]
        self.check_equation(tree, left, right)
        return syntax.Eq(left, right)

    def neq(self, tree):
        left, right = [self.term(t) for t in tree.children]
        self.check_equation(tree, left, right)
        return syntax.neq(left, right)

    def check_equation(self, tree, left, right):
        left_sort = syntax.term_sort(self.sig, left)
        right_sort = syntax.term_sort(self.sig, right)
        if left_sort != right_sort:
            raise _error(tree, 'Equation relates sorts %s and %s'
                         % (left_sort, right_sort))

    def atom(self, tree):
        term, = tree.children
        head, at, args = self.split(term)
        name = str(head)
        if at is None and not args and name in self.sig.nominals:
            return syntax.Nom(name)
        rel = self.sig.rel(name)
        if rel is None:
            raise _error(term, 'Unknown relation %s' % name)
        if at is not None:
            at = self.nominal(at)
            if self.sig.is_rigid_rel(rel):
                at = None
        args = tuple(self.term(a) for a in args)
        sentence = syntax.Rel(rel, args, at)
        try:
            syntax.check_sentence(self.sig, sentence)
        except SignatureError as e:
            raise _error(term, str(e))
        return sentence

    # terms

    def split(self, tree):
        """``(head, at, args)`` of a raw term tree."""
        kind = tree.data
        if kind == 'name':
            return tree.children[0], None, ()
        if kind == 'app':
            return tree.children[0], None, tree.children[1].children
        if kind == 'at_name':
            return tree.children[1], tree.children[0], ()
        return tree.children[1], tree.children[0], tree.children[2].children

    def term(self, tree):
        head, at, args = self.split(tree)
        op = self.sig.op(str(head))
        if op is None:
            raise _error(tree, 'Unknown operation %s' % head)
        if at is not None:
            at = self.nominal(at)
        term = syntax.apply_op(self.sig, op,
                               tuple(self.term(a) for a in args), at)
        try:
            syntax.term_sort(self.sig, term)
        except SignatureError as e:
            raise _error(tree, str(e))
        return term

    # actions

    def modality(self, tree):
        name = str(tree.children[0])
        if name not in self.sig.modalities:
            raise _error(tree, 'Unknown modality %s' % name)
        return syntax.Modality(name)

    def seq(self, tree):
        return syntax.Seq(*self.visit_children(tree))

    def choice(self, tree):
        return syntax.Choice(*self.visit_children(tree))

    def star(self, tree):
        body, = self.visit_children(tree)
        return syntax.Star(body)


def parse_sentence(sig, text):
    return Resolver(sig).visit(parse_tree(text, 'sentence'))


def parse_term(sig, text):
    return Resolver(sig).term(parse_tree(text, 'term'))


def parse_action(sig, text):
    return Resolver(sig).visit(parse_tree(text, 'action'))


@dataclasses.dataclass
class Document(object):
    """Everything a file may declare, in declaration order."""

    signature: HDSignature
    axioms: list = dataclasses.field(default_factory=list)
    substitution: list = dataclasses.field(default_factory=list)
    conditions: dict = dataclasses.field(default_factory=dict)
    order: list = dataclasses.field(default_factory=list)
    types: list = dataclasses.field(default_factory=list)
    model: list = None


class DocumentReader(object):
    """Reads a document in two passes: declarations first, then the
    sentences, substitutions, conditions and types that mention them.
    """

    def __init__(self, base=None):
        self.base = base

    def signature(self, statements):
        nominals, modalities = set(), set()
        sorts, rigid_sorts = set(), set()
        ops, rigid_ops, rels, rigid_rels = set(), set(), set(), set()
        for statement in statements:
            kind, children = statement.data, statement.children
            rigid = bool(children) and isinstance(children[0], Token) and \
                children[0].type == 'RIGID'
            if rigid:
                children = children[1:]
            if kind == 'nominal_decl':
                nominals.update(map(str, children[0].children))
            elif kind == 'modality_decl':
                modalities.update(map(str, children[0].children))
            elif kind == 'sort_decl':
                target = rigid_sorts if rigid else sorts
                target.update(map(str, children[0].children))
            elif kind == 'op_decl':
                name, arity, result = children
                decl = OpDecl(str(name), tuple(map(str, arity.children)),
                              str(result))
                (rigid_ops if rigid else ops).add(decl)
            elif kind == 'rel_decl':
                arity = children[1].children if len(children) > 1 else ()
                decl = RelDecl(str(children[0]), tuple(map(str, arity)))
                (rigid_rels if rigid else rels).add(decl)
        sig = HDSignature.build(nominals, modalities, sorts, rigid_sorts,
                                ops, rigid_ops, rels, rigid_rels)
        if self.base is not None:
            sig = merge_signatures(self.base, sig)
        return sig

    def read(self, text):
        tree = parse_tree(text, 'document')
        statements = tree.children
        sig = self.signature(statements)
        document = Document(sig)
        resolver = Resolver(sig)
        for statement in statements:
            kind = statement.data
            if kind == 'axiom':
                document.axioms.append(resolver.visit(statement.children[0]))
            elif kind == 'subst_entry':
                document.substitution.append(
                    self.substitution_entry(resolver, statement))
            elif kind == 'order_decl':
                document.order.append(tuple(map(str, statement.children)))
            elif kind == 'condition':
                name = str(statement.children[0])
                if name in document.conditions:
                    raise _error(statement, 'Duplicate condition %s' % name)
                document.conditions[name] = [
                    resolver.visit(s) for s in statement.children[1:]]
            elif kind == 'type_decl':
                name, varlist = statement.children[:2]
                variables = resolver.variables(varlist)
                sentences = [resolver.bind(statement, variables, s)
                             for s in statement.children[2:]]
                document.types.append((str(name), variables, sentences))
            elif kind == 'model':
                if document.model is not None:
                    raise _error(statement, 'Only one model block allowed')
                document.model = [self.model_statement(s)
                                  for s in statement.children]
        logger.debug('Read document with %d axioms', len(document.axioms))
        return document

    def substitution_entry(self, resolver, statement):
        name, sort, value = statement.children
        var = Variable(str(name), str(sort))
        if var.sort == ANY:
            if value.data != 'name':
                raise _error(value, 'Nominal variable %s needs a nominal'
                             % var.name)
            return var, resolver.nominal(value.children[0])
        if var.sort not in resolver.sig.rigid_sorts:
            raise _error(statement, 'Sort %s is not rigid' % var.sort)
        term = resolver.term(value)
        if syntax.term_sort(resolver.sig, term) != var.sort:
            raise _error(value, 'Value of %s must have sort %s'
                         % (var.name, var.sort))
        return var, term

    def model_statement(self, tree):
        """Model statements stay raw: ``(kind, fields, line, column)``."""
        kind = tree.data
        line, column = _position(tree)
        children = list(tree.children)
        world = None
        for child in list(children):
            if isinstance(child, Tree) and child.data == 'world':
                world = _element(child.children[0])
                children.remove(child)

        def names(node):
            return tuple(map(_element, node.children)) if node is not None \
                else ()

        if kind in ('worlds',):
            fields = names(children[0])
        elif kind == 'truncated':
            fields = ()
        elif kind == 'denote':
            fields = (str(children[0]), _element(children[1]))
        elif kind == 'edge':
            fields = (str(children[0]),) + tuple(map(_element, children[1:]))
        elif kind == 'carrier':
            fields = (str(children[0]), world,
                      names(children[1]) if len(children) > 1 else ())
        elif kind == 'op_entry':
            symbol, row, result = children
            fields = (str(symbol), world, names(row.children[0])
                      if row.children else (), _element(result))
        else:
            symbol, row = children
            fields = (str(symbol), world, names(row.children[0])
                      if row.children else ())
        return kind, fields, line, column


def merge_signatures(base, extra):
    return HDSignature(
        base.nominal_sig.union(extra.nominal_sig),
        base.body.union(extra.body),
        base.rigid.union(extra.rigid),
        base.variables | extra.variables)


def parse_document(text, base=None):
    return DocumentReader(base).read(text)


def signature_text(sig):
    """The canonical declarations of ``sig``, one per line."""
    lines = []
    if sig.nominals:
        lines.append('nominal %s;' % ', '.join(sorted(sig.nominals)))
    if sig.modalities:
        lines.append('modality %s;' % ', '.join(sorted(sig.modalities)))
    for sort in sorted(sig.sorts):
        prefix = 'rigid ' if sort in sig.rigid_sorts else ''
        lines.append('%ssort %s;' % (prefix, sort))
    for op in sorted(sig.body.ops):
        prefix = 'rigid ' if op in sig.rigid.ops else ''
        arity = ' '.join(op.arity)
        lines.append('%sop %s : %s%s-> %s;'
                     % (prefix, op.name, arity, ' ' if arity else '',
                        op.result))
    for rel in sorted(sig.body.rels):
        prefix = 'rigid ' if rel in sig.rigid.rels else ''
        if rel.arity:
            lines.append('%srel %s : %s;' % (prefix, rel.name,
                                              ' '.join(rel.arity)))
        else:
            lines.append('%srel %s;' % (prefix, rel.name))
    return '\n'.join(lines) + '\n'


def empty_signature():
    return HDSignature(FOSignature({ANY}), FOSignature(), FOSignature())
