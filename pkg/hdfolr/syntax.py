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

"""Terms, actions and sentences.

Every node is an immutable dataclass.  Derived connectives (and, implies,
iff, forall, box, top) are built from the core grammar by the helpers at
the bottom of the module; the parser uses the same helpers.

The canonical printer lives on the nodes: ``str(node)`` is the text the
parser in :mod:`hdfolr.grammar` reads back into the same node.
"""

import dataclasses
import functools
import logging

from hdfolr.exceptions import SignatureError, UnsupportedConstruct
from hdfolr.signatures import (ANY, OpDecl, Variable, at_sort, extend)
from hdfolr.utils import fresh_name

logger = logging.getLogger('hdfolr')

# printer precedences
QUANT, UNARY = 0, 5
CHOICE, SEQ, STARRED, ATOMIC = 0, 1, 2, 3


class Node(object):

    @functools.cached_property
    def text(self):
        return self.show(QUANT)

    def __str__(self):
        return self.text

    def show(self, context):
        raise NotImplementedError


def _application(head, args):
    if args:
        return '%s(%s)' % (head, ', '.join(str(a) for a in args))
    return head


# Terms

@dataclasses.dataclass(frozen=True)
class Apply(Node):
    """``op(args)`` evaluated at the current world, or at ``at``."""

    op: OpDecl
    args: tuple = ()
    at: str = None

    def show(self, context):
        if self.at is None:
            return _application(str(self.op.name), self.args)
        return _application('(at %s %s)' % (self.at, self.op.name),
                            self.args)


def constant(name, sort):
    return Apply(OpDecl(name, (), sort))


def var_term(var):
    return Apply(var.decl)


def is_rigid_op(sig, op):
    # ops outside the body are bound variables, hence rigid constants
    return op in sig.rigid.ops or op not in sig.body.ops


def apply_op(sig, op, args=(), at=None):
    """Builds an application, dropping ``at`` on rigid symbols."""
    if at is not None and is_rigid_op(sig, op):
        at = None
    return Apply(op, tuple(args), at)


def term_sort(sig, term):
    """The hybrid sort of ``term``; raises SignatureError if ill-sorted."""
    op = term.op
    if op not in sig.body.ops:
        raise SignatureError('Unknown operation %s' % op.name)
    if len(term.args) != len(op.arity):
        raise SignatureError('%s expects %d arguments, got %d'
                             % (op.name, len(op.arity), len(term.args)))
    if term.at is not None:
        if term.at not in sig.nominals:
            raise SignatureError('Unknown nominal %s in %s'
                                 % (term.at, term))
        if sig.is_rigid_op(op):
            raise SignatureError('Rigid operation %s cannot be retrieved'
                                 % op.name)
        expected = tuple(at_sort(sig, term.at, a) for a in op.arity)
        result = at_sort(sig, term.at, op.result)
    else:
        expected = op.arity
        result = op.result
    for arg, sort in zip(term.args, expected):
        actual = term_sort(sig, arg)
        if actual != sort:
            raise SignatureError('Argument %s of %s has sort %s, expected %s'
                                 % (arg, op.name, actual, sort))
    return result


def term_depth(term):
    if not term.args:
        return 0
    return 1 + max(term_depth(a) for a in term.args)


def subterms(term):
    yield term
    for arg in term.args:
        for sub in subterms(arg):
            yield sub


# Actions

@dataclasses.dataclass(frozen=True)
class Modality(Node):
    name: str

    def show(self, context):
        return self.name


@dataclasses.dataclass(frozen=True)
class Seq(Node):
    first: Node
    second: Node

    def show(self, context):
        text = '%s ; %s' % (self.first.show(SEQ), self.second.show(STARRED))
        return '(%s)' % text if context > SEQ else text


@dataclasses.dataclass(frozen=True)
class Choice(Node):
    left: Node
    right: Node

    def show(self, context):
        text = '%s | %s' % (self.left.show(CHOICE), self.right.show(SEQ))
        return '(%s)' % text if context > CHOICE else text


@dataclasses.dataclass(frozen=True)
class Star(Node):
    body: Node

    def show(self, context):
        return '%s*' % self.body.show(ATOMIC)


def action_modalities(action):
    if isinstance(action, Modality):
        return {action.name}
    if isinstance(action, Star):
        return action_modalities(action.body)
    if isinstance(action, Seq):
        return action_modalities(action.first) | action_modalities(
            action.second)
    return action_modalities(action.left) | action_modalities(action.right)


def power(action, n):
    """``action ; ... ; action`` with ``n`` >= 1 factors."""
    return functools.reduce(Seq, [action] * n)


# Sentences

@dataclasses.dataclass(frozen=True)
class Nom(Node):
    name: str

    def show(self, context):
        return self.name


@dataclasses.dataclass(frozen=True)
class Eq(Node):
    left: Apply
    right: Apply

    def show(self, context):
        return '%s = %s' % (self.left, self.right)


@dataclasses.dataclass(frozen=True)
class Rel(Node):
    rel: object
    args: tuple = ()
    at: str = None

    def show(self, context):
        if self.at is None:
            return _application(str(self.rel.name), self.args)
        return _application('(at %s %s)' % (self.at, self.rel.name),
                            self.args)


@dataclasses.dataclass(frozen=True)
class At(Node):
    nominal: str
    body: Node

    def show(self, context):
        return '@%s %s' % (self.nominal, self.body.show(UNARY))


@dataclasses.dataclass(frozen=True)
class Not(Node):
    body: Node

    def show(self, context):
        if isinstance(self.body, Eq):
            return '%s != %s' % (self.body.left, self.body.right)
        return 'not %s' % self.body.show(UNARY)


@dataclasses.dataclass(frozen=True)
class Or(Node):
    members: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, 'members', frozenset(self.members))

    def show(self, context):
        if not self.members:
            return 'bot'
        if len(self.members) == 1:
            member, = self.members
            return '(or %s)' % member.show(QUANT)
        texts = sorted(m.show(UNARY) for m in self.members)
        return '(%s)' % ' or '.join(texts)

    def sorted_members(self):
        return sorted(self.members, key=str)


@dataclasses.dataclass(frozen=True)
class Store(Node):
    var: str
    body: Node

    def show(self, context):
        text = 'store %s . %s' % (self.var, self.body.show(QUANT))
        return '(%s)' % text if context > QUANT else text


@dataclasses.dataclass(frozen=True)
class Exists(Node):
    variables: frozenset
    body: Node

    def __post_init__(self):
        object.__setattr__(self, 'variables', frozenset(self.variables))

    def show(self, context):
        names = []
        for var in sorted(self.variables):
            if var.sort == ANY:
                names.append(var.name)
            else:
                names.append('%s : %s' % (var.name, var.sort))
        if names:
            text = 'exists %s . %s' % (', '.join(names),
                                       self.body.show(QUANT))
        else:
            text = 'exists . %s' % self.body.show(QUANT)
        return '(%s)' % text if context > QUANT else text


@dataclasses.dataclass(frozen=True)
class Dia(Node):
    action: Node
    body: Node

    def show(self, context):
        return '<%s> %s' % (self.action.show(CHOICE), self.body.show(UNARY))


ATOMS = (Nom, Eq, Rel)

BOT = Or(frozenset())
TOP = Not(BOT)


def conj(*sentences):
    return Not(Or(frozenset(Not(s) for s in sentences)))


def disj(*sentences):
    return Or(frozenset(sentences))


def implies(premise, conclusion):
    return Or(frozenset([Not(premise), conclusion]))


def iff(left, right):
    return conj(implies(left, right), implies(right, left))


def forall(variables, body):
    return Not(Exists(frozenset(variables), Not(body)))


def box(action, body):
    return Not(Dia(action, Not(body)))


def neq(left, right):
    return Not(Eq(left, right))


def dia(modality, body):
    return Dia(Modality(modality), body)


# Traversals

def children(node):
    if isinstance(node, (At, Not, Store, Exists, Dia)):
        return (node.body,)
    if isinstance(node, Or):
        return tuple(node.sorted_members())
    return ()


def term_names(term):
    names = {str(term.op.name)}
    if term.at is not None:
        names.add(term.at)
    for arg in term.args:
        names |= term_names(arg)
    return names


def names_in(node):
    """Every symbol name occurring in ``node``, bound or free."""
    if isinstance(node, Apply):
        return term_names(node)
    if isinstance(node, Nom):
        return {node.name}
    if isinstance(node, Eq):
        return term_names(node.left) | term_names(node.right)
    if isinstance(node, Rel):
        names = {str(node.rel.name)}
        if node.at is not None:
            names.add(node.at)
        for arg in node.args:
            names |= term_names(arg)
        return names
    names = set()
    if isinstance(node, At):
        names.add(node.nominal)
    elif isinstance(node, Store):
        names.add(node.var)
    elif isinstance(node, Exists):
        names.update(v.name for v in node.variables)
    elif isinstance(node, Dia):
        names |= action_modalities(node.action)
    for child in children(node):
        names |= names_in(child)
    return names


def free_constants(node, bound=frozenset()):
    """The nominal names and nullary operations occurring free in a sentence.

    Returns a pair ``(nominals, constants)``.
    """
    nominals, constants = set(), set()

    def visit_term(term, bound):
        if term.at is not None and term.at not in bound:
            nominals.add(term.at)
        if not term.args and term.op.name not in bound:
            constants.add(term.op)
        for arg in term.args:
            visit_term(arg, bound)

    def visit(node, bound):
        if isinstance(node, Nom):
            if node.name not in bound:
                nominals.add(node.name)
        elif isinstance(node, Eq):
            visit_term(node.left, bound)
            visit_term(node.right, bound)
        elif isinstance(node, Rel):
            if node.at is not None and node.at not in bound:
                nominals.add(node.at)
            for arg in node.args:
                visit_term(arg, bound)
        elif isinstance(node, At):
            if node.nominal not in bound:
                nominals.add(node.nominal)
            visit(node.body, bound)
        elif isinstance(node, Store):
            visit(node.body, bound | {node.var})
        elif isinstance(node, Exists):
            visit(node.body, bound | set(v.name for v in node.variables))
        else:
            for child in children(node):
                visit(child, bound)

    visit(node, frozenset(bound))
    return nominals, constants


# Well-sortedness

def check_sentence(sig, sentence):
    """Raises SignatureError unless ``sentence`` is well-sorted over ``sig``.

    Bound variables may not shadow symbols of the signature they extend.
    """
    if isinstance(sentence, Nom):
        if sentence.name not in sig.nominals:
            raise SignatureError('Unknown nominal %s' % sentence.name)
    elif isinstance(sentence, Eq):
        left = term_sort(sig, sentence.left)
        right = term_sort(sig, sentence.right)
        if left != right:
            raise SignatureError('Equation %s relates sorts %s and %s'
                                 % (sentence, left, right))
    elif isinstance(sentence, Rel):
        rel = sentence.rel
        if rel not in sig.body.rels:
            raise SignatureError('Unknown relation %s' % rel.name)
        if len(sentence.args) != len(rel.arity):
            raise SignatureError('%s expects %d arguments, got %d'
                                 % (rel.name, len(rel.arity),
                                    len(sentence.args)))
        if sentence.at is not None:
            if sentence.at not in sig.nominals:
                raise SignatureError('Unknown nominal %s' % sentence.at)
            if sig.is_rigid_rel(rel):
                raise SignatureError('Rigid relation %s cannot be retrieved'
                                     % rel.name)
            expected = tuple(at_sort(sig, sentence.at, a) for a in rel.arity)
        else:
            expected = rel.arity
        for arg, sort in zip(sentence.args, expected):
            actual = term_sort(sig, arg)
            if actual != sort:
                raise SignatureError(
                    'Argument %s of %s has sort %s, expected %s'
                    % (arg, rel.name, actual, sort))
    elif isinstance(sentence, At):
        if sentence.nominal not in sig.nominals:
            raise SignatureError('Unknown nominal %s' % sentence.nominal)
        check_sentence(sig, sentence.body)
    elif isinstance(sentence, (Not, Or)):
        for child in children(sentence):
            check_sentence(sig, child)
    elif isinstance(sentence, Store):
        check_sentence(extend(sig, [Variable(sentence.var, ANY)]),
                       sentence.body)
    elif isinstance(sentence, Exists):
        check_sentence(extend(sig, sentence.variables), sentence.body)
    elif isinstance(sentence, Dia):
        unknown = action_modalities(sentence.action) - sig.modalities
        if unknown:
            raise SignatureError('Unknown modality %s'
                                 % ', '.join(sorted(unknown)))
        check_sentence(sig, sentence.body)
    else:
        raise SignatureError('Not a sentence: %r' % (sentence,))


# Substitutions

class Substitution(object):
    """Maps nominal variables to nominals and rigid variables to terms.

    ``assignment`` is keyed by :class:`Variable`; ``target_vars`` are the
    constants the values may mention.
    """

    def __init__(self, assignment, target_vars=frozenset()):
        self.assignment = dict(assignment)
        self.target_vars = frozenset(target_vars)
        self._nominals = {}
        self._constants = {}
        for var, value in self.assignment.items():
            if var.sort == ANY:
                if not isinstance(value, str):
                    raise SignatureError(
                        'Nominal variable %s must map to a nominal, got %s'
                        % (var.name, value))
                self._nominals[var.name] = value
            else:
                if not isinstance(value, Apply):
                    raise SignatureError(
                        'Variable %s must map to a term, got %r'
                        % (var.name, value))
                self._constants[var.decl] = value

    def __repr__(self):
        items = ', '.join('%s:%s -> %s' % (v.name, v.sort, value)
                          for v, value in sorted(self.assignment.items()))
        return '<Substitution %s>' % items

    def __eq__(self, other):
        return (isinstance(other, Substitution)
                and self.assignment == other.assignment)

    def __hash__(self):
        return hash(frozenset(self.assignment.items()))

    @property
    def domain(self):
        return frozenset(self.assignment)

    def value_names(self):
        names = set()
        for value in self.assignment.values():
            if isinstance(value, str):
                names.add(value)
            else:
                names |= term_names(value)
        return names

    def without(self, names):
        return Substitution(
            dict((v, value) for v, value in self.assignment.items()
                 if v.name not in names), self.target_vars)

    def nominal(self, name):
        return self._nominals.get(name, name)

    def term(self, term):
        if not term.args and term.at is None and term.op in self._constants:
            return self._constants[term.op]
        at = term.at
        if at is not None:
            at = self._nominals.get(at, at)
        return Apply(term.op, tuple(self.term(a) for a in term.args), at)

    def __call__(self, sentence):
        if not self.assignment:
            return sentence
        if isinstance(sentence, Nom):
            return Nom(self.nominal(sentence.name))
        if isinstance(sentence, Eq):
            return Eq(self.term(sentence.left), self.term(sentence.right))
        if isinstance(sentence, Rel):
            at = sentence.at
            if at is not None:
                at = self.nominal(at)
            return Rel(sentence.rel, tuple(self.term(a)
                                           for a in sentence.args), at)
        if isinstance(sentence, At):
            return At(self.nominal(sentence.nominal), self(sentence.body))
        if isinstance(sentence, Not):
            return Not(self(sentence.body))
        if isinstance(sentence, Or):
            return Or(frozenset(self(m) for m in sentence.members))
        if isinstance(sentence, Dia):
            return Dia(sentence.action, self(sentence.body))
        if isinstance(sentence, Store):
            inner = self.without({sentence.var})
            var, body = sentence.var, sentence.body
            if var in inner.value_names():
                var = fresh_name(var, inner.value_names() | names_in(body))
                body = rename_nominal(body, sentence.var, var)
            return Store(var, inner(body))
        if isinstance(sentence, Exists):
            inner = self.without(set(v.name for v in sentence.variables))
            clashes = inner.value_names()
            variables, body = set(), sentence.body
            taken = clashes | names_in(body)
            for var in sorted(sentence.variables):
                if var.name in clashes:
                    new = Variable(fresh_name(var.name, taken), var.sort)
                    taken.add(new.name)
                    body = rename_variable(body, var, new)
                    var = new
                variables.add(var)
            return Exists(frozenset(variables), inner(body))
        raise SignatureError('Not a sentence: %r' % (sentence,))

    def compose(self, other):
        """``self`` followed by ``other``."""
        assignment = {}
        for var, value in self.assignment.items():
            if isinstance(value, str):
                assignment[var] = other.nominal(value)
            else:
                assignment[var] = other.term(value)
        for var, value in other.assignment.items():
            assignment.setdefault(var, value)
        return Substitution(assignment, other.target_vars)


def rename_nominal(sentence, old, new):
    return Substitution({Variable(old, ANY): new})(sentence)


def rename_variable(sentence, old, new):
    if old.sort == ANY:
        return rename_nominal(sentence, old.name, new.name)
    return Substitution({old: var_term(new)})(sentence)


# Translation along signature morphisms

def translate_term(chi, term):
    op = chi.op_map.get(term.op)
    if op is None:
        op = OpDecl(term.op.name, (), chi.sort(term.op.result))
    at = term.at
    if at is not None:
        at = chi.nominal_map.get(at, at)
    return Apply(op, tuple(translate_term(chi, a) for a in term.args), at)


def translate_action(chi, action):
    if isinstance(action, Modality):
        return Modality(chi.modality(action.name))
    if isinstance(action, Star):
        return Star(translate_action(chi, action.body))
    if isinstance(action, Seq):
        return Seq(translate_action(chi, action.first),
                   translate_action(chi, action.second))
    return Choice(translate_action(chi, action.left),
                  translate_action(chi, action.right))


def translate(chi, sentence):
    """The symbolwise image of ``sentence`` along ``chi``."""
    if isinstance(sentence, Nom):
        return Nom(chi.nominal_map.get(sentence.name, sentence.name))
    if isinstance(sentence, Eq):
        return Eq(translate_term(chi, sentence.left),
                  translate_term(chi, sentence.right))
    if isinstance(sentence, Rel):
        at = sentence.at
        if at is not None:
            at = chi.nominal_map.get(at, at)
        return Rel(chi.rel(sentence.rel),
                   tuple(translate_term(chi, a) for a in sentence.args), at)
    if isinstance(sentence, At):
        return At(chi.nominal_map.get(sentence.nominal, sentence.nominal),
                  translate(chi, sentence.body))
    if isinstance(sentence, Not):
        return Not(translate(chi, sentence.body))
    if isinstance(sentence, Or):
        return Or(frozenset(translate(chi, m) for m in sentence.members))
    if isinstance(sentence, Store):
        return Store(sentence.var, translate(chi, sentence.body))
    if isinstance(sentence, Exists):
        return Exists(frozenset(Variable(v.name, chi.sort(v.sort))
                                for v in sentence.variables),
                      translate(chi, sentence.body))
    if isinstance(sentence, Dia):
        return Dia(translate_action(chi, sentence.action),
                   translate(chi, sentence.body))
    raise SignatureError('Not a sentence: %r' % (sentence,))


# Rigidification

def rigidify_term(sig, k, term):
    args = tuple(rigidify_term(sig, k, a) for a in term.args)
    if term.at is not None or is_rigid_op(sig, term.op):
        return Apply(term.op, args, term.at)
    return Apply(term.op, args, k)


def rigidify(sig, k, sentence):
    """Pins every flexible symbol of ``sentence`` to the world named ``k``.

    Defined on sentences without store and without possibility other than
    ``<l> k'`` for a modality ``l`` and a nominal ``k'``.
    """
    if isinstance(sentence, Nom):
        return At(k, sentence)
    if isinstance(sentence, Dia):
        if isinstance(sentence.action, Modality) and \
                isinstance(sentence.body, Nom):
            return At(k, sentence)
        raise UnsupportedConstruct('Cannot rigidify possibility %s'
                                   % sentence)
    if isinstance(sentence, Eq):
        return Eq(rigidify_term(sig, k, sentence.left),
                  rigidify_term(sig, k, sentence.right))
    if isinstance(sentence, Rel):
        args = tuple(rigidify_term(sig, k, a) for a in sentence.args)
        if sentence.at is None and not sig.is_rigid_rel(sentence.rel):
            return Rel(sentence.rel, args, k)
        return Rel(sentence.rel, args, sentence.at)
    if isinstance(sentence, Not):
        return Not(rigidify(sig, k, sentence.body))
    if isinstance(sentence, Or):
        return Or(frozenset(rigidify(sig, k, m) for m in sentence.members))
    if isinstance(sentence, At):
        return rigidify(sig, sentence.nominal, sentence.body)
    if isinstance(sentence, Exists):
        return Exists(sentence.variables, rigidify(sig, k, sentence.body))
    raise UnsupportedConstruct('Cannot rigidify %s' % sentence)


# Fragments

HFOLR, HDPL, RFOHL, HFOLS = 'HFOLR', 'HDPL', 'RFOHL', 'HFOLS'
FRAGMENTS = (HFOLR, HDPL, RFOHL, HFOLS)


def _walk(sentence):
    yield sentence
    for child in children(sentence):
        for node in _walk(child):
            yield node


def _atomic_actions_only(sentence):
    return all(isinstance(n.action, Modality)
               for n in _walk(sentence) if isinstance(n, Dia))


def _open_atoms_only(sentence):
    for node in _walk(sentence):
        if isinstance(node, Rel):
            if node.at is not None:
                return False
            terms = node.args
        elif isinstance(node, Eq):
            terms = (node.left, node.right)
        else:
            continue
        for term in terms:
            if any(t.at is not None for t in subterms(term)):
                return False
    return True


def fragment_member(fragment, sentence, sig):
    if fragment == HFOLR:
        return _atomic_actions_only(sentence)
    if fragment == HDPL:
        if sig.sorts:
            return False
        return all(isinstance(n, (Nom, Rel, At, Not, Or, Dia))
                   for n in _walk(sentence))
    if fragment == RFOHL:
        if len(sig.modalities) != 1 or len(sig.sorts) != 1:
            return False
        if sig.rigid.rels:
            return False
        variables = set(v.decl for v in sig.variables)
        if any(op not in variables for op in sig.rigid.ops):
            return False
        return _atomic_actions_only(sentence)
    if fragment == HFOLS:
        return _atomic_actions_only(sentence) and _open_atoms_only(sentence)
    raise ValueError('Unknown fragment %s' % fragment)


# Until and subsentences

def desugar_until(phi, psi, modality, taken=()):
    """``store x . <l> store y . (phi and @x [l] (<l> y -> psi))``."""
    taken = set(taken) | names_in(phi) | names_in(psi) | {modality}
    x = fresh_name('x', taken)
    taken.add(x)
    y = fresh_name('y', taken)
    inner = conj(phi, At(x, box(Modality(modality),
                                implies(dia(modality, Nom(y)), psi))))
    return Store(x, dia(modality, Store(y, inner)))


def subsentences(sentence, bound, variables=frozenset()):
    """The subsentence closure of ``sentence``.

    Returns a set of ``(sentence, variables)`` pairs where ``variables``
    are the binders that the signature must be extended with.  ``<a*>g``
    is unfolded into ``<a^n>g`` for ``1 <= n <= bound``.
    """
    result = set()
    todo = [(sentence, frozenset(variables))]
    while todo:
        item = todo.pop()
        if item in result:
            continue
        result.add(item)
        node, xs = item
        if isinstance(node, Dia):
            action = node.action
            todo.append((node.body, xs))
            if isinstance(action, Seq):
                todo.append((Dia(action.first, node.body), xs))
                todo.append((Dia(action.second, node.body), xs))
            elif isinstance(action, Choice):
                todo.append((Dia(action.left, node.body), xs))
                todo.append((Dia(action.right, node.body), xs))
            elif isinstance(action, Star):
                for n in range(1, bound + 1):
                    todo.append((Dia(power(action.body, n), node.body), xs))
        elif isinstance(node, Store):
            todo.append((node.body, xs | {Variable(node.var, ANY)}))
        elif isinstance(node, Exists):
            todo.append((node.body, xs | node.variables))
        else:
            for child in children(node):
                todo.append((child, xs))
    return result
