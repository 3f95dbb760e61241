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

"""Finite Kripke structures and everything that is evaluated on them.

Worlds and elements are strings.  Tables of rigid symbols are keyed by
``(symbol, None)`` and shared by every world, so the sharing condition
holds by construction; tables of flexible symbols are keyed by
``(symbol, world)``.
"""

import collections
import dataclasses
import enum
import itertools
import logging

from hdfolr.exceptions import LoadError, UnsupportedConstruct, VoidSignature
from hdfolr.signatures import ANY, at_sort, extend, forget, is_non_void
from hdfolr import syntax
from hdfolr.syntax import (At, Choice, Dia, Eq, Exists, Modality, Nom, Not,
                           Or, Rel, Seq, Star, Store)

logger = logging.getLogger('hdfolr')


class Verdict(enum.Enum):
    HOLDS = 'holds'
    FAILS = 'fails'
    UNKNOWN = 'unknown'

    def __bool__(self):
        return self is Verdict.HOLDS

    @classmethod
    def of(cls, value):
        if value is None:
            return cls.UNKNOWN
        return cls.HOLDS if value else cls.FAILS

    def negate(self):
        if self is Verdict.HOLDS:
            return Verdict.FAILS
        if self is Verdict.FAILS:
            return Verdict.HOLDS
        return self


HOLDS, FAILS, UNKNOWN = Verdict.HOLDS, Verdict.FAILS, Verdict.UNKNOWN


class KripkeStructure(object):

    partial = False

    def __init__(self, signature, worlds, nominals, modalities=None,
                 carriers=None, ops=None, rels=None, truncated=False):
        self.signature = signature
        self.worlds = tuple(worlds)
        self.nominals = dict(nominals)
        self.modalities = dict((m, frozenset((modalities or {}).get(m, ())))
                               for m in signature.modalities)
        self.carriers = dict((key, tuple(elements))
                             for key, elements in (carriers or {}).items())
        self.ops = dict((key, dict(table))
                        for key, table in (ops or {}).items())
        self.rels = dict((key, frozenset(map(tuple, table)))
                         for key, table in (rels or {}).items())
        self.truncated = truncated
        self._actions = {}

    def __repr__(self):
        return '<KripkeStructure worlds=%s>' % ', '.join(self.worlds)

    def __eq__(self, other):
        return isinstance(other, KripkeStructure) and \
            self._state() == other._state()

    __hash__ = None

    def _state(self):
        return (self.signature, self.worlds, self.nominals, self.modalities,
                self.carriers, self.ops, self.rels)

    def __getstate__(self):
        state = self.__dict__.copy()
        state['_actions'] = {}
        return state

    def replace(self, **changes):
        fields = dict(signature=self.signature, worlds=self.worlds,
                      nominals=self.nominals, modalities=self.modalities,
                      carriers=self.carriers, ops=self.ops, rels=self.rels,
                      truncated=self.truncated)
        fields.update(changes)
        return KripkeStructure(**fields)

    # lookups; None means "not determined" and only happens on partial
    # structures

    def key(self, rigid, world):
        return None if rigid else world

    def carrier(self, sort, world=None):
        if self.signature.is_rigid_sort(sort):
            return self.carriers[(sort, None)]
        return self.carriers[(sort, world)]

    def nominal(self, name):
        return self.nominals.get(name)

    def apply(self, op, world, args):
        rigid = op in self.signature.rigid.ops
        table = self.ops.get((op, None if rigid else world))
        if table is None:
            return None
        return table.get(tuple(args))

    def holds(self, rel, world, args):
        rigid = rel in self.signature.rigid.rels
        return tuple(args) in self.rels.get((rel, None if rigid else world),
                                            ())

    def edges(self, modality):
        """``(definite, possible)`` accessibility pairs."""
        pairs = self.modalities.get(modality, frozenset())
        return pairs, pairs

    def action(self, action):
        cached = self._actions.get(action)
        if cached is None:
            cached = self._action(action)
            if not self.partial:
                self._actions[action] = cached
        return cached

    def _action(self, action):
        if isinstance(action, Modality):
            definite, possible = self.edges(action.name)
        elif isinstance(action, Seq):
            first, second = self.action(action.first), self.action(
                action.second)
            definite = compose(first[0], second[0])
            possible = compose(first[1], second[1])
        elif isinstance(action, Choice):
            left, right = self.action(action.left), self.action(action.right)
            definite = left[0] | right[0]
            possible = left[1] | right[1]
        elif isinstance(action, Star):
            body = self.action(action.body)
            definite = closure(body[0], self.worlds)
            possible = closure(body[1], self.worlds)
        else:
            raise UnsupportedConstruct('Not an action: %r' % (action,))
        return (successor_map(definite), successor_map(possible))

    def successors(self, action, world):
        definite, possible = self.action(action)
        return definite.get(world, ()), possible.get(world, ())

    def validate(self):
        """Raises LoadError unless this is a well-formed structure."""
        sig = self.signature
        if not self.worlds:
            raise LoadError('A Kripke structure needs at least one world')
        worlds = set(self.worlds)
        for k in sorted(sig.nominals):
            if self.nominals.get(k) not in worlds:
                raise LoadError('Nominal %s does not denote a world' % k)
        for m, pairs in sorted(self.modalities.items()):
            for pair in pairs:
                if not set(pair) <= worlds:
                    raise LoadError('Modality %s relates unknown worlds %s'
                                    % (m, pair))
        keys = []
        for sort in sorted(sig.sorts):
            if sig.is_rigid_sort(sort):
                keys.append((sort, None))
            else:
                keys.extend((sort, w) for w in self.worlds)
        for key in keys:
            if not self.carriers.get(key):
                raise LoadError('Empty carrier for sort %s%s'
                                % (key[0], _at(key[1])))
        for op in sorted(sig.body.ops):
            rigid = op in sig.rigid.ops
            for w in ([None] if rigid else self.worlds):
                table = self.ops.get((op, w))
                if table is None:
                    raise LoadError('Missing table for %s%s'
                                    % (op.name, _at(w)))
                domains = [self.carrier(a, w) for a in op.arity]
                result = set(self.carrier(op.result, w))
                for args in itertools.product(*domains):
                    if table.get(args) not in result:
                        raise LoadError('Table for %s%s is not total at %s'
                                        % (op.name, _at(w), args))
        for rel in sorted(sig.body.rels):
            rigid = rel in sig.rigid.rels
            for w in ([None] if rigid else self.worlds):
                domains = [set(self.carrier(a, w)) for a in rel.arity]
                for row in self.rels.get((rel, w), ()):
                    if len(row) != len(domains) or not all(
                            e in d for e, d in zip(row, domains)):
                        raise LoadError('Row %s of %s%s is outside the '
                                        'carriers' % (row, rel.name, _at(w)))
        return self

    def expand(self, assignment):
        """The expansion interpreting each variable of ``assignment``."""
        sig = extend(self.signature, assignment)
        nominals = dict(self.nominals)
        ops = dict(self.ops)
        for var, value in assignment.items():
            if var.sort == ANY:
                nominals[var.name] = value
            else:
                ops[(var.decl, None)] = {(): value}
        return KripkeStructure(sig, self.worlds, nominals, self.modalities,
                               self.carriers, ops, self.rels, self.truncated)


def _at(world):
    return '' if world is None else ' at %s' % world


class PartialStructure(KripkeStructure):
    """A structure under construction.

    Missing table cells are undetermined; relations and modalities map
    rows to booleans.
    """

    partial = True

    def __init__(self, signature, worlds, carriers):
        self.signature = signature
        self.worlds = tuple(worlds)
        self.nominals = {}
        self.modalities = dict((m, {}) for m in signature.modalities)
        self.carriers = dict((key, tuple(e)) for key, e in carriers.items())
        self.ops = {}
        self.rels = {}
        self.truncated = False
        self._actions = {}

    def holds(self, rel, world, args):
        rigid = rel in self.signature.rigid.rels
        table = self.rels.get((rel, None if rigid else world))
        if table is None:
            return None
        return table.get(tuple(args))

    def edges(self, modality):
        table = self.modalities[modality]
        definite = frozenset(p for p, v in table.items() if v)
        possible = frozenset(p for p in itertools.product(self.worlds,
                                                          repeat=2)
                             if table.get(p, True))
        return definite, possible

    def freeze(self):
        """The total structure; every cell must be determined."""
        modalities = dict((m, [p for p, v in t.items() if v])
                          for m, t in self.modalities.items())
        rels = dict((key, [row for row, v in t.items() if v])
                    for key, t in self.rels.items())
        return KripkeStructure(self.signature, self.worlds, self.nominals,
                               modalities, self.carriers, self.ops, rels)


def compose(first, second):
    index = collections.defaultdict(set)
    for a, b in second:
        index[a].add(b)
    return frozenset((a, c) for a, b in first for c in index.get(b, ()))


def closure(pairs, worlds):
    """Reflexive-transitive closure of ``pairs`` over ``worlds``."""
    index = successor_map(pairs)
    result = set()
    for start in worlds:
        seen, todo = {start}, [start]
        while todo:
            for nxt in index.get(todo.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        result.update((start, w) for w in seen)
    return frozenset(result)


def successor_map(pairs):
    index = collections.defaultdict(set)
    for a, b in pairs:
        index[a].add(b)
    return dict((a, frozenset(bs)) for a, bs in index.items())


def eval_action(m, action):
    """The accessibility relation of ``action`` as a set of pairs."""
    definite, _ = m.action(action)
    return frozenset((a, b) for a, bs in definite.items() for b in bs)


# Evaluation

def _world_of(m, name, env):
    if name in env:
        return env[name]
    return m.nominal(name)


def eval_term(m, world, term, env=None):
    """The element denoted by ``term`` at ``world``, None if undetermined."""
    env = env or {}
    if not term.args and term.at is None and term.op in env:
        return env[term.op]
    args = []
    for arg in term.args:
        value = eval_term(m, world, arg, env)
        if value is None:
            return None
        args.append(value)
    if term.at is not None:
        world = _world_of(m, term.at, env)
        if world is None:
            return None
    return m.apply(term.op, world, args)


def _assignments(m, variables):
    variables = sorted(variables)
    choices = []
    for var in variables:
        if var.sort == ANY:
            choices.append(m.worlds)
        else:
            choices.append(m.carrier(var.sort))
    for values in itertools.product(*choices):
        yield dict(zip(variables, values))


def _env_key(var):
    return var.name if var.sort == ANY else var.decl


def evaluate(m, world, sentence, env=None):
    """Three-valued local satisfaction of ``sentence`` at ``world``."""
    env = env or {}
    if isinstance(sentence, Nom):
        target = _world_of(m, sentence.name, env)
        if target is None:
            return UNKNOWN
        return HOLDS if target == world else FAILS
    if isinstance(sentence, Eq):
        left = eval_term(m, world, sentence.left, env)
        right = eval_term(m, world, sentence.right, env)
        if left is None or right is None:
            return UNKNOWN
        return HOLDS if left == right else FAILS
    if isinstance(sentence, Rel):
        args = []
        for arg in sentence.args:
            value = eval_term(m, world, arg, env)
            if value is None:
                return UNKNOWN
            args.append(value)
        target = world
        if sentence.at is not None:
            target = _world_of(m, sentence.at, env)
            if target is None:
                return UNKNOWN
        return Verdict.of(m.holds(sentence.rel, target, args))
    if isinstance(sentence, At):
        target = _world_of(m, sentence.nominal, env)
        if target is not None:
            return evaluate(m, target, sentence.body, env)
        verdicts = set(evaluate(m, w, sentence.body, env) for w in m.worlds)
        return verdicts.pop() if len(verdicts) == 1 else UNKNOWN
    if isinstance(sentence, Not):
        return evaluate(m, world, sentence.body, env).negate()
    if isinstance(sentence, Or):
        result = FAILS
        for member in sentence.sorted_members():
            verdict = evaluate(m, world, member, env)
            if verdict is HOLDS:
                return HOLDS
            if verdict is UNKNOWN:
                result = UNKNOWN
        return result
    if isinstance(sentence, Store):
        inner = dict(env)
        inner[sentence.var] = world
        return evaluate(m, world, sentence.body, inner)
    if isinstance(sentence, Exists):
        result = FAILS
        for assignment in _assignments(m, sentence.variables):
            inner = dict(env)
            for var, value in assignment.items():
                inner[_env_key(var)] = value
            verdict = evaluate(m, world, sentence.body, inner)
            if verdict is HOLDS:
                return HOLDS
            if verdict is UNKNOWN:
                result = UNKNOWN
        return result
    if isinstance(sentence, Dia):
        definite, possible = m.successors(sentence.action, world)
        result = FAILS
        for target in sorted(possible):
            verdict = evaluate(m, target, sentence.body, env)
            if verdict is HOLDS and target in definite:
                return HOLDS
            if verdict is not FAILS:
                result = UNKNOWN
        return result
    raise UnsupportedConstruct('Not a sentence: %r' % (sentence,))


def sat_local(m, world, sentence):
    return evaluate(m, world, sentence) is HOLDS


def sat_global(m, sentence):
    return all(sat_local(m, w, sentence) for w in m.worlds)


def sat_theory(m, sentences):
    return all(sat_global(m, s) for s in sentences)


def until_holds(m, world, phi, psi, modality):
    """Some world ``v`` on a ``modality`` path from ``world`` satisfies
    ``phi`` and every world strictly between them on a path satisfies
    ``psi``.
    """
    step = Modality(modality)
    paths = Seq(step, Star(step))
    later = m.successors(paths, world)[0]
    for target in sorted(later):
        if not sat_local(m, target, phi):
            continue
        between = [u for u in later if target in m.successors(paths, u)[0]]
        if all(sat_local(m, u, psi) for u in between):
            return True
    return False


def random_structure(sig, rng, budget):
    """A random structure over ``sig`` within ``budget``, drawn with
    ``rng``.
    """
    count = rng.randint(1, budget.max_worlds)
    worlds = tuple('w%d' % i for i in range(count))
    nominals = dict((k, rng.choice(worlds)) for k in sig.sorted_nominals())
    modalities = dict(
        (name, [(a, b) for a in worlds for b in worlds if rng.random() < 0.5])
        for name in sorted(sig.modalities))
    carriers = {}
    for sort in sorted(sig.sorts):
        for w in ([None] if sig.is_rigid_sort(sort) else worlds):
            size = rng.randint(1, budget.max_carrier)
            carriers[(sort, w)] = tuple('%s%d' % (str(sort).lower(), i)
                                        for i in range(size))

    def carrier(sort, w):
        return carriers[(sort, None if sig.is_rigid_sort(sort) else w)]

    ops, rels = {}, {}
    for op in sorted(sig.body.ops):
        for w in ([None] if op in sig.rigid.ops else worlds):
            at = w or worlds[0]
            domains = [carrier(a, at) for a in op.arity]
            ops[(op, w)] = dict(
                (args, rng.choice(carrier(op.result, at)))
                for args in itertools.product(*domains))
    for rel in sorted(sig.body.rels):
        for w in ([None] if rel in sig.rigid.rels else worlds):
            at = w or worlds[0]
            domains = [carrier(a, at) for a in rel.arity]
            rels[(rel, w)] = [args for args in itertools.product(*domains)
                              if rng.random() < 0.5]
    return KripkeStructure(sig, worlds, nominals, modalities, carriers, ops,
                           rels)


# Reducts and expansions

def reduct(m, chi):
    """The reduct of ``m`` (over ``chi.target``) to ``chi.source``."""
    sig = chi.source
    nominals = dict((k, m.nominal(chi.nominal(k))) for k in sig.nominals)
    modalities = dict((name, eval_action(m, Modality(chi.modality(name))))
                      for name in sig.modalities)
    carriers, ops, rels = {}, {}, {}
    for sort in sig.sorts:
        for w in ([None] if sig.is_rigid_sort(sort) else m.worlds):
            carriers[(sort, w)] = m.carrier(chi.sort(sort), w or m.worlds[0])
    for op in sig.body.ops:
        image = chi.op(op)
        for w in ([None] if op in sig.rigid.ops else m.worlds):
            source = w or m.worlds[0]
            domains = [m.carrier(chi.sort(a), source) for a in op.arity]
            ops[(op, w)] = dict(
                (args, m.apply(image, source, args))
                for args in itertools.product(*domains))
    for rel in sig.body.rels:
        image = chi.rel(rel)
        for w in ([None] if rel in sig.rigid.rels else m.worlds):
            source = w or m.worlds[0]
            domains = [m.carrier(chi.sort(a), source) for a in rel.arity]
            rels[(rel, w)] = [args for args in itertools.product(*domains)
                              if m.holds(image, source, args)]
    return KripkeStructure(sig, m.worlds, nominals, modalities, carriers,
                           ops, rels, m.truncated)


def reduct_subst(m, theta, variables):
    """The reduct of ``m`` over Delta[C2] to Delta[C1] along ``theta``.

    ``variables`` is C1; each of them is interpreted as its image.
    """
    base = forget(m.signature, m.signature.variables)
    nominals = dict((k, m.nominal(k)) for k in base.nominals)
    ops = dict((key, table) for key, table in m.ops.items()
               if key[0] in base.body.ops)
    assignment = {}
    for var in variables:
        value = theta.assignment.get(var)
        if var.sort == ANY:
            assignment[var] = m.nominal(value if value is not None
                                        else var.name)
        else:
            if value is None:
                value = syntax.var_term(var)
            assignment[var] = eval_term(m, m.worlds[0], value)
    core = KripkeStructure(base, m.worlds, nominals, m.modalities,
                           m.carriers, ops, m.rels, m.truncated)
    return core.expand(assignment)


def expansions(m, variables):
    """Every expansion of ``m`` to Delta[variables], in a fixed order."""
    for assignment in _assignments(m, variables):
        yield m.expand(assignment)


# Basic sentences and the term model

def is_extended_atom(sentence):
    if isinstance(sentence, (Nom, Eq, Rel)):
        return True
    return (isinstance(sentence, Dia)
            and isinstance(sentence.action, Modality)
            and isinstance(sentence.body, Nom))


def is_basic(sentence):
    if isinstance(sentence, At):
        sentence = sentence.body
    return is_extended_atom(sentence)


def basic_set(sentences):
    sentences = frozenset(sentences)
    for sentence in sentences:
        if not is_basic(sentence):
            raise UnsupportedConstruct('%s is not a basic sentence'
                                       % sentence)
    return sentences


def at_closure(sig, sentences):
    """``@k g`` for every nominal ``k`` and every bare ``g``."""
    result = set()
    for sentence in basic_set(sentences):
        if isinstance(sentence, At):
            result.add(sentence)
        else:
            result.update(At(k, sentence) for k in sig.nominals)
    return frozenset(result)


class _UnionFind(object):

    def __init__(self, rank=None):
        self.parent = {}
        self.rank = rank

    def find(self, item):
        parent = self.parent.setdefault(item, item)
        if parent == item:
            return item
        root = self.find(parent)
        self.parent[item] = root
        return root

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a == b:
            return False
        if self.rank is not None and self.rank(b) < self.rank(a):
            a, b = b, a
        self.parent[b] = a
        return True


def _term_key(term):
    text = str(term)
    return (syntax.term_depth(term), len(text), text)


def _normalise(sig, rep, term):
    at = term.at
    if at is not None:
        at = rep.get(at, at)
    return syntax.apply_op(sig, term.op,
                           tuple(_normalise(sig, rep, a) for a in term.args),
                           at)


def _ground_terms(sig, worlds, depth):
    """Rigid terms up to ``depth`` as a dict term -> hybrid sort."""
    instances = []
    for op in sorted(sig.body.ops):
        if op in sig.rigid.ops:
            instances.append((op, None, op.arity, op.result))
        else:
            for w in worlds:
                instances.append((op, w,
                                  tuple(at_sort(sig, w, a) for a in op.arity),
                                  at_sort(sig, w, op.result)))
    sorts = {}
    by_sort = collections.defaultdict(list)
    for level in range(depth + 1):
        fresh = []
        for op, w, arity, result in instances:
            if level == 0 and arity:
                continue
            domains = [list(by_sort.get(a, ())) for a in arity]
            for args in itertools.product(*domains):
                term = syntax.Apply(op, args, w)
                if term not in sorts:
                    fresh.append((term, result))
        for term, result in fresh:
            sorts[term] = result
            by_sort[result].append(term)
        if not fresh:
            break
    return sorts


def rigid_terms(sig, depth):
    """Ground rigid terms up to ``depth`` by rigid sort.

    Flexible operations are pinned at every nominal.
    """
    by_sort = collections.defaultdict(list)
    for term, sort in _ground_terms(sig, sig.sorted_nominals(),
                                    depth).items():
        if not isinstance(sort, tuple):
            by_sort[sort].append(term)
    return dict(by_sort)


def basic_model(sig, sentences=(), depth=2, pool_terms=()):
    """The term model of a set of basic sentences.

    Worlds are nominals modulo the asserted ``@k k'``, named by the first
    nominal of their class; elements are rigid terms up to ``depth`` (plus
    the terms of ``sentences`` and ``pool_terms``) modulo the congruence
    generated by the asserted equations, named by their smallest term.
    """
    if not is_non_void(sig):
        raise VoidSignature('Signature has no nominals or an empty sort')
    closed = at_closure(sig, sentences)
    order = sig.sorted_nominals()
    position = dict((k, i) for i, k in enumerate(order))
    worlds_uf = _UnionFind(rank=position.get)
    for k in order:
        worlds_uf.find(k)
    for sentence in closed:
        if isinstance(sentence.body, Nom):
            worlds_uf.union(sentence.nominal, sentence.body.name)
    rep = dict((k, worlds_uf.find(k)) for k in order)
    worlds = sorted(set(rep.values()), key=position.get)

    modalities = collections.defaultdict(set)
    equations, relations = [], []
    for sentence in sorted(closed, key=str):
        k, atom = sentence.nominal, sentence.body
        if isinstance(atom, Dia):
            modalities[atom.action.name].add((rep[k], rep[atom.body.name]))
        elif isinstance(atom, (Eq, Rel)):
            rigid = syntax.rigidify(sig, k, atom)
            if isinstance(rigid, Eq):
                equations.append((_normalise(sig, rep, rigid.left),
                                  _normalise(sig, rep, rigid.right)))
            else:
                relations.append(syntax.Rel(
                    rigid.rel,
                    tuple(_normalise(sig, rep, a) for a in rigid.args),
                    rep.get(rigid.at, rigid.at)))
    extra = [t for pair in equations for t in pair]
    extra.extend(a for r in relations for a in r.args)
    extra.extend(_normalise(sig, rep, t) for t in pool_terms)

    for level in range(depth, depth + len(sig.sorts) + 2):
        universe = _ground_terms(sig, worlds, level)
        for term in extra:
            for sub in syntax.subterms(term):
                if sub not in universe:
                    universe[sub] = syntax.term_sort(sig, sub)
        inhabited = set(universe.values())
        wanted = set()
        for sort in sig.sorts:
            if sig.is_rigid_sort(sort):
                wanted.add(sort)
            else:
                wanted.update((w, sort) for w in worlds)
        if wanted <= inhabited:
            break
        logger.debug('Raising term depth to %d to inhabit every sort',
                     level + 1)
    else:
        raise VoidSignature('Could not inhabit %s'
                            % ', '.join(map(str, wanted - inhabited)))

    terms = sorted(universe, key=_term_key)
    rank = dict((t, i) for i, t in enumerate(terms))
    uf = _UnionFind(rank=rank.get)
    for term in terms:
        uf.find(term)
    for left, right in equations:
        uf.union(left, right)
    changed = True
    while changed:
        changed = False
        table = {}
        for term in terms:
            if not term.args:
                continue
            key = (term.op, term.at, tuple(uf.find(a) for a in term.args))
            other = table.setdefault(key, term)
            if uf.union(other, term):
                changed = True

    name = dict((t, str(uf.find(t))) for t in terms)
    carriers = collections.defaultdict(list)
    for term in terms:
        sort = universe[term]
        key = (sort, None) if not isinstance(sort, tuple) else \
            (sort[1], sort[0])
        if name[term] not in carriers[key]:
            carriers[key].append(name[term])
    lookup = dict(((t.op, t.at, tuple(name[a] for a in t.args)), name[t])
                  for t in terms)

    truncated = []
    ops = {}
    for op in sorted(sig.body.ops):
        for w in ([None] if op in sig.rigid.ops else worlds):
            domains = [_carrier(sig, carriers, a, w) for a in op.arity]
            fallback = _carrier(sig, carriers, op.result, w)[0]
            table = {}
            for args in itertools.product(*domains):
                value = lookup.get((op, w, args))
                if value is None:
                    truncated.append((op.name, args))
                    value = fallback
                table[args] = value
            ops[(op, w)] = table
    if truncated:
        logger.warning('Term universe truncated at depth %d: %d cells '
                       'defaulted, first %s%s', depth, len(truncated),
                       truncated[0][0], truncated[0][1])
    rels = collections.defaultdict(set)
    for relation in relations:
        w = None if relation.rel in sig.rigid.rels else relation.at
        rels[(relation.rel, w)].add(tuple(name[a] for a in relation.args))
    nominals = dict((k, rep[k]) for k in order)
    model = KripkeStructure(sig, worlds, nominals, modalities, carriers, ops,
                            rels, truncated=bool(truncated))
    logger.debug('Basic model with %d worlds and %d elements',
                 len(worlds), len(set(name.values())))
    return model


def _carrier(sig, carriers, sort, world):
    if sig.is_rigid_sort(sort):
        return carriers[(sort, None)]
    return carriers[(sort, world)]


def initial_model(sig, depth=2):
    return basic_model(sig, (), depth)


# Homomorphisms

@dataclasses.dataclass
class Homomorphism(object):
    worlds: dict
    elements: dict

    def image(self, sort, world, element):
        return self.elements[(sort, world, element)]


def _element_keys(m):
    keys = []
    for (sort, w), elements in sorted(m.carriers.items(),
                                      key=lambda item: (item[0][0],
                                                        item[0][1] or '')):
        keys.extend((sort, w, e) for e in elements)
    return keys


def find_hom(src, dst):
    """A homomorphism from ``src`` to ``dst`` or None."""
    sig = src.signature
    world_choices = []
    for w in src.worlds:
        named = set(dst.nominal(k) for k in sig.nominals
                    if src.nominal(k) == w)
        if len(named) > 1:
            return None
        world_choices.append(sorted(named) if named else list(dst.worlds))
    keys = _element_keys(src)
    for images in itertools.product(*world_choices):
        hw = dict(zip(src.worlds, images))
        if not all((hw[a], hw[b]) in dst.modalities.get(m, ())
                   for m, pairs in src.modalities.items() for a, b in pairs):
            continue
        found = _find_elements(src, dst, hw, keys)
        if found is not None:
            return Homomorphism(hw, found)
    return None


def _target_world(hw, world, dst):
    return dst.worlds[0] if world is None else hw[world]


def _find_elements(src, dst, hw, keys):
    sig = src.signature
    constraints = collections.defaultdict(list)
    for (op, w), table in src.ops.items():
        if op not in sig.body.ops:
            continue
        for args, value in table.items():
            involved = [(a_sort, w if not sig.is_rigid_sort(a_sort) else None,
                         a) for a_sort, a in zip(op.arity, args)]
            res_w = None if sig.is_rigid_sort(op.result) else w
            involved.append((op.result, res_w, value))
            last = max(keys.index(k) for k in involved)
            constraints[last].append(('op', op, w, involved))
    for (rel, w), rows in src.rels.items():
        for row in rows:
            involved = [(a_sort, w if not sig.is_rigid_sort(a_sort) else None,
                         a) for a_sort, a in zip(rel.arity, row)]
            last = max([keys.index(k) for k in involved] or [-1])
            constraints[last].append(('rel', rel, w, involved))
    for kind, symbol, w, involved in constraints.get(-1, ()):
        if not dst.holds(symbol, _target_world(hw, w, dst), ()):
            return None

    choices = []
    for sort, w, _ in keys:
        target = _target_world(hw, w, dst)
        choices.append(dst.carrier(sort, target))
    assignment = {}

    def consistent(index):
        for kind, symbol, w, involved in constraints.get(index, ()):
            target = _target_world(hw, w, dst)
            images = [assignment[k] for k in involved]
            if kind == 'op':
                if dst.apply(symbol, target, images[:-1]) != images[-1]:
                    return False
            elif not dst.holds(symbol, target, images):
                return False
        return True

    def search(index):
        if index == len(keys):
            return True
        for value in choices[index]:
            assignment[keys[index]] = value
            if consistent(index) and search(index + 1):
                return True
        assignment.pop(keys[index], None)
        return False

    if search(0):
        return dict(assignment)
    return None


def is_surjective(hom, dst):
    if set(hom.worlds.values()) != set(dst.worlds):
        return False
    images = set((sort, w if w is None else hom.worlds[w], value)
                 for (sort, w, _), value in hom.elements.items())
    for key in _element_keys(dst):
        sort, w, _ = key
        if w is not None and w not in hom.worlds.values():
            continue
        if key not in images:
            return False
    return True


# Reachability

def _unnamed_worlds(m):
    named = set(m.nominal(k) for k in m.signature.nominals)
    return [w for w in m.worlds if w not in named]


def _generate(m, ops, seeds, depth):
    """Values reachable from ``seeds`` by ``ops`` in ``depth`` rounds.

    Returns ``(reached, saturated)``.
    """
    sig = m.signature
    reached = collections.defaultdict(set)
    for key, values in seeds.items():
        reached[key].update(values)
    instances = []
    for op in ops:
        if op in sig.rigid.ops:
            instances.append((op, None))
        else:
            for k in sorted(sig.nominals):
                instances.append((op, m.nominal(k)))

    def slot(sort, w):
        return (sort, None) if sig.is_rigid_sort(sort) else (sort, w)

    for _ in range(depth + 1):
        new = []
        for op, w in instances:
            domains = [sorted(reached.get(slot(a, w), ())) for a in op.arity]
            for args in itertools.product(*domains):
                value = m.apply(op, w or m.worlds[0], args)
                key = slot(op.result, w)
                if value is not None and value not in reached[key]:
                    new.append((key, value))
        if not new:
            return reached, True
        for key, value in new:
            reached[key].add(value)
    return reached, False


def _coverage(m, reached, saturated):
    sig = m.signature
    missing = False
    for sort in sig.rigid_sorts:
        if set(m.carrier(sort)) - reached.get((sort, None), set()):
            missing = True
    if not missing:
        return HOLDS
    return FAILS if saturated else UNKNOWN


def is_reachable(m, depth=2):
    """Every world is named and every rigid element is denoted by a rigid
    term; UNKNOWN when only ``depth`` prevents a witness.
    """
    if _unnamed_worlds(m):
        return FAILS
    reached, saturated = _generate(m, sorted(m.signature.body.ops), {},
                                   depth)
    return _coverage(m, reached, saturated)


def is_constructor_based(m, partition, depth=2):
    if _unnamed_worlds(m):
        return FAILS
    seeds = dict(((sort, None), set(m.carrier(sort)))
                 for sort in partition.loose)
    reached, saturated = _generate(m, sorted(partition.constructors.ops),
                                   seeds, depth)
    return _coverage(m, reached, saturated)
