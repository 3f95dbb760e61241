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

"""Flattening of Kripke structures into a single local environment.

A signature with one rigid sort and only flexible operations is encoded
in a signature whose rigid sorts are a world sort and the original sort.
Nominals become flexible constants of the world sort, modalities become
flexible relations on it, and every operation and relation gets the world
it is evaluated at as an extra first argument.
"""

import dataclasses
import logging

from hdfolr.exceptions import (InconsistentTheory, LoadError,
                               UnsupportedConstruct)
from hdfolr.kripke import KripkeStructure, sat_theory
from hdfolr.signatures import (ANY, FOSignature, HDSignature, OpDecl,
                               RelDecl, Variable, extend)
from hdfolr.syntax import (Apply, At, Dia, Eq, Exists, Modality, Nom, Not,
                           Or, Rel, Store, dia, forall, iff, implies,
                           names_in, rename_nominal, var_term)
from hdfolr.utils import fresh_name

logger = logging.getLogger('hdfolr')


@dataclasses.dataclass(frozen=True)
class PlusBundle(object):
    source: HDSignature
    target: HDSignature
    world_sort: str
    sort: str
    nominals: dict
    modalities: dict
    ops: dict
    rels: dict
    axioms: frozenset
    z: str

    @property
    def target_z(self):
        return extend(self.target, {Variable(self.z, ANY)})

    def world_var(self, name):
        return Variable(name, self.world_sort)


def build_plus(sig, world_sort='World', z='z'):
    """The encoding environment of ``sig``.

    ``sig`` must have exactly one sort, which is rigid, and no rigid
    operations.
    """
    base = sig.base()
    if len(base.rigid_sorts) != 1 or base.sorts != base.rigid_sorts:
        raise UnsupportedConstruct(
            'Encoding needs exactly one sort and it must be rigid, got %s'
            % (', '.join(sorted(base.sorts)) or 'none'))
    for op in sorted(base.rigid.ops):
        raise UnsupportedConstruct('Rigid operation %s cannot be encoded'
                                   % op.name)
    sort, = base.rigid_sorts
    taken = base.symbol_names()
    world_sort = fresh_name(world_sort, taken)
    taken.add(world_sort)

    def plus(name):
        new = fresh_name('%s_plus' % name, taken)
        taken.add(new)
        return new

    nominals = dict((k, OpDecl(k, (), world_sort))
                    for k in sorted(base.nominals))
    modalities = dict((m, RelDecl(m, (world_sort, world_sort)))
                      for m in sorted(base.modalities))
    ops = dict((op, OpDecl(plus(op.name), (world_sort,) + op.arity,
                           op.result))
               for op in sorted(base.body.ops))
    rels = dict((rel, RelDecl(plus(rel.name), (world_sort,) + rel.arity))
                for rel in sorted(base.body.rels))
    body = FOSignature({world_sort, sort},
                       set(nominals.values()) | set(ops.values()),
                       set(modalities.values()) | set(rels.values()))
    target = HDSignature(FOSignature({ANY}), body,
                         FOSignature({world_sort, sort}))
    z = fresh_name(z, target.symbol_names())

    axioms = set()
    for rel in sorted(base.rigid.rels):
        names = set(target.symbol_names()) | {z}
        x1 = Variable(fresh_name('x1', names), world_sort)
        x2 = Variable(fresh_name('x2', names), world_sort)
        ys = [Variable(fresh_name('y%d' % (i + 1), names), a)
              for i, a in enumerate(rel.arity)]
        args = tuple(var_term(y) for y in ys)
        axioms.add(forall([x1, x2] + ys, iff(
            Rel(rels[rel], (var_term(x1),) + args),
            Rel(rels[rel], (var_term(x2),) + args))))
    logger.debug('Encoding environment with %d local rigidity axioms',
                 len(axioms))
    return PlusBundle(base, target, world_sort, sort, nominals, modalities,
                      ops, rels, frozenset(axioms), z)


# Sentences

def _nominal_term(bundle, name, bound):
    if name in bundle.nominals and name not in bound:
        return Apply(bundle.nominals[name], (), bundle.z)
    return var_term(bundle.world_var(name))


def encode_term(bundle, term, k=None, bound=frozenset()):
    """The image of a term pinned at ``k`` (or at its own ``at``)."""
    if term.op not in bundle.source.body.ops:
        return term
    world = term.at or k
    if world is None:
        raise UnsupportedConstruct('Term %s is not rigid' % term)
    args = [encode_term(bundle, a, k, bound) for a in term.args]
    return Apply(bundle.ops[term.op],
                 (_nominal_term(bundle, world, bound),) + tuple(args),
                 bundle.z)


def _variable(bundle, var):
    return bundle.world_var(var.name) if var.sort == ANY else var


def encode_at(bundle, k, sentence, bound=frozenset()):
    """The image of ``@k sentence``; it does not depend on the world."""
    z = bundle.z
    if isinstance(sentence, Nom):
        return At(z, Eq(_nominal_term(bundle, k, bound),
                        _nominal_term(bundle, sentence.name, bound)))
    if isinstance(sentence, Eq):
        return Eq(encode_term(bundle, sentence.left, k, bound),
                  encode_term(bundle, sentence.right, k, bound))
    if isinstance(sentence, Rel):
        world = sentence.at or k
        args = tuple(encode_term(bundle, a, k, bound) for a in sentence.args)
        return Rel(bundle.rels[sentence.rel],
                   (_nominal_term(bundle, world, bound),) + args, z)
    if isinstance(sentence, Or):
        return Or(frozenset(encode_at(bundle, k, m, bound)
                            for m in sentence.members))
    if isinstance(sentence, Not):
        return Not(encode_at(bundle, k, sentence.body, bound))
    if isinstance(sentence, Exists):
        inner = bound | set(v.name for v in sentence.variables
                            if v.sort == ANY)
        return Exists(frozenset(_variable(bundle, v)
                                for v in sentence.variables),
                      encode_at(bundle, k, sentence.body, inner))
    if isinstance(sentence, At):
        return encode_at(bundle, sentence.nominal, sentence.body, bound)
    if isinstance(sentence, Store):
        body = rename_nominal(sentence.body, sentence.var, k)
        return encode_at(bundle, k, body, bound)
    if isinstance(sentence, Dia):
        if isinstance(sentence.action, Modality) and \
                isinstance(sentence.body, Nom):
            decl = bundle.modalities[sentence.action.name]
            return At(z, Rel(decl, (
                _nominal_term(bundle, k, bound),
                _nominal_term(bundle, sentence.body.name, bound))))
        raise UnsupportedConstruct(
            'Only possibility over a modality and a nominal can be '
            'encoded, got %s' % sentence)
    raise UnsupportedConstruct('Not a sentence: %r' % (sentence,))


def encode(bundle, sentence):
    """``forall x . (@x sentence)+`` for a fresh nominal variable ``x``."""
    x = fresh_name('x', bundle.source.symbol_names() |
                   bundle.target.symbol_names() | names_in(sentence) |
                   {bundle.z})
    return forall([bundle.world_var(x)],
                  encode_at(bundle, x, sentence, frozenset([x])))


# Models

def decode(bundle, m, world):
    """The structure over the source signature stored at ``world`` of
    ``m``, a model of the local rigidity axioms over the target.

    Variables of ``m`` other than ``z`` are carried over.
    """
    if not sat_theory(m, bundle.axioms):
        raise InconsistentTheory('The structure breaks local rigidity, it '
                                 'cannot be decoded')
    if world not in m.worlds:
        raise LoadError('Unknown world %s' % world)
    worlds = m.carrier(bundle.world_sort)
    carrier = m.carrier(bundle.sort)
    nominals = dict((k, m.apply(decl, world, ()))
                    for k, decl in bundle.nominals.items())
    modalities = dict(
        (name, [(a, b) for a in worlds for b in worlds
                if m.holds(decl, world, (a, b))])
        for name, decl in bundle.modalities.items())
    source = bundle.source
    ops, rels = {}, {}
    for op, image in bundle.ops.items():
        for v in worlds:
            ops[(op, v)] = dict(
                (args, m.apply(image, world, (v,) + args))
                for args in _rows(carrier, len(op.arity)))
    for rel, image in bundle.rels.items():
        keys = [None] if rel in source.rigid.rels else worlds
        for v in keys:
            source_world = worlds[0] if v is None else v
            rels[(rel, v)] = [
                args for args in _rows(carrier, len(rel.arity))
                if m.holds(image, world, (source_world,) + args)]
    decoded = KripkeStructure(source, worlds, nominals, modalities,
                              {(bundle.sort, None): carrier}, ops, rels,
                              m.truncated)
    assignment = {}
    for var in m.signature.variables:
        if var.name == bundle.z:
            continue
        value = m.apply(var.decl, None, ())
        if var.sort == bundle.world_sort:
            assignment[Variable(var.name, ANY)] = value
        else:
            assignment[var] = value
    return decoded.expand(assignment) if assignment else decoded


def _rows(carrier, n):
    rows = [()]
    for _ in range(n):
        rows = [row + (e,) for row in rows for e in carrier]
    return rows


def assemble_plus_model(bundle, models, world_names=None):
    """One structure over the target holding ``models`` at its worlds.

    The models must share their worlds and their carrier.
    """
    models = list(models)
    if not models:
        raise LoadError('Nothing to assemble')
    worlds = models[0].worlds
    carrier = models[0].carrier(bundle.sort)
    for m in models[1:]:
        if m.worlds != worlds or m.carrier(bundle.sort) != carrier:
            raise LoadError('Assembled structures must share worlds and '
                            'carriers')
    if world_names is None:
        taken = set(worlds) | set(carrier)
        world_names = []
        for i in range(len(models)):
            name = fresh_name('u%d' % i, taken)
            taken.add(name)
            world_names.append(name)
    nominals, modalities, ops, rels = {}, {}, {}, {}
    for name, m in zip(world_names, models):
        ops.update(((decl, name), {(): m.nominal(k)})
                   for k, decl in bundle.nominals.items())
        for op, image in bundle.ops.items():
            ops[(image, name)] = dict(
                ((a,) + args, m.apply(op, a, args))
                for a in worlds for args in _rows(carrier, len(op.arity)))
        for rel, image in bundle.rels.items():
            rels[(image, name)] = [
                (a,) + args for a in worlds
                for args in _rows(carrier, len(rel.arity))
                if m.holds(rel, a, args)]
        for label, decl in bundle.modalities.items():
            rels[(decl, name)] = list(m.edges(label)[0])
    carriers = {(bundle.world_sort, None): worlds,
                (bundle.sort, None): carrier}
    logger.debug('Assembled %d structures', len(models))
    return KripkeStructure(bundle.target, world_names, nominals, modalities,
                           carriers, ops, rels)


def bullet_theory(bundle, sentences, modality='lt'):
    """The local rigidity axioms plus ``forall z . @k_i <lt> z -> s_i+``
    over the target extended with nominals ``k_i`` and the modality.

    Returns ``(signature, sentences)``.
    """
    sentences = list(sentences)
    taken = bundle.target.symbol_names() | {bundle.z}
    modality = fresh_name(modality, taken)
    taken.add(modality)
    names = []
    for i in range(len(sentences)):
        name = fresh_name('k%d' % i, taken)
        taken.add(name)
        names.append(name)
    extra = HDSignature.build(nominals=names, modalities=[modality])
    target = bundle.target
    sig = HDSignature(target.nominal_sig.union(extra.nominal_sig),
                      target.body, target.rigid, target.variables)
    z = Variable(bundle.z, ANY)
    theory = set(bundle.axioms)
    for name, sentence in zip(names, sentences):
        theory.add(forall([z], implies(At(name, dia(modality, Nom(z.name))),
                                       encode(bundle, sentence))))
    return sig, sorted(theory, key=str)
