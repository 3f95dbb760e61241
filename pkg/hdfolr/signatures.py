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

"""Signatures of hybrid-dynamic first-order logic with rigid symbols.

A signature pairs a nominal signature (one sort, ``ANY``, whose constants
are the nominals and whose binary relations are the modalities) with a
many-sorted first-order signature and its rigid subsignature.
"""

import dataclasses
import functools
import itertools
import logging

from hdfolr.exceptions import SignatureError
from hdfolr.utils import fresh_name

logger = logging.getLogger('hdfolr')

ANY = 'ANY'


@dataclasses.dataclass(frozen=True, order=True)
class OpDecl(object):
    name: object
    arity: tuple = ()
    result: object = None

    def __str__(self):
        return '%s : %s -> %s' % (self.name, ' '.join(map(str, self.arity)),
                                  self.result)


@dataclasses.dataclass(frozen=True, order=True)
class RelDecl(object):
    name: object
    arity: tuple = ()

    def __str__(self):
        return '%s : %s' % (self.name, ' '.join(map(str, self.arity)))


@dataclasses.dataclass(frozen=True, order=True)
class Variable(object):
    """A variable is identified by its name and its sort only."""

    name: str
    sort: str = ANY

    @property
    def decl(self):
        return OpDecl(self.name, (), self.sort)

    @property
    def is_nominal(self):
        return self.sort == ANY


@dataclasses.dataclass(frozen=True)
class FOSignature(object):
    sorts: frozenset = frozenset()
    ops: frozenset = frozenset()
    rels: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, 'sorts', frozenset(self.sorts))
        object.__setattr__(self, 'ops', frozenset(self.ops))
        object.__setattr__(self, 'rels', frozenset(self.rels))

    def union(self, other):
        return FOSignature(self.sorts | other.sorts, self.ops | other.ops,
                           self.rels | other.rels)

    def difference(self, other):
        return FOSignature(self.sorts - other.sorts, self.ops - other.ops,
                           self.rels - other.rels)

    def is_subsignature(self, other):
        return (self.sorts <= other.sorts and self.ops <= other.ops
                and self.rels <= other.rels)

    def profiles(self):
        """Maps (arity, result) and arity to the names declared with them."""
        ops, rels = {}, {}
        for op in self.ops:
            ops.setdefault((op.arity, op.result), set()).add(op.name)
        for rel in self.rels:
            rels.setdefault(rel.arity, set()).add(rel.name)
        return ops, rels


@dataclasses.dataclass(frozen=True)
class HDSignature(object):
    nominal_sig: FOSignature
    body: FOSignature
    rigid: FOSignature
    variables: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, 'variables', frozenset(self.variables))

    @classmethod
    def build(cls, nominals=(), modalities=(), sorts=(), rigid_sorts=(),
              ops=(), rigid_ops=(), rels=(), rigid_rels=()):
        """Convenience constructor; rigid symbols are added to the body too."""
        nominal_sig = FOSignature(
            {ANY}, [OpDecl(k, (), ANY) for k in nominals],
            [RelDecl(m, (ANY, ANY)) for m in modalities])
        rigid = FOSignature(rigid_sorts, rigid_ops, rigid_rels)
        body = FOSignature(set(sorts) | set(rigid_sorts),
                           set(ops) | set(rigid_ops),
                           set(rels) | set(rigid_rels))
        return cls(nominal_sig, body, rigid)

    @functools.cached_property
    def nominals(self):
        return frozenset(op.name for op in self.nominal_sig.ops)

    @functools.cached_property
    def modalities(self):
        return frozenset(rel.name for rel in self.nominal_sig.rels)

    @property
    def sorts(self):
        return self.body.sorts

    @property
    def rigid_sorts(self):
        return self.rigid.sorts

    @functools.cached_property
    def flexible_sorts(self):
        return self.body.sorts - self.rigid.sorts

    @property
    def extended_sorts(self):
        return self.rigid.sorts | {ANY}

    @functools.cached_property
    def flexible_ops(self):
        return self.body.ops - self.rigid.ops

    @functools.cached_property
    def flexible_rels(self):
        return self.body.rels - self.rigid.rels

    def is_rigid_sort(self, sort):
        return sort == ANY or sort in self.rigid.sorts

    def is_rigid_op(self, op):
        return op in self.rigid.ops

    def is_rigid_rel(self, rel):
        return rel in self.rigid.rels

    @functools.cached_property
    def _index(self):
        index = {}
        for decl in itertools.chain(self.body.ops, self.body.rels):
            index.setdefault((type(decl), decl.name), decl)
        return index

    def op(self, name):
        return self._index.get((OpDecl, name))

    def rel(self, name):
        return self._index.get((RelDecl, name))

    def symbol_names(self):
        names = set(self.nominals) | set(self.modalities) | set(self.sorts)
        names.update(op.name for op in self.body.ops)
        names.update(rel.name for rel in self.body.rels)
        names.add(ANY)
        return names

    def sorted_nominals(self):
        """Nominals of the base signature first, then variables, by name."""
        variables = set(v.name for v in self.variables if v.is_nominal)
        return sorted(self.nominals, key=lambda k: (k in variables, k))

    def base(self):
        return forget(self, self.variables)


def validate(sig):
    """Lists every broken structural invariant of ``sig``."""
    report = ValidationReport()
    if sig.nominal_sig.sorts != frozenset([ANY]):
        report.append('nominal signature must have exactly one sort %s'
                      % ANY)
    for op in sorted(sig.nominal_sig.ops):
        if op.arity or op.result != ANY:
            report.append('nominal %s is not a constant of sort %s'
                          % (op.name, ANY))
    for rel in sorted(sig.nominal_sig.rels):
        if len(rel.arity) != 2 or set(rel.arity) != {ANY}:
            report.append('modality arity: %s has arity %d'
                          % (rel.name, len(rel.arity)))
    if ANY in sig.body.sorts:
        report.append('sort %s is reserved for nominals' % ANY)
    for op in sorted(sig.body.ops):
        for sort in op.arity + (op.result,):
            if sort not in sig.body.sorts:
                report.append('unknown sort %s in op %s' % (sort, op.name))
    for rel in sorted(sig.body.rels):
        for sort in rel.arity:
            if sort not in sig.body.sorts:
                report.append('unknown sort %s in rel %s' % (sort, rel.name))
    if not sig.rigid.is_subsignature(sig.body):
        missing = sig.rigid.difference(sig.body)
        for sort in sorted(missing.sorts):
            report.append('not a subsignature: rigid sort %s absent from body'
                          % sort)
        for op in sorted(missing.ops):
            report.append('not a subsignature: rigid op %s absent from body'
                          % op.name)
        for rel in sorted(missing.rels):
            report.append('not a subsignature: rigid rel %s absent from body'
                          % rel.name)
    for op in sorted(sig.rigid.ops):
        for sort in op.arity + (op.result,):
            if sort not in sig.rigid.sorts:
                report.append('rigid op %s uses flexible sort %s'
                              % (op.name, sort))
    for rel in sorted(sig.rigid.rels):
        for sort in rel.arity:
            if sort not in sig.rigid.sorts:
                report.append('rigid rel %s uses flexible sort %s'
                              % (rel.name, sort))
    seen = {}
    symbols = itertools.chain(
        (('nominal', op.name) for op in sig.nominal_sig.ops),
        (('modality', rel.name) for rel in sig.nominal_sig.rels),
        (('sort', sort) for sort in sig.body.sorts),
        (('op', op.name) for op in sig.body.ops),
        (('rel', rel.name) for rel in sig.body.rels))
    for kind, name in sorted(symbols, key=lambda item: (str(item[1]),
                                                        item[0])):
        if name in seen:
            report.append('ambiguous name %s declared as %s and %s'
                          % (name, seen[name], kind))
        else:
            seen[name] = kind
    return report


class ValidationReport(list):

    @property
    def ok(self):
        return not self


def extend(sig, variables):
    """Adds ``variables`` as nominals or rigid constants."""
    variables = frozenset(variables)
    taken = sig.symbol_names()
    nominal_ops, rigid_ops = set(), set()
    for var in sorted(variables):
        if var.name in taken:
            raise SignatureError(
                'Variable %s clashes with an existing symbol' % var.name)
        taken.add(var.name)
        if var.sort == ANY:
            nominal_ops.add(var.decl)
        elif var.sort in sig.rigid.sorts:
            rigid_ops.add(var.decl)
        else:
            raise SignatureError(
                'Variable %s has sort %s which is neither %s nor rigid'
                % (var.name, var.sort, ANY))
    nominal_sig = FOSignature(sig.nominal_sig.sorts,
                              sig.nominal_sig.ops | nominal_ops,
                              sig.nominal_sig.rels)
    body = FOSignature(sig.body.sorts, sig.body.ops | rigid_ops,
                       sig.body.rels)
    rigid = FOSignature(sig.rigid.sorts, sig.rigid.ops | rigid_ops,
                        sig.rigid.rels)
    return HDSignature(nominal_sig, body, rigid, sig.variables | variables)


def forget(sig, variables):
    """Inverse of :func:`extend`: drops ``variables`` from ``sig``."""
    decls = frozenset(v.decl for v in variables)
    nominal_sig = FOSignature(sig.nominal_sig.sorts,
                              sig.nominal_sig.ops - decls,
                              sig.nominal_sig.rels)
    body = FOSignature(sig.body.sorts, sig.body.ops - decls, sig.body.rels)
    rigid = FOSignature(sig.rigid.sorts, sig.rigid.ops - decls,
                        sig.rigid.rels)
    return HDSignature(nominal_sig, body, rigid,
                       sig.variables - frozenset(variables))


def fresh_variables(sig, sort, count, prefix=None, taken=()):
    """Returns ``count`` variables of ``sort`` not clashing with ``sig``."""
    names = sig.symbol_names() | set(taken)
    if prefix is None:
        prefix = 'c' if sort == ANY else str(sort).lower()
    result = []
    for i in range(count):
        name = fresh_name('%s%d' % (prefix, i), names)
        names.add(name)
        result.append(Variable(name, sort))
    return tuple(result)


@dataclasses.dataclass(frozen=True)
class SignatureMorphism(object):
    source: HDSignature
    target: HDSignature
    sort_map: dict
    op_map: dict
    rel_map: dict
    nominal_map: dict
    modality_map: dict

    def sort(self, sort):
        if sort == ANY:
            return ANY
        return self.sort_map[sort]

    def op(self, op):
        return self.op_map[op]

    def rel(self, rel):
        return self.rel_map[rel]

    def nominal(self, name):
        return self.nominal_map[name]

    def modality(self, name):
        return self.modality_map[name]

    def compose(self, other):
        """``self`` followed by ``other``."""
        return SignatureMorphism(
            self.source, other.target,
            dict((s, other.sort(t)) for s, t in self.sort_map.items()),
            dict((o, other.op(t)) for o, t in self.op_map.items()),
            dict((r, other.rel(t)) for r, t in self.rel_map.items()),
            dict((k, other.nominal(t)) for k, t in self.nominal_map.items()),
            dict((m, other.modality(t))
                 for m, t in self.modality_map.items()))

    @classmethod
    def inclusion(cls, source, target):
        if not (source.nominal_sig.is_subsignature(target.nominal_sig)
                and source.body.is_subsignature(target.body)
                and source.rigid.is_subsignature(target.rigid)):
            raise SignatureError('%r is not included in %r'
                                 % (source, target))
        return cls(source, target,
                   dict((s, s) for s in source.sorts),
                   dict((o, o) for o in source.body.ops),
                   dict((r, r) for r in source.body.rels),
                   dict((k, k) for k in source.nominals),
                   dict((m, m) for m in source.modalities))

    @classmethod
    def identity(cls, sig):
        return cls.inclusion(sig, sig)

    @classmethod
    def renaming(cls, sig, mapping):
        """The morphism onto ``sig`` with symbols renamed by ``mapping``."""
        def rename(name):
            return mapping.get(name, name)

        sort_map = dict((s, rename(s)) for s in sig.sorts)

        def op_image(op):
            return OpDecl(rename(op.name),
                          tuple(sort_map.get(a, a) for a in op.arity),
                          sort_map.get(op.result, op.result))

        def rel_image(rel):
            return RelDecl(rename(rel.name),
                           tuple(sort_map.get(a, a) for a in rel.arity))

        nominal_sig = FOSignature(
            sig.nominal_sig.sorts,
            [OpDecl(rename(op.name), (), ANY) for op in sig.nominal_sig.ops],
            [RelDecl(rename(r.name), r.arity) for r in sig.nominal_sig.rels])
        body = FOSignature(sort_map.values(),
                           map(op_image, sig.body.ops),
                           map(rel_image, sig.body.rels))
        rigid = FOSignature([sort_map[s] for s in sig.rigid.sorts],
                            map(op_image, sig.rigid.ops),
                            map(rel_image, sig.rigid.rels))
        variables = [Variable(rename(v.name), sort_map.get(v.sort, v.sort))
                     for v in sig.variables]
        target = HDSignature(nominal_sig, body, rigid, variables)
        return cls(sig, target, sort_map,
                   dict((o, op_image(o)) for o in sig.body.ops),
                   dict((r, rel_image(r)) for r in sig.body.rels),
                   dict((k, rename(k)) for k in sig.nominals),
                   dict((m, rename(m)) for m in sig.modalities))

    def validate(self):
        report = ValidationReport()
        for sort in sorted(self.source.sorts):
            if self.sort_map.get(sort) not in self.target.sorts:
                report.append('sort %s has no image in the target' % sort)
        for op in sorted(self.source.body.ops):
            image = self.op_map.get(op)
            if image not in self.target.body.ops:
                report.append('op %s has no image in the target' % op.name)
                continue
            expected = (tuple(self.sort_map.get(a) for a in op.arity),
                        self.sort_map.get(op.result))
            if (image.arity, image.result) != expected:
                report.append('op %s: profile not preserved' % op.name)
            if op in self.source.rigid.ops and \
                    image not in self.target.rigid.ops:
                report.append('op %s: rigid symbol mapped to a flexible one'
                              % op.name)
        for rel in sorted(self.source.body.rels):
            image = self.rel_map.get(rel)
            if image not in self.target.body.rels:
                report.append('rel %s has no image in the target' % rel.name)
                continue
            if image.arity != tuple(self.sort_map.get(a) for a in rel.arity):
                report.append('rel %s: profile not preserved' % rel.name)
            if rel in self.source.rigid.rels and \
                    image not in self.target.rigid.rels:
                report.append('rel %s: rigid symbol mapped to a flexible one'
                              % rel.name)
        for sort in sorted(self.source.rigid_sorts):
            if self.sort_map.get(sort) not in self.target.rigid_sorts:
                report.append('sort %s: rigid sort mapped to a flexible one'
                              % sort)
        for k in sorted(self.source.nominals):
            if self.nominal_map.get(k) not in self.target.nominals:
                report.append('nominal %s has no image in the target' % k)
        for m in sorted(self.source.modalities):
            if self.modality_map.get(m) not in self.target.modalities:
                report.append('modality %s has no image in the target' % m)
        return report


def at_sort(sig, nominal, sort):
    """The sort of ``@k s``: ``s`` itself when rigid, else the pair."""
    if sig.is_rigid_sort(sort):
        return sort
    return (nominal, sort)


@dataclasses.dataclass(frozen=True)
class RigidifiedSignature(object):
    at_sig: FOSignature
    bar_sig: FOSignature


def rigidify_signature(sig):
    at_sorts, at_ops, at_rels = set(sig.rigid.sorts), set(), set()
    for k in sorted(sig.nominals):
        for sort in sig.flexible_sorts:
            at_sorts.add((k, sort))
        for op in sig.flexible_ops:
            at_ops.add(OpDecl((k, op.name),
                              tuple(at_sort(sig, k, a) for a in op.arity),
                              at_sort(sig, k, op.result)))
        for rel in sig.flexible_rels:
            at_rels.add(RelDecl((k, rel.name),
                                tuple(at_sort(sig, k, a) for a in rel.arity)))
    flexible_part = FOSignature(at_sorts - sig.rigid.sorts, at_ops, at_rels)
    at_sig = FOSignature(at_sorts, at_ops | sig.rigid.ops,
                         at_rels | sig.rigid.rels)
    return RigidifiedSignature(at_sig, sig.body.union(flexible_part))


def is_non_void(sig):
    """Nominals exist and every sort is inhabited by a ground term."""
    if not sig.nominals:
        return False
    inhabited = set()
    changed = True
    while changed:
        changed = False
        for op in sig.body.ops:
            if op.result not in inhabited and \
                    all(a in inhabited for a in op.arity):
                inhabited.add(op.result)
                changed = True
    return sig.body.sorts <= inhabited


@dataclasses.dataclass(frozen=True)
class ConstructorPartition(object):
    constructors: FOSignature
    constrained: frozenset
    loose: frozenset

    def loose_vars(self, sort, count, taken=()):
        """The first ``count`` variables of the pool for a loose ``sort``."""
        if sort not in self.loose:
            raise SignatureError('Sort %s is not loose' % sort)
        taken = set(taken)
        result = []
        for i in range(count):
            name = fresh_name('%s%d' % (sort, i), taken)
            taken.add(name)
            result.append(Variable(name, sort))
        return tuple(result)


def partition(sig, constructors):
    if isinstance(constructors, FOSignature):
        ops = constructors.ops
    else:
        ops = frozenset(constructors)
    for op in sorted(ops):
        if op not in sig.rigid.ops:
            raise SignatureError('Constructor %s is not a rigid operation'
                                 % op.name)
    constrained = frozenset(op.result for op in ops) & sig.rigid.sorts
    ctors = FOSignature(set(a for op in ops for a in op.arity)
                        | set(op.result for op in ops), ops, ())
    logger.debug('Constrained sorts: %s', ', '.join(sorted(constrained)))
    return ConstructorPartition(ctors, constrained,
                                sig.rigid.sorts - constrained)
