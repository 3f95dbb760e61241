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

import collections
import dataclasses
import json
import logging
import re

from hdfolr.exceptions import LoadError
from hdfolr.forcing import ForcingProperty
from hdfolr.grammar import parse_document, signature_text
from hdfolr.kripke import KripkeStructure
from hdfolr.omitting import TypeSpec
from hdfolr.signatures import ANY
from hdfolr.syntax import Substitution

logger = logging.getLogger('hdfolr')

NAME_RE = re.compile(r"^[A-Za-z0-9_'][A-Za-z0-9_']*$")


@dataclasses.dataclass
class Theory(object):
    """The content of any hdfolr file."""

    signature: object
    axioms: list = dataclasses.field(default_factory=list)
    model: KripkeStructure = None
    substitution: Substitution = None
    conditions: dict = dataclasses.field(default_factory=dict)
    order: list = dataclasses.field(default_factory=list)
    types: list = dataclasses.field(default_factory=list)

    def forcing_property(self, budget=None):
        return ForcingProperty(self.signature, list(self.conditions),
                               self.order, self.conditions, budget)

    def find_type(self, name):
        for ts in self.types:
            if ts.name == name:
                return ts
        raise LoadError('No type named %s' % name)


# Models

def _lookup(sig, kind, name, line, column):
    decl = sig.op(name) if kind == 'op_entry' else sig.rel(name)
    if decl is None:
        raise LoadError('Unknown %s %s' % (
            'operation' if kind == 'op_entry' else 'relation', name),
            line, column)
    return decl


def build_model(sig, statements):
    """A validated structure from raw model statements."""
    worlds, nominals, truncated = [], {}, False
    modalities = collections.defaultdict(set)
    carriers, ops, rels = {}, {}, collections.defaultdict(set)
    rigid_entries = collections.defaultdict(dict)
    for kind, fields, line, column in statements:
        if kind == 'worlds':
            worlds.extend(fields)
            continue
        if kind == 'truncated':
            truncated = True
            continue
        if kind == 'denote':
            k, w = fields
            if k not in sig.nominals:
                raise LoadError('Unknown nominal %s' % k, line, column)
            nominals[k] = w
            continue
        if kind == 'edge':
            m, a, b = fields
            if m not in sig.modalities:
                raise LoadError('Unknown modality %s' % m, line, column)
            modalities[m].add((a, b))
            continue
        world = fields[1]
        if world is not None and world not in worlds:
            raise LoadError('Unknown world %s' % world, line, column)
        if kind == 'carrier':
            sort, _, elements = fields
            if sort not in sig.sorts:
                raise LoadError('Unknown sort %s' % sort, line, column)
            rigid = sig.is_rigid_sort(sort)
            if rigid and world is not None:
                raise LoadError('Rigid sort %s has one carrier' % sort,
                                line, column)
            if not rigid and world is None:
                raise LoadError('Carrier of %s needs a world' % sort,
                                line, column)
            carriers[(sort, world)] = elements
            continue
        decl = _lookup(sig, kind, fields[0], line, column)
        rigid = decl in sig.rigid.ops or decl in sig.rigid.rels
        if not rigid and world is None:
            raise LoadError('Table of %s needs a world' % decl.name,
                            line, column)
        key = (decl, None if rigid else world)
        if kind == 'op_entry':
            ops.setdefault(key, {})[fields[2]] = fields[3]
            if rigid and world is not None:
                rigid_entries[decl].setdefault(world, {})[fields[2]] = \
                    fields[3]
        else:
            rels[key].add(fields[2])
            if rigid and world is not None:
                rigid_entries[decl].setdefault(world, set()).add(fields[2])
    for decl, tables in sorted(rigid_entries.items(),
                               key=lambda i: (type(i[0]).__name__,
                                              i[0].name)):
        if len(tables) != len(worlds) or \
                len(set(map(repr, map(_canonical, tables.values())))) > 1:
            raise LoadError('Divergent rigid table for %s' % decl.name)
    for k in sorted(sig.nominals):
        if k not in nominals:
            raise LoadError('Nominal %s denotes no world' % k)
    model = KripkeStructure(sig, worlds, nominals, modalities, carriers,
                            ops, rels, truncated)
    return model.validate()


def _canonical(table):
    if isinstance(table, dict):
        return sorted(table.items())
    return sorted(table)


def element_text(element):
    element = str(element)
    return element if NAME_RE.match(element) else json.dumps(element)


def _row(elements):
    return '(%s)' % ', '.join(element_text(e) for e in elements)


def _at(world):
    return '' if world is None else ' @ %s' % element_text(world)


def model_text(m):
    """The ``model { ... }`` block of ``m``."""
    sig = m.signature
    lines = ['model {',
             '  worlds %s;' % ', '.join(element_text(w) for w in m.worlds)]
    for k in sorted(sig.nominals):
        lines.append('  denote %s = %s;' % (k, element_text(m.nominal(k))))
    for name in sorted(m.modalities):
        for a, b in sorted(m.modalities[name]):
            lines.append('  edge %s : %s -> %s;'
                         % (name, element_text(a), element_text(b)))
    for (sort, world), elements in sorted(m.carriers.items(),
                                          key=lambda i: (i[0][0],
                                                         str(i[0][1]))):
        lines.append('  carrier %s%s = {%s};'
                     % (sort, _at(world),
                        ', '.join(element_text(e) for e in elements)))
    for (op, world), table in sorted(m.ops.items(),
                                     key=lambda i: (i[0][0], str(i[0][1]))):
        for args, value in sorted(table.items()):
            lines.append('  op %s%s : %s -> %s;'
                         % (op.name, _at(world), _row(args),
                            element_text(value)))
    for (rel, world), rows in sorted(m.rels.items(),
                                     key=lambda i: (i[0][0], str(i[0][1]))):
        for row in sorted(rows):
            lines.append('  rel %s%s : %s;' % (rel.name, _at(world),
                                               _row(row)))
    if m.truncated:
        lines.append('  truncated;')
    lines.append('}')
    return '\n'.join(lines) + '\n'


# Documents

def loads(text, base=None):
    """Parses any hdfolr file into a :class:`Theory`.

    ``base`` is a signature the file's declarations are added to.
    """
    document = parse_document(text, base)
    sig = document.signature
    theory = Theory(sig, list(document.axioms))
    if document.substitution:
        theory.substitution = Substitution(dict(document.substitution))
    theory.conditions = dict(document.conditions)
    theory.order = list(document.order)
    for name in set(n for pair in theory.order for n in pair):
        if name not in theory.conditions:
            raise LoadError('Order mentions unknown condition %s' % name)
    theory.types = [TypeSpec(variables, sentences, name)
                    for name, variables, sentences in document.types]
    if document.model is not None:
        theory.model = build_model(sig, document.model)
    logger.debug('Loaded %d axioms, %d conditions and %d types',
                 len(theory.axioms), len(theory.conditions), len(theory.types))
    return theory


def load(path, base=None):
    with open(path) as f:
        text = f.read()
    logger.debug('Reading %s', path)
    return loads(text, base)


def _variable_text(var):
    return var.name if var.sort == ANY else '%s : %s' % (var.name, var.sort)


def dumps(theory):
    """The canonical text of ``theory``; :func:`loads` reads it back."""
    parts = [signature_text(theory.signature)]
    if theory.axioms:
        parts.append(''.join('axiom %s;\n' % s for s in
                             sorted(theory.axioms, key=str)))
    if theory.substitution is not None:
        parts.append(''.join(
            '%s : %s -> %s;\n' % (var.name, var.sort, value)
            for var, value in sorted(theory.substitution.assignment.items())))
    for name, sentences in theory.conditions.items():
        body = ''.join('  %s;\n' % s for s in sentences)
        parts.append('condition %s {\n%s}\n' % (name, body))
    if theory.order:
        parts.append(''.join('order %s < %s;\n' % pair
                             for pair in theory.order))
    for ts in theory.types:
        variables = ', '.join(_variable_text(v)
                              for v in sorted(ts.variables))
        body = ''.join('  %s;\n' % s for s in ts.sorted_sentences())
        name = re.sub(r"[^A-Za-z0-9_']", '_', ts.name)
        parts.append('type %s (%s) {\n%s}\n' % (name, variables, body))
    if theory.model is not None:
        parts.append(model_text(theory.model))
    return '\n'.join(parts)


def save(path, theory):
    with open(path, 'w') as f:
        f.write(dumps(theory))
    logger.debug('Wrote %s', path)
