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

"""Types, their realization and omission, and constructor-based entailment.

A type is a set of sentences over a signature extended with the variables
of the type. Models are finite, so realization in a model is decided
exactly; everything said about theories holds within a budget.
"""

import collections
import dataclasses
import itertools
import logging

from hdfolr import signals
from hdfolr.conf import get_budget
from hdfolr.exceptions import (InconsistentGenericModel, InconsistentTheory,
                               OmissionFailure, SignatureError)
from hdfolr.forcing import (Decision, GenericChain, SemanticForcingProperty,
                            SentencePool, bounded_sat, build_generic,
                            entails, generic_model, ground_substitutions,
                            semantic_forcing)
from hdfolr.kripke import (HOLDS, expansions, reduct, rigid_terms,
                           sat_global, sat_theory)
from hdfolr.signatures import (ANY, HDSignature, RelDecl, SignatureMorphism,
                               Variable, extend, fresh_variables)
from hdfolr.syntax import (Apply, At, Dia, Eq, Exists, Modality, Nom, Not,
                           Rel, Substitution, check_sentence, conj,
                           disj, forall, implies, names_in, neq, var_term)
from hdfolr.utils import fresh_name

logger = logging.getLogger('hdfolr')

DERIVABLE = 'derivable'
NOT_DERIVABLE = 'not-derivable-at-budget'


@dataclasses.dataclass(frozen=True)
class TypeSpec(object):
    """Sentences over a signature extended with ``variables``.

    ``bound`` is the index bound a generated type was materialized with.
    """

    variables: frozenset
    sentences: frozenset
    name: str = 'type'
    bound: int = None

    def __post_init__(self):
        object.__setattr__(self, 'variables', frozenset(self.variables))
        object.__setattr__(self, 'sentences', frozenset(self.sentences))

    def __len__(self):
        return len(self.sentences)

    def signature(self, sig):
        return extend(sig, self.variables)

    def check(self, sig):
        ext = self.signature(sig)
        for sentence in self.sentences:
            check_sentence(ext, sentence)
        return self

    def sorted_sentences(self):
        return sorted(self.sentences, key=str)

    def instances(self, theta):
        return [(gamma, theta(gamma)) for gamma in self.sorted_sentences()]


@dataclasses.dataclass
class OmitCertificate(object):
    """Why a type is omitted.

    For a model, ``falsified`` pairs each expansion (as a name to value
    mapping) with a sentence it falsifies. For a theory, ``witnesses`` holds
    one :class:`OmissionWitness` per satisfiable instance.
    """

    type_name: str
    falsified: list = dataclasses.field(default_factory=list)
    witnesses: list = dataclasses.field(default_factory=list)


@dataclasses.dataclass
class LocalWitness(object):
    """``theory + sentences`` entails every instance of the type."""

    constants: tuple
    theta: Substitution
    sentences: frozenset


@dataclasses.dataclass
class OmissionWitness(object):
    gamma: object
    nominal: str
    sentence: object
    model: object


# Models

def _assignment_of(expansion, variables):
    values = {}
    for var in sorted(variables):
        if var.sort == ANY:
            values[var.name] = expansion.nominal(var.name)
        else:
            values[var.name] = expansion.apply(var.decl, None, ())
    return values


def realizes(m, ts):
    """``(True, expansion)`` for the first expansion of ``m`` satisfying
    every sentence of ``ts`` globally, ``(False, None)`` otherwise.
    """
    for expansion in expansions(m, ts.variables):
        if sat_theory(expansion, ts.sentences):
            return True, expansion
    return False, None


def omits(m, ts):
    return not realizes(m, ts)[0]


def omission_certificate(m, ts):
    """The :class:`OmitCertificate` of ``m`` omitting ``ts``, or None when
    ``m`` realizes it.
    """
    certificate = OmitCertificate(ts.name)
    sentences = ts.sorted_sentences()
    for expansion in expansions(m, ts.variables):
        for sentence in sentences:
            if not sat_global(expansion, sentence):
                certificate.falsified.append(
                    (_assignment_of(expansion, ts.variables), sentence))
                break
        else:
            return None
    return certificate


# Fixed types

@dataclasses.dataclass
class FixedTypes(object):
    nominal: TypeSpec
    constructor: dict = dataclasses.field(default_factory=dict)
    size: dict = dataclasses.field(default_factory=dict)

    def all(self):
        return [self.nominal] + \
            [self.constructor[s] for s in sorted(self.constructor)] + \
            [self.size[s] for s in sorted(self.size)]


def nominal_type(sig):
    """``not @k x`` for every nominal ``k``."""
    x = Variable(fresh_name('x', sig.symbol_names()), ANY)
    return TypeSpec({x}, [Not(At(k, Nom(x.name)))
                          for k in sig.sorted_nominals()], 'nominal')


def _shapes(partition, sort, depth):
    if sort in partition.loose:
        return [sort]
    if sort not in partition.constrained:
        return []
    shapes = []
    for op in sorted(partition.constructors.ops):
        if op.result != sort or (op.arity and depth == 0):
            continue
        choices = [_shapes(partition, a, depth - 1) for a in op.arity]
        for args in itertools.product(*choices):
            shapes.append((op, args))
    return shapes


def _fill(shape, taken, loose):
    if not isinstance(shape, tuple):
        var = Variable(fresh_name('%s%d' % (shape, len(loose)), taken),
                       shape)
        taken.add(var.name)
        loose.append(var)
        return var_term(var)
    op, args = shape
    return Apply(op, tuple(_fill(a, taken, loose) for a in args))


def constructor_terms(sig, partition, sort, depth, taken=()):
    """Constructor terms of ``sort`` up to ``depth`` as ``(term, Y)``.

    Every loose position holds its own variable, collected in ``Y``.
    """
    result = []
    for shape in _shapes(partition, sort, depth):
        names = sig.symbol_names() | set(taken)
        loose = []
        term = _fill(shape, names, loose)
        result.append((term, tuple(loose)))
    return result


def constructor_type(sig, partition, sort, depth=2):
    """``forall Y_t . not t = y`` for every constructor term ``t``."""
    y = Variable(fresh_name('y', sig.symbol_names()), sort)
    sentences = []
    for term, loose in constructor_terms(sig, partition, sort, depth,
                                         {y.name}):
        sentence = Not(Eq(term, var_term(y)))
        sentences.append(forall(loose, sentence) if loose else sentence)
    return TypeSpec({y}, sentences, 'constructor:%s' % sort, depth)


def dls_type(sig, sort, constants):
    """``c != x`` for the constants ``c`` of ``sort``."""
    taken = sig.symbol_names() | set(c.name for c in constants)
    x = Variable(fresh_name('x', taken), sort)
    sentences = []
    for c in sorted(constants):
        if c.sort != sort:
            continue
        if sort == ANY:
            sentences.append(Not(At(c.name, Nom(x.name))))
        else:
            sentences.append(neq(var_term(c), var_term(x)))
    return TypeSpec({x}, sentences, 'size:%s' % sort, len(sentences))


def fixed_types(sig, partition=None, depth=2, constants=()):
    """The nominal type, one constructor type per constrained sort and one
    size type per sort of ``constants``.
    """
    types = FixedTypes(nominal_type(sig))
    if partition is not None:
        for sort in sorted(partition.constrained):
            types.constructor[sort] = constructor_type(sig, partition, sort,
                                                       depth)
    ext = extend(sig, constants)
    for sort in sorted(set(c.sort for c in constants)):
        types.size[sort] = dls_type(ext, sort, constants)
    return types


def uls_theory(sig, sort, n, name='le'):
    """A linear order without greatest element on ``sort`` together with
    ``c_i <= c_j`` for ``i < j < n``; returns ``(signature, sentences)``.

    On the nominal sort the order is a modality.
    """
    name = fresh_name(name, sig.symbol_names())
    if sort == ANY:
        nominal_sig = sig.nominal_sig.union(
            HDSignature.build(modalities=[name]).nominal_sig)
        ordered = HDSignature(nominal_sig, sig.body, sig.rigid, sig.variables)

        def le(a, b):
            return At(a.name, Dia(Modality(name), Nom(b.name)))

        def same(a, b):
            return At(a.name, Nom(b.name))
    elif sig.is_rigid_sort(sort) and sort in sig.sorts:
        decl = RelDecl(name, (sort, sort))
        extra = HDSignature.build(rigid_sorts=[sort], rigid_rels=[decl])
        ordered = HDSignature(sig.nominal_sig, sig.body.union(extra.body),
                              sig.rigid.union(extra.rigid), sig.variables)

        def le(a, b):
            return Rel(decl, (var_term(a), var_term(b)))

        def same(a, b):
            return Eq(var_term(a), var_term(b))
    else:
        raise SignatureError('Sort %s is neither %s nor a rigid sort'
                             % (sort, ANY))
    constants = fresh_variables(ordered, sort, n, prefix='c')
    ext = extend(ordered, constants)
    a, b, c = fresh_variables(ext, sort, 3, prefix='v')
    sentences = [
        forall([a], le(a, a)),
        forall([a, b], implies(conj(le(a, b), le(b, a)), same(a, b))),
        forall([a, b, c], implies(conj(le(a, b), le(b, c)), le(a, c))),
        forall([a, b], disj(le(a, b), le(b, a))),
        forall([a], Exists({b}, conj(le(a, b), Not(same(a, b))))),
    ]
    for i, j in itertools.combinations(range(n), 2):
        sentences.append(le(constants[i], constants[j]))
    return ext, sentences


# Theories

def _maps(variables, constants):
    variables = sorted(variables)
    choices = []
    for var in variables:
        choices.append([c for c in sorted(constants) if c.sort == var.sort])
    for values in itertools.product(*choices):
        yield Substitution(dict(
            (var, c.name if var.sort == ANY else var_term(c))
            for var, c in zip(variables, values)), values)


def _instance_constants(sig, ts, taken=()):
    counts = collections.Counter(var.sort for var in ts.variables)
    taken = set(taken) | set(var.name for var in ts.variables)
    constants = []
    for sort in sorted(counts):
        found = fresh_variables(sig, sort, counts[sort], prefix='c',
                                taken=taken)
        taken.update(c.name for c in found)
        constants.extend(found)
    return tuple(constants)


def _subsets(pool, max_size):
    pool = sorted(pool, key=str)
    for size in range(min(max_size, len(pool)) + 1):
        for combo in itertools.combinations(pool, size):
            yield frozenset(combo)


def locally_realizes(sig, theory, ts, budget=None, pool=(), constants=None,
                     shape='substitution', max_size=2, cache=None):
    """A :class:`LocalWitness` that ``theory`` locally realizes ``ts``
    within ``budget``, or None.

    ``pool`` holds the candidate sentences over ``sig`` extended with
    ``constants``. With ``shape='constants'`` the variables of the type
    stay as constants next to ``constants`` and no substitution is tried.
    """
    budget = budget or get_budget()
    theory = frozenset(theory)
    if bounded_sat(sig, theory, budget, cache) is None:
        raise InconsistentTheory('The theory has no model within %s'
                                 % (budget,))
    if constants is None:
        taken = set()
        for sentence in pool:
            taken |= names_in(sentence)
        constants = () if shape == 'constants' else \
            _instance_constants(sig, ts, taken)
    constants = tuple(constants)
    if shape == 'constants':
        ext = extend(sig, set(constants) | ts.variables)
        thetas = [Substitution({})]
    elif shape == 'substitution':
        ext = extend(sig, constants)
        thetas = _maps(ts.variables, constants)
    else:
        raise ValueError('Unknown instance shape %s' % shape)
    for theta in thetas:
        instances = [instance for _, instance in ts.instances(theta)]
        for p in _subsets(pool, max_size):
            if bounded_sat(ext, theory | p, budget, cache) is None:
                continue
            if all(entails(ext, theory | p, instance, budget, cache) is HOLDS
                   for instance in instances):
                logger.debug('%s is locally realized with %d sentences',
                             ts.name, len(p))
                return LocalWitness(constants, theta, p)
    logger.debug('%s is locally omitted within budget', ts.name)
    return None


def omission_witness(sig, theory, p, theta, ts, budget=None, cache=None):
    """A sentence ``gamma`` of ``ts`` and a model of
    ``theory + p + @z not theta(gamma)`` for a fresh nominal ``z``.

    ``sig`` is the signature of ``theory`` and ``p``; ``theta`` maps the
    variables of ``ts`` into it.
    """
    budget = budget or get_budget()
    base = frozenset(theory) | frozenset(p)
    if not ts.sentences:
        raise OmissionFailure('The empty type %s is realized by every '
                              'theory' % ts.name, budget=budget)
    if bounded_sat(sig, base, budget, cache) is None:
        raise OmissionFailure('The condition has no model within %s'
                              % (budget,), budget=budget)
    taken = sig.symbol_names()
    for sentence in base:
        taken |= names_in(sentence)
    z = fresh_name('z', taken)
    ext = extend(sig, {Variable(z, ANY)})
    for gamma, instance in ts.instances(theta):
        sentence = At(z, Not(instance))
        model = bounded_sat(ext, base | {sentence}, budget, cache)
        if model is not None:
            logger.debug('%s omitted by %s', theta, gamma)
            return OmissionWitness(gamma, z, sentence, model)
    signals.budget_exceeded.send_robust(
        sender=ts, operation='omission_witness', budget=budget)
    raise OmissionFailure('%s is realized by the instance %s within %s'
                          % (ts.name, theta, budget), budget=budget)


def theory_certificate(sig, theory, ts, budget=None, pool=(), constants=None,
                       max_size=2, cache=None):
    """Omission witnesses for every satisfiable condition from ``pool``."""
    budget = budget or get_budget()
    theory = frozenset(theory)
    if constants is None:
        constants = _instance_constants(sig, ts)
    ext = extend(sig, constants)
    certificate = OmitCertificate(ts.name)
    for theta in _maps(ts.variables, constants):
        for p in _subsets(pool, max_size):
            if bounded_sat(ext, theory | p, budget, cache) is None:
                continue
            witness = omission_witness(ext, theory, p, theta, ts, budget,
                                       cache)
            certificate.witnesses.append((theta, p, witness))
    return certificate


# The omitting chain

@dataclasses.dataclass
class OmissionAudit(object):
    budget: object
    constants: tuple = ()
    steps: list = dataclasses.field(default_factory=list)
    decisions: int = 0
    satisfies_theory: bool = None
    omitted: dict = dataclasses.field(default_factory=dict)

    @property
    def ok(self):
        return bool(self.satisfies_theory) and all(self.omitted.values())

    def as_dict(self):
        return {
            'budget': self.budget.as_dict(),
            'constants': ['%s : %s' % (c.name, c.sort)
                          for c in self.constants],
            'steps': self.steps,
            'decisions': self.decisions,
            'satisfies_theory': self.satisfies_theory,
            'omitted': dict(self.omitted),
            'ok': self.ok,
        }


def chain_constants(sig, budget):
    """Fresh nominals, plus rigid constants for the rigid sorts that have
    no ground term.
    """
    constants = list(fresh_variables(sig, ANY, budget.max_constants))
    terms = rigid_terms(sig, budget.term_depth)
    taken = set(c.name for c in constants)
    for sort in sorted(sig.rigid_sorts):
        if not terms.get(sort):
            found = fresh_variables(sig, sort, budget.max_constants,
                                    taken=taken)
            taken.update(c.name for c in found)
            constants.extend(found)
    return tuple(constants)


def atom_pool(sig, depth=1):
    """``@k k'``, ``@k <m> k'``, relation atoms and equations between the
    ground rigid terms up to ``depth``, over the nominals of ``sig``.
    """
    nominals = sig.sorted_nominals()
    if not nominals:
        return []
    pool = [At(k, Nom(j)) for k, j in itertools.product(nominals, repeat=2)]
    for m in sorted(sig.modalities):
        pool.extend(At(k, Dia(Modality(m), Nom(j)))
                    for k in nominals for j in nominals)
    terms = rigid_terms(sig, depth)
    for rel in sorted(sig.body.rels):
        if not all(a in terms for a in rel.arity):
            continue
        at = nominals[:1] if rel in sig.rigid.rels else nominals
        for args in itertools.product(*[terms[a] for a in rel.arity]):
            pool.extend(At(k, Rel(rel, tuple(args))) for k in at)
    for sort in sorted(terms):
        pool.extend(At(nominals[0], Eq(a, b))
                    for a, b in itertools.product(terms[sort], repeat=2))
    return pool


def chain_sentences(sig, theory, depth=1):
    """The theory retrieved at every nominal of ``sig``, then
    :func:`atom_pool`; the order in which the chain decides them.
    """
    sentences = []
    for sentence in sorted(theory, key=str):
        if isinstance(sentence, At):
            sentences.append(sentence)
        else:
            sentences.extend(At(k, sentence) for k in sig.sorted_nominals())
    sentences.extend(atom_pool(sig, depth))
    return list(collections.OrderedDict.fromkeys(sentences))


def _instantiations(ext, types, depth):
    """Interleaves the ground substitutions of each type."""
    streams = [[(i, theta) for theta in
                ground_substitutions(ext, ts.variables, depth)]
               for i, ts in enumerate(types)]
    for batch in itertools.zip_longest(*streams):
        for item in batch:
            if item is not None:
                yield item


def _decide(sig, constants, theory, p, sentence, budget, cache):
    """A generic over the closure of ``sentence`` in the semantic forcing
    property of ``theory + p``, deciding ``sentence`` first.

    Returns the chain and the decided literal.
    """
    pool = SentencePool.build(sig, [sentence], constants, budget.star_bound,
                              budget.term_depth)
    prop = semantic_forcing(sig, constants, theory | p, budget, pool, cache,
                            closed_terms=True)
    order = [sentence] + [s for s in pool if s != sentence]
    chain = build_generic(prop, prop.least, order)
    decision = chain.decisions[0]
    if decision.positive:
        return chain, sentence
    return chain, At(sentence.nominal, Not(sentence.body))


def _witness(ext, constants, theory, p, ts, theta, budget, cache):
    """``(gamma, @c not theta(gamma))`` consistent with ``theory + p``.

    ``c`` is a constant that occurs neither in ``p`` nor in the instance
    when one is left, any nominal otherwise.
    """
    found = omission_witness(ext, theory, p, theta, ts, budget, cache)
    used = set()
    for sentence in p:
        used |= names_in(sentence)
    gammas = [found.gamma] + [g for g in ts.sorted_sentences()
                              if g != found.gamma]
    for gamma in gammas:
        body = Not(theta(gamma))
        taken = used | names_in(body)
        fresh = [c.name for c in constants
                 if c.sort == ANY and c.name not in taken]
        nominals = fresh[:1] + [k for k in ext.sorted_nominals()
                                if k not in fresh[:1]]
        for c in nominals:
            sentence = At(c, body)
            if bounded_sat(ext, theory | p | {sentence}, budget,
                           cache) is not None:
                return gamma, sentence
    return None, None


def omitting_model(sig, theory, types, budget=None, constants=None,
                   sentences=None, check_local=True, cache=None):
    """A model of ``theory`` over ``sig`` omitting every type in ``types``.

    Returns ``(model, audit)``. Step ``j`` extends the condition by a
    generic deciding the ``j``-th of ``sentences`` (by default
    :func:`chain_sentences`) and then adds an omission witness for the
    ``j``-th substitution of a type's variables by nominals and ground
    terms of the signature extended with ``constants``. The model is the
    generic model of the chain, reduced to ``sig``.
    """
    budget = budget or get_budget()
    theory = frozenset(theory)
    types = list(types)
    for ts in types:
        ts.check(sig)
        if check_local and locally_realizes(sig, theory, ts, budget,
                                            cache=cache) is not None:
            raise OmissionFailure('The theory locally realizes %s within %s'
                                  % (ts.name, budget), step='local',
                                  budget=budget)
    if constants is None:
        constants = chain_constants(sig, budget)
    constants = tuple(constants)
    ext = extend(sig, constants)
    if sentences is None:
        sentences = chain_sentences(ext, theory, budget.term_depth)
    sentences = list(sentences)
    instantiations = list(_instantiations(ext, types, budget.term_depth))
    audit = OmissionAudit(budget, constants)
    p = frozenset()
    conditions, decisions, pooled = [p], [], set()
    for step in range(max(len(sentences), len(instantiations))):
        record = {'step': step}
        if step < len(sentences):
            chain, literal = _decide(sig, constants, theory, p,
                                     sentences[step], budget, cache)
            p = p | chain.top | {literal}
            pooled |= chain.prop.pool.sentences
            decision = chain.decisions[0]
            decisions.append(Decision(decision.sentence, decision.positive,
                                      p))
            record.update(decided=str(decision.sentence),
                          positive=decision.positive)
        if step < len(instantiations):
            i, theta = instantiations[step]
            try:
                gamma, witness = _witness(ext, constants, theory, p,
                                          types[i], theta, budget, cache)
            except OmissionFailure:
                gamma, witness = None, None
            if witness is None:
                audit.steps.append(record)
                logger.warning('Omitting chain stuck at step %d on %s',
                               step, theta)
                raise OmissionFailure(
                    'No omission witness for %s of %s at step %d within %s'
                    % (theta, types[i].name, step, budget), step=step,
                    budget=budget, audit=audit)
            chain, _ = _decide(sig, constants, theory, p, witness, budget,
                               cache)
            p = p | chain.top | {witness}
            pooled |= chain.prop.pool.sentences
            decisions.append(Decision(witness, True, p))
            record.update(type=types[i].name, substitution=repr(theta),
                          gamma=str(gamma), witness=str(witness))
        conditions.append(p)
        logger.debug('Omitting chain step %d: %s', step, record)
        audit.steps.append(record)
    audit.decisions = len(decisions)

    pool = SentencePool(ext, pooled, constants, budget.star_bound,
                        budget.term_depth)
    prop = SemanticForcingProperty(ext, conditions, theory, pool, budget,
                                   closed_terms=True)
    generic = GenericChain(prop, conditions, decisions, frozenset(conditions))
    try:
        full = generic_model(generic, budget.term_depth)
    except InconsistentGenericModel as e:
        raise OmissionFailure(str(e), step='generic', budget=budget,
                              audit=audit)
    model = reduct(full, SignatureMorphism.inclusion(sig, ext))
    audit.satisfies_theory = sat_theory(model, theory)
    for ts in types:
        audit.omitted[ts.name] = omits(model, ts)
    logger.info('Omitting chain of %d steps, audit %s', len(audit.steps),
                'passed' if audit.ok else 'failed')
    if not audit.ok:
        raise OmissionFailure('The chain model fails its audit', step='audit',
                              budget=budget, audit=audit)
    return model, audit


# Constructor-based entailment

@dataclasses.dataclass
class Derivation(object):
    rule: str
    sentence: object
    premises: list = dataclasses.field(default_factory=list)

    def as_dict(self):
        return {'rule': self.rule, 'sentence': str(self.sentence),
                'premises': [d.as_dict() for d in self.premises]}


@dataclasses.dataclass
class EntailmentResult(object):
    verdict: str
    derivation: Derivation = None

    def __bool__(self):
        return self.verdict == DERIVABLE


def _universal(sentence):
    if isinstance(sentence, Not) and isinstance(sentence.body, Exists) and \
            isinstance(sentence.body.body, Not):
        return sentence.body.variables, sentence.body.body.body
    return None, None


def _instances(sig, partition, variables, body, depth):
    """Premises of the rule that introduces the first of ``variables``."""
    x = sorted(variables)[0]
    rest = frozenset(variables) - {x}

    def close(sentence):
        return forall(rest, sentence) if rest else sentence

    nominals = sig.sorted_nominals()
    if x.sort == ANY:
        return 'R1', [At(k1, Substitution({x: k2})(close(body)))
                      for k1 in nominals for k2 in nominals]
    if partition is None or x.sort not in partition.constrained:
        return None, []
    premises = []
    taken = sig.symbol_names() | names_in(body)
    for term, loose in constructor_terms(sig, partition, x.sort, depth,
                                         taken):
        instance = Substitution({x: term})(close(body))
        if loose:
            instance = forall(loose, instance)
        premises.extend(At(k, instance) for k in nominals)
    return 'R2', premises


def _derive(sig, theory, sentence, partition, budget, depth, level, cache):
    if entails(sig, theory, sentence, budget, cache) is HOLDS:
        return Derivation('R0', sentence)
    variables, body = _universal(sentence)
    if not variables or level == 0:
        return None
    rule, premises = _instances(sig, partition, variables, body, depth)
    if rule is None:
        return None
    derivation = Derivation(rule, sentence)
    for premise in premises:
        found = _derive(sig, theory, premise, partition, budget, depth,
                        level - 1, cache)
        if found is None:
            logger.debug('%s: premise %s not derivable', rule, premise)
            return None
        derivation.premises.append(found)
    return derivation


def constructor_entail(sig, theory, goal, partition=None, budget=None,
                       depth=None, level=2, cache=None):
    """Derives ``goal`` from ``theory`` with bounded entailment, nominal
    instantiation and constructor-term instantiation of universals.

    ``level`` bounds how many instantiation rules are stacked.
    """
    budget = budget or get_budget()
    depth = budget.term_depth if depth is None else depth
    derivation = _derive(sig, frozenset(theory), goal, partition, budget,
                         depth, level, cache)
    if derivation is None:
        logger.info('%s is not derivable within %s', goal, budget)
        return EntailmentResult(NOT_DERIVABLE)
    logger.info('%s is derivable by %s', goal, derivation.rule)
    return EntailmentResult(DERIVABLE, derivation)
