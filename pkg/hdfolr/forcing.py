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

"""Bounded model finding, forcing properties and generic models.

Everything that would quantify over all Kripke structures quantifies over
the structures allowed by a :class:`hdfolr.conf.SatBudget` instead.
"""

import collections
import dataclasses
import itertools
import logging

from hdfolr import signals
from hdfolr.conf import get_budget
from hdfolr.exceptions import (BudgetExceeded, EmptyForcingProperty,
                               InconsistentGenericModel, UnsupportedConstruct)
from hdfolr.kripke import (FAILS, HOLDS, UNKNOWN, PartialStructure,
                           basic_model, closure, evaluate, is_basic,
                           is_extended_atom, rigid_terms, sat_global,
                           sat_theory)
from hdfolr.signatures import ANY, Variable, extend
from hdfolr.syntax import (At, Choice, Dia, Exists, Modality, Nom, Not, Or,
                           Seq, Star, Store, Substitution, names_in, power,
                           rename_nominal, var_term)
from hdfolr.utils import fresh_name

logger = logging.getLogger('hdfolr')


# Bounded satisfiability

def _quantified_sorts(sentence, found=None):
    found = set() if found is None else found
    if isinstance(sentence, Exists):
        found.update(v.sort for v in sentence.variables if v.sort != ANY)
    for child in _children(sentence):
        _quantified_sorts(child, found)
    return found


def _children(sentence):
    if isinstance(sentence, (At, Not, Store, Exists, Dia)):
        return (sentence.body,)
    if isinstance(sentence, Or):
        return tuple(sentence.members)
    return ()


def _nominal_maps(nominals, worlds):
    """Assignments of nominals to worlds up to renaming of worlds."""
    def extend_map(index, used, current):
        if index == len(nominals):
            yield dict(current)
            return
        for i in range(min(used + 1, len(worlds))):
            current[nominals[index]] = worlds[i]
            for result in extend_map(index + 1, max(used, i + 1), current):
                yield result
        current.pop(nominals[index], None)

    return extend_map(0, 0, {})


def _carrier_sizes(keys, relevant, max_carrier):
    ranges = [range(1, max_carrier + 1) if key[0] in relevant else (1,)
              for key in keys]
    combos = list(itertools.product(*ranges))
    combos.sort(key=lambda sizes: (sum(sizes), sizes))
    return combos


def enumerate_models(sig, sentences, budget):
    """Yields every model of ``sentences`` within ``budget``.

    Worlds are ``w0, w1, ...`` and elements of sort ``S`` are ``s0, s1,
    ...``.  Symbols that no sentence mentions get a default interpretation
    instead of being enumerated.
    """
    sentences = sorted(set(sentences), key=str)
    names = set()
    for sentence in sentences:
        names |= names_in(sentence)
    ops = sorted((op for op in sig.body.ops if op.name in names),
                 key=lambda op: (len(op.arity) > 0, op))
    rels = sorted(rel for rel in sig.body.rels if rel.name in names)
    modalities = sorted(m for m in sig.modalities if m in names)
    nominals = [k for k in sig.sorted_nominals() if k in names]
    relevant = set()
    for op in ops:
        relevant.update(op.arity)
        relevant.add(op.result)
    for rel in rels:
        relevant.update(rel.arity)
    for sentence in sentences:
        relevant |= _quantified_sorts(sentence)

    watchers = collections.defaultdict(list)
    for sentence in sentences:
        for name in names_in(sentence):
            watchers[name].append(sentence)

    for count in range(1, budget.max_worlds + 1):
        worlds = tuple('w%d' % i for i in range(count))
        keys = []
        for sort in sorted(sig.sorts):
            if sig.is_rigid_sort(sort):
                keys.append((sort, None))
            else:
                keys.extend((sort, w) for w in worlds)
        for denotation in _nominal_maps(nominals, worlds):
            for sizes in _carrier_sizes(keys, relevant, budget.max_carrier):
                carriers = dict(
                    (key, tuple('%s%d' % (str(key[0]).lower(), i)
                                for i in range(size)))
                    for key, size in zip(keys, sizes))
                for model in _search(sig, worlds, denotation, carriers, ops,
                                     rels, modalities, sentences, watchers):
                    yield model


def _search(sig, worlds, denotation, carriers, ops, rels, modalities,
            sentences, watchers):
    ps = PartialStructure(sig, worlds, carriers)
    for k in sig.nominals:
        ps.nominals[k] = denotation.get(k, worlds[0])
    if any(evaluate(ps, w, s) is FAILS for s in sentences for w in worlds):
        return

    cells = []
    for op in ops + sorted(set(sig.body.ops) - set(ops)):
        rigid = op in sig.rigid.ops
        for w in ([None] if rigid else worlds):
            table = ps.ops[(op, w)] = {}
            domains = [ps.carrier(a, w or worlds[0]) for a in op.arity]
            choices = ps.carrier(op.result, w or worlds[0])
            for args in itertools.product(*domains):
                if op in ops:
                    cells.append((table, args, choices, op.name))
                else:
                    table[args] = choices[0]
    for rel in sorted(sig.body.rels):
        rigid = rel in sig.rigid.rels
        for w in ([None] if rigid else worlds):
            table = ps.rels[(rel, w)] = {}
            if rel not in rels:
                continue
            domains = [ps.carrier(a, w or worlds[0]) for a in rel.arity]
            for args in itertools.product(*domains):
                cells.append((table, args, (False, True), rel.name))
    for m in modalities:
        table = ps.modalities[m]
        for pair in itertools.product(worlds, repeat=2):
            cells.append((table, pair, (False, True), m))

    def consistent(name):
        return not any(evaluate(ps, w, s) is FAILS
                       for s in watchers.get(name, ()) for w in worlds)

    def search(index):
        if index == len(cells):
            model = ps.freeze()
            if sat_theory(model, sentences):
                yield model
            return
        table, key, choices, name = cells[index]
        for value in choices:
            table[key] = value
            if consistent(name):
                for model in search(index + 1):
                    yield model
        del table[key]

    for model in search(0):
        yield model


def bounded_sat(sig, sentences, budget=None, cache=None):
    """The first model of ``sentences`` within ``budget``, or None.

    None means that no model exists within the budget.
    """
    budget = budget or get_budget()
    sentences = frozenset(sentences)
    if cache is not None:
        hit, model = cache.get(sig, sentences, budget)
    else:
        hit, model = False, None
    if not hit:
        model = next(enumerate_models(sig, sentences, budget), None)
        if cache is not None:
            cache.set(sig, sentences, budget, model)
    if model is None:
        logger.debug('No model of %d sentences within budget', len(sentences))
        return None
    logger.info('Model found with %d worlds', len(model.worlds))
    signals.model_found.send_robust(sender=model, theory=sentences,
                                    model=model, budget=budget)
    return model


def counterexample(sig, goal):
    """``exists z . @z not goal`` for a fresh nominal variable ``z``."""
    z = fresh_name('z', sig.symbol_names() | names_in(goal))
    return Exists(frozenset([Variable(z, ANY)]), At(z, Not(goal)))


def entails(sig, sentences, goal, budget=None, cache=None):
    """Whether every model of ``sentences`` within ``budget`` satisfies
    ``goal``; UNKNOWN when ``sentences`` have no such model at all.
    """
    sentences = frozenset(sentences)
    if bounded_sat(sig, sentences | {counterexample(sig, goal)}, budget,
                   cache) is not None:
        return FAILS
    if bounded_sat(sig, sentences, budget, cache) is None:
        return UNKNOWN
    return HOLDS


# Forcing properties

class ForcingProperty(object):
    """A poset of conditions labelled with sets of basic sentences.

    ``order`` lists pairs ``(p, q)`` with ``p <= q``; its
    reflexive-transitive closure is taken. With ``closed_terms`` the ground
    terms up to the budget depth are taken to name every rigid element.
    """

    def __init__(self, signature, conditions, order=(), labels=None,
                 budget=None, closed_terms=False):
        self.signature = signature
        self.conditions = tuple(conditions)
        labels = labels or {}
        self.labels = dict((p, frozenset(labels.get(p, ())))
                           for p in self.conditions)
        self.budget = budget or get_budget()
        self.closed_terms = closed_terms
        self._order = closure(order, self.conditions)
        self._above = {}
        self._memo = {}
        self._pairs = {}
        self._saturated = {}

    def __repr__(self):
        return '<%s with %d conditions>' % (self.__class__.__name__,
                                            len(self.conditions))

    def leq(self, p, q):
        return (p, q) in self._order

    def above(self, p):
        result = self._above.get(p)
        if result is None:
            result = self._above[p] = tuple(
                q for q in self.conditions if self.leq(p, q))
        return result

    def label(self, p):
        return self.labels[p]

    @property
    def least(self):
        for p in self.conditions:
            if all(self.leq(p, q) for q in self.conditions):
                return p
        return None

    @property
    def nominals(self):
        return self.signature.sorted_nominals()


class SemanticForcingProperty(ForcingProperty):
    """Conditions are the subsets of a pool that are satisfiable together
    with a theory; the order is inclusion.
    """

    def __init__(self, signature, members, theory, pool, budget=None,
                 closed_terms=False):
        self.theory = frozenset(theory)
        self.pool = pool
        self._members = frozenset(members)
        members = sorted(self._members,
                         key=lambda p: (len(p), sorted(map(str, p))))
        labels = dict((p, frozenset(s for s in p if is_basic(s)))
                      for p in members)
        super(SemanticForcingProperty, self).__init__(
            signature, members, (), labels, budget, closed_terms)

    def leq(self, p, q):
        return p <= q

    def is_condition(self, sentences):
        return frozenset(sentences) in self._members


def forced_pairs(prop, p, action):
    """Pairs ``(k, k2)`` with ``p`` forcing ``<action> k2`` at ``k``."""
    key = (p, action)
    pairs = prop._pairs.get(key)
    if pairs is not None:
        return pairs
    if isinstance(action, Modality):
        pairs = frozenset(
            (s.nominal, s.body.body.name) for s in prop.label(p)
            if isinstance(s, At) and isinstance(s.body, Dia)
            and s.body.action == action and isinstance(s.body.body, Nom))
    elif isinstance(action, Seq):
        first = forced_pairs(prop, p, action.first)
        second = forced_pairs(prop, p, action.second)
        pairs = frozenset((a, c) for a, b in first for b2, c in second
                          if b == b2)
    elif isinstance(action, Choice):
        pairs = forced_pairs(prop, p, action.left) | forced_pairs(
            prop, p, action.right)
    elif isinstance(action, Star):
        pairs = closure(forced_pairs(prop, p, action.body), prop.nominals)
    else:
        raise UnsupportedConstruct('Not an action: %r' % (action,))
    prop._pairs[key] = pairs
    return pairs


def forces(prop, p, k, sentence):
    """Whether condition ``p`` forces ``sentence`` at nominal ``k``."""
    key = (p, k, sentence)
    result = prop._memo.get(key)
    if result is None:
        result = prop._memo[key] = _forces(prop, p, k, sentence)
    return result


def _forces(prop, p, k, sentence):
    if isinstance(sentence, Dia):
        pairs = forced_pairs(prop, p, sentence.action)
        if isinstance(sentence.body, Nom):
            return (k, sentence.body.name) in pairs
        return any(forces(prop, p, target, sentence.body)
                   for source, target in sorted(pairs) if source == k)
    if is_extended_atom(sentence):
        return At(k, sentence) in prop.label(p)
    if isinstance(sentence, Not):
        return not any(forces(prop, q, k, sentence.body)
                       for q in prop.above(p))
    if isinstance(sentence, Or):
        return any(forces(prop, p, k, m) for m in sentence.sorted_members())
    if isinstance(sentence, At):
        return forces(prop, p, sentence.nominal, sentence.body)
    if isinstance(sentence, Store):
        return forces(prop, p, k,
                      rename_nominal(sentence.body, sentence.var, k))
    if isinstance(sentence, Exists):
        for theta in ground_substitutions(prop.signature, sentence.variables,
                                          prop.budget.term_depth):
            if forces(prop, p, k, theta(sentence.body)):
                return True
        sorts = set(v.sort for v in sentence.variables if v.sort != ANY)
        if sorts and not prop.closed_terms and \
                not _terms_saturated(prop, sorts):
            signals.budget_exceeded.send_robust(
                sender=prop, operation='forces', budget=prop.budget)
            raise BudgetExceeded(
                'No ground instance of %s is forced with terms of depth '
                '<= %d' % (sentence, prop.budget.term_depth), prop.budget)
        return False
    raise UnsupportedConstruct('Not a sentence: %r' % (sentence,))


def _terms_saturated(prop, sorts):
    """Whether one more level of terms adds nothing of ``sorts``."""
    key = frozenset(sorts)
    result = prop._saturated.get(key)
    if result is None:
        depth = prop.budget.term_depth
        now = rigid_terms(prop.signature, depth)
        later = rigid_terms(prop.signature, depth + 1)
        result = prop._saturated[key] = all(
            len(now.get(s, ())) == len(later.get(s, ())) for s in sorts)
    return result


def ground_substitutions(sig, variables, depth):
    """Substitutions of ``variables`` by nominals and ground rigid terms."""
    variables = sorted(variables)
    terms = rigid_terms(sig, depth)
    choices = []
    for var in variables:
        if var.sort == ANY:
            choices.append(sig.sorted_nominals())
        else:
            choices.append(terms.get(var.sort, []))
    for values in itertools.product(*choices):
        yield Substitution(dict(zip(variables, values)))


def weak_forces(prop, p, k, sentence):
    """Every ``q >= p`` has some ``r >= q`` forcing ``sentence`` at ``k``."""
    return all(any(forces(prop, r, k, sentence) for r in prop.above(q))
               for q in prop.above(p))


@dataclasses.dataclass
class ForcingReport(object):
    violations: list = dataclasses.field(default_factory=list)
    unverified: list = dataclasses.field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def _candidates(prop, atoms):
    result = set()
    for label in prop.labels.values():
        result.update(s for s in label if isinstance(s, At))
    for atom in atoms:
        if isinstance(atom, At):
            result.add(atom)
        else:
            result.update(At(k, atom) for k in prop.nominals)
    return sorted(result, key=str)


def check_forcing_axioms(prop, atoms=(), oracle=None):
    """Checks that ``prop`` is a forcing property.

    Entailment by a label is decided by ``oracle(sentences, goal)``, by
    default bounded entailment; an UNKNOWN answer is reported as
    unverified.
    """
    if oracle is None:
        def oracle(sentences, goal):
            return entails(prop.signature, sentences, goal, prop.budget)
    report = ForcingReport()
    if prop.least is None:
        report.violations.append('no least condition')
    for p, q in itertools.combinations(prop.conditions, 2):
        if prop.leq(p, q) and prop.leq(q, p):
            report.violations.append('order is not antisymmetric on %s, %s'
                                     % (_name(p), _name(q)))
    for p in prop.conditions:
        for sentence in sorted(prop.label(p), key=str):
            if not is_basic(sentence):
                report.violations.append('label of %s holds non-basic %s'
                                         % (_name(p), sentence))
        for q in prop.above(p):
            missing = prop.label(p) - prop.label(q)
            if missing:
                report.violations.append(
                    'labels are not monotone: %s <= %s but %s is dropped'
                    % (_name(p), _name(q), sorted(map(str, missing))[0]))
    candidates = _candidates(prop, atoms)
    for p in prop.conditions:
        for goal in candidates:
            if any(goal in prop.label(q) for q in prop.above(p)):
                continue
            verdict = oracle(prop.label(p), goal)
            if verdict is HOLDS:
                report.violations.append(
                    'label of %s entails %s but no condition above adds it'
                    % (_name(p), goal))
            elif verdict is UNKNOWN:
                logger.warning('Entailment of %s by %s unverified at budget',
                               goal, _name(p))
                report.unverified.append('%s entails %s' % (_name(p), goal))
    return report


def _name(p):
    if isinstance(p, frozenset):
        return '{%s}' % ', '.join(sorted(map(str, p)))
    return str(p)


# Generic sets

@dataclasses.dataclass
class Decision(object):
    sentence: object
    positive: bool
    condition: object


@dataclasses.dataclass
class GenericChain(object):
    prop: ForcingProperty
    conditions: list
    decisions: list
    generic: frozenset

    @property
    def top(self):
        return self.conditions[-1]

    def forces(self, k, sentence):
        return forces(self.prop, self.top, k, sentence)


def _retrieved(prop, sentences):
    for sentence in sentences:
        if isinstance(sentence, At):
            yield sentence
        else:
            for k in prop.nominals:
                yield At(k, sentence)


def build_generic(prop, p, sentences=()):
    """Extends ``p`` along ``sentences`` deciding each ``@k g`` in turn.

    A condition forcing ``g`` is preferred; when no condition above the
    current one forces ``g``, the current one forces ``not g``.
    """
    chain, decisions = [p], []
    for step, sentence in enumerate(_retrieved(prop, sentences)):
        current = chain[-1]
        k, body = sentence.nominal, sentence.body
        found = next((q for q in prop.above(current)
                      if forces(prop, q, k, body)), None)
        positive = found is not None
        if positive and found != current:
            chain.append(found)
        decisions.append(Decision(sentence, positive, chain[-1]))
        logger.debug('Step %d decides %s %s', step, sentence,
                     'positively' if positive else 'negatively')
        signals.chain_step_decided.send_robust(
            sender=prop, step=step, sentence=sentence, positive=positive,
            condition=chain[-1])
    top = chain[-1]
    generic = frozenset(r for r in prop.conditions if prop.leq(r, top))
    return GenericChain(prop, chain, decisions, generic)


def generic_model(chain, depth=None):
    """The basic model of the sentences forced by the generic set.

    Raises InconsistentGenericModel when it disagrees with the forcing
    relation on a decided sentence.
    """
    prop = chain.prop
    depth = depth or prop.budget.term_depth
    basic = set()
    for p in chain.generic:
        basic |= prop.label(p)
    model = basic_model(prop.signature, basic, depth)
    mismatches = []
    for decision in chain.decisions:
        sentence = decision.sentence
        forced = chain.forces(sentence.nominal, sentence.body)
        if sat_global(model, sentence) != forced:
            mismatches.append(sentence)
    if mismatches:
        raise InconsistentGenericModel(
            'Generic model disagrees with the forcing relation on %s'
            % ', '.join(str(s) for s in mismatches), mismatches)
    logger.info('Generic model with %d worlds from %d conditions',
                len(model.worlds), len(chain.generic))
    return model


# Semantic forcing

def _injective_maps(variables, constants):
    variables = sorted(variables)
    by_sort = collections.defaultdict(list)
    for c in sorted(constants):
        by_sort[c.sort].append(c)
    groups = collections.OrderedDict()
    for var in variables:
        groups.setdefault(var.sort, []).append(var)
    choices = [list(itertools.permutations(by_sort.get(sort, ()), len(vs)))
               for sort, vs in groups.items()]
    for picks in itertools.product(*choices):
        assignment = {}
        for vs, cs in zip(groups.values(), picks):
            for var, c in zip(vs, cs):
                assignment[var] = c.name if var.sort == ANY else var_term(c)
        yield Substitution(assignment)


class SentencePool(object):
    """A finite set of ``@k g`` sentences closed under subsentences and
    under the witnesses that the semantic forcing property relies on.

    Existentials are closed under their ground instances up to
    ``term_depth``, the instances that the forcing relation inspects.
    """

    def __init__(self, signature, sentences, constants=(), star_bound=3,
                 term_depth=2):
        self.signature = signature
        self.sentences = frozenset(sentences)
        self.constants = tuple(sorted(constants))
        self.star_bound = star_bound
        self.term_depth = term_depth

    @classmethod
    def build(cls, sig, seeds, constants=(), star_bound=3, term_depth=2):
        """Closes ``seeds`` over ``sig`` extended with ``constants``."""
        ext = extend(sig, constants)
        nominals = [c.name for c in sorted(constants) if c.sort == ANY]
        todo = []
        for seed in seeds:
            if isinstance(seed, At):
                todo.append(seed)
            else:
                todo.extend(At(k, seed) for k in sig.sorted_nominals())
        result = set()
        while todo:
            sentence = todo.pop()
            if sentence in result:
                continue
            result.add(sentence)
            k, body = sentence.nominal, sentence.body
            if isinstance(body, Not):
                todo.append(At(k, body.body))
            elif isinstance(body, Or):
                todo.extend(At(k, m) for m in body.members)
            elif isinstance(body, At):
                todo.append(body)
            elif isinstance(body, Store):
                todo.append(At(k, rename_nominal(body.body, body.var, k)))
            elif isinstance(body, Exists):
                for theta in ground_substitutions(ext, body.variables,
                                                  term_depth):
                    todo.append(At(k, theta(body.body)))
            elif isinstance(body, Dia):
                action, target = body.action, body.body
                if not isinstance(target, Nom):
                    for c in nominals:
                        todo.append(At(k, Dia(action, Nom(c))))
                        todo.append(At(c, target))
                elif isinstance(action, Seq):
                    for c in nominals:
                        todo.append(At(k, Dia(action.first, Nom(c))))
                        todo.append(At(c, Dia(action.second, target)))
                elif isinstance(action, Choice):
                    todo.append(At(k, Dia(action.left, target)))
                    todo.append(At(k, Dia(action.right, target)))
                elif isinstance(action, Star):
                    todo.append(At(k, target))
                    for n in range(1, star_bound + 1):
                        todo.append(At(k, Dia(power(action.body, n), target)))
        logger.debug('Sentence pool of %d sentences from %d seeds',
                     len(result), len(seeds))
        return cls(ext, result, constants, star_bound, term_depth)

    def __iter__(self):
        return iter(sorted(self.sentences, key=str))

    def __len__(self):
        return len(self.sentences)

    def __contains__(self, sentence):
        return sentence in self.sentences


def semantic_forcing(sig, constants, theory, budget=None, pool=(),
                     cache=None, closed_terms=False):
    """The satisfiable subsets of ``pool`` as a forcing property over
    ``sig`` extended with ``constants``.

    A pool that is not a :class:`SentencePool` is closed first.
    """
    budget = budget or get_budget()
    if not isinstance(pool, SentencePool):
        pool = SentencePool.build(sig, pool, constants, budget.star_bound,
                                  budget.term_depth)
    ext = pool.signature
    sentences = list(pool)
    theory = frozenset(theory)
    models, unsatisfiable, members = [], [], []
    for size in range(len(sentences) + 1):
        for combo in itertools.combinations(range(len(sentences)), size):
            indexes = frozenset(combo)
            if any(bad <= indexes for bad in unsatisfiable):
                continue
            subset = frozenset(sentences[i] for i in combo)
            if any(sat_theory(m, subset) for m in models):
                members.append(subset)
                continue
            model = bounded_sat(ext, theory | subset, budget, cache)
            if model is None:
                unsatisfiable.append(indexes)
            else:
                models.append(model)
                members.append(subset)
        if size == 0 and not members:
            signals.budget_exceeded.send_robust(
                sender=pool, operation='semantic_forcing', budget=budget)
            raise EmptyForcingProperty(
                'The theory has no model within %s' % (budget,), budget)
    logger.info('Semantic forcing property with %d of %d conditions',
                len(members), 2 ** len(sentences))
    return SemanticForcingProperty(ext, members, theory, pool, budget,
                                   closed_terms)


def check_witness_properties(prop):
    """Lists conditions of a semantic forcing property that lack one of the
    sequence, possibility, disjunction or existential witnesses.
    """
    pool = prop.pool
    nominals = [c.name for c in pool.constants if c.sort == ANY]
    violations = []
    for p in prop.conditions:
        for sentence in sorted(p, key=str):
            k, body = sentence.nominal, sentence.body
            options = None
            if isinstance(body, Dia) and isinstance(body.body, Nom) and \
                    isinstance(body.action, Seq):
                options = [{At(k, Dia(body.action.first, Nom(c))),
                            At(c, Dia(body.action.second, body.body))}
                           for c in nominals]
            elif isinstance(body, Dia) and not isinstance(body.body, Nom):
                options = [{At(k, Dia(body.action, Nom(c))), At(c, body.body)}
                           for c in nominals]
            elif isinstance(body, Or):
                options = [{At(k, m)} for m in body.sorted_members()]
            elif isinstance(body, Exists):
                options = [{At(k, theta(body.body))} for theta in
                           _injective_maps(body.variables, pool.constants)]
            if options is None:
                continue
            if not any(prop.is_condition(p | frozenset(o)) for o in options):
                violations.append('%s in %s has no witness'
                                  % (sentence, _name(p)))
    return violations
