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

"""Batch command line interface.

Every command returns an exit status and a JSON report that embeds the
budget it ran with. Exit statuses: 0 success, 1 refutation or failure,
2 budget exceeded or unknown, 3 input error.
"""

import argparse
import dataclasses
import json
import logging
import os
import random
import sys

from django.core.exceptions import ImproperlyConfigured
from django.core.serializers.json import DjangoJSONEncoder

from hdfolr import encoding, forcing, omitting
from hdfolr.cache import get_sat_cache
from hdfolr.conf import get_budget
from hdfolr.exceptions import (BudgetExceeded, EmptyForcingProperty,
                               HDFOLRError, InconsistentGenericModel,
                               InconsistentTheory, OmissionFailure)
from hdfolr.formats import Theory, dumps, load, model_text
from hdfolr.grammar import parse_sentence
from hdfolr.kripke import (is_constructor_based, random_structure,
                           sat_global, sat_local)
from hdfolr.signatures import SignatureMorphism, partition, validate
from hdfolr.syntax import At, check_sentence, rigidify, translate
from hdfolr.utils import get_custom_setting

logger = logging.getLogger('hdfolr')

OK, REFUTED, UNKNOWN, INPUT_ERROR = 0, 1, 2, 3

COMMANDS = ('validate', 'check', 'translate', 'rigidify', 'encode', 'decode',
            'sat', 'force', 'generic', 'omit', 'entail')

BUDGET_FIELDS = ('max_worlds', 'max_carrier', 'max_constants', 'star_bound',
                 'term_depth')

VERBOSITY_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG,
                    3: logging.DEBUG}


@dataclasses.dataclass
class RunConfig(object):
    command: str
    paths: list = dataclasses.field(default_factory=list)
    sentences: list = dataclasses.field(default_factory=list)
    budget: dict = dataclasses.field(default_factory=dict)
    seed: int = 0
    output: str = None
    at: str = None
    condition: str = None
    world: str = None
    source: str = None
    rename: list = dataclasses.field(default_factory=list)
    constructors: list = dataclasses.field(default_factory=list)
    nominal_type: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ImproperlyConfigured('Unknown command %s' % self.command)
        for name in self.budget:
            if name not in BUDGET_FIELDS:
                raise ImproperlyConfigured('Unknown budget field %s' % name)

    @classmethod
    def from_options(cls, options):
        budget = dict((name, options.get(name)) for name in BUDGET_FIELDS
                      if options.get(name) is not None)
        return cls(options['command'], list(options.get('paths') or []),
                   list(options.get('sentence') or []), budget,
                   options.get('seed') or 0, options.get('output'),
                   options.get('at'), options.get('condition'),
                   options.get('world'), options.get('source'),
                   list(options.get('rename') or []),
                   list(options.get('constructors') or []),
                   bool(options.get('nominal_type')))


def add_arguments(parser):
    parser.add_argument('command', choices=COMMANDS)
    parser.add_argument('paths', nargs='+', metavar='FILE')
    parser.add_argument('-s', '--sentence', action='append',
                        help='A sentence over the signature of the first '
                             'file; may be repeated')
    for name in BUDGET_FIELDS:
        parser.add_argument('--%s' % name.replace('_', '-'), dest=name,
                            type=int)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('-o', '--output', help='Write the produced file here')
    parser.add_argument('--at', help='Nominal for rigidify and force')
    parser.add_argument('--condition', help='Forcing condition')
    parser.add_argument('--world', help='World to decode')
    parser.add_argument('--source', help='Signature file the encoding '
                                         'was built from')
    parser.add_argument('--rename', action='append', metavar='OLD=NEW')
    parser.add_argument('--constructors', action='append', metavar='OP')
    parser.add_argument('--nominal-type', action='store_true',
                        dest='nominal_type')
    return parser


def _sentences(config, sig):
    result = []
    for text in config.sentences:
        sentence = parse_sentence(sig, text)
        check_sentence(sig, sentence)
        result.append(sentence)
    return result


def _partition(config, sig):
    if not config.constructors:
        return None
    ops = []
    for name in config.constructors:
        op = sig.op(name)
        if op is None:
            raise HDFOLRError('Unknown operation %s' % name)
        ops.append(op)
    return partition(sig, ops)


# Commands

def do_validate(config, theory, budget, cache):
    report = validate(theory.signature)
    for sentence in theory.axioms:
        check_sentence(theory.signature, sentence)
    return (OK if report.ok else INPUT_ERROR), {'problems': list(report)}, None


def do_check(config, theory, budget, cache):
    m = theory.model
    if m is None:
        raise HDFOLRError('check needs a model file')
    table, status = [], OK
    for sentence in _sentences(config, m.signature) or theory.axioms:
        worlds = dict((w, sat_local(m, w, sentence)) for w in m.worlds)
        holds = sat_global(m, sentence)
        if not holds:
            status = REFUTED
        table.append({'sentence': str(sentence), 'worlds': worlds,
                      'global': holds})
    return status, {'results': table}, None


def do_translate(config, theory, budget, cache):
    mapping = {}
    for item in config.rename:
        old, _, new = item.partition('=')
        mapping[old.strip()] = new.strip()
    chi = SignatureMorphism.renaming(theory.signature, mapping)
    problems = chi.validate()
    if not problems.ok:
        return INPUT_ERROR, {'problems': list(problems)}, None
    result = Theory(chi.target, [translate(chi, s) for s in theory.axioms])
    return OK, {'axioms': [str(s) for s in result.axioms]}, dumps(result)


def do_rigidify(config, theory, budget, cache):
    sig = theory.signature
    if config.at not in sig.nominals:
        raise HDFOLRError('rigidify needs --at with a nominal of the file')
    axioms = [rigidify(sig, config.at, s) for s in theory.axioms]
    rng = random.Random(config.seed)
    samples = get_custom_setting('HDFOLR_SWEEP_SAMPLES', 50)
    counterexamples = []
    for sample in range(samples):
        m = random_structure(sig, rng, budget)
        for sentence, pinned in zip(theory.axioms, axioms):
            if any(sat_local(m, w, At(config.at, sentence)) !=
                   sat_local(m, w, pinned) for w in m.worlds):
                counterexamples.append({'sample': sample,
                                        'sentence': str(sentence)})
    logger.info('Rigidification sweep over %d structures with seed %d: '
                '%d counterexamples', samples, config.seed,
                len(counterexamples))
    status = REFUTED if counterexamples else OK
    return status, {'axioms': [str(s) for s in axioms],
                    'sweep': {'samples': samples,
                              'counterexamples': counterexamples}}, \
        dumps(Theory(sig, axioms))


def do_encode(config, theory, budget, cache):
    bundle = encoding.build_plus(theory.signature)
    axioms = sorted(bundle.axioms, key=str) + \
        [encoding.encode(bundle, s) for s in theory.axioms]
    return OK, {'axioms': [str(s) for s in axioms],
                'world_sort': bundle.world_sort, 'z': bundle.z}, \
        dumps(Theory(bundle.target_z, axioms))


def do_decode(config, theory, budget, cache):
    if config.source is None:
        raise HDFOLRError('decode needs --source')
    bundle = encoding.build_plus(load(config.source).signature)
    m = load(config.paths[0], bundle.target).model
    if m is None:
        raise HDFOLRError('decode needs a model file')
    world = config.world or m.worlds[0]
    decoded = encoding.decode(bundle, m, world)
    return OK, {'world': world, 'worlds': list(decoded.worlds)}, \
        model_text(decoded)


def do_sat(config, theory, budget, cache):
    m = forcing.bounded_sat(theory.signature, theory.axioms, budget, cache)
    if m is None:
        return UNKNOWN, {'model': 'none'}, None
    return OK, {'model': model_text(m)}, dumps(
        Theory(theory.signature, theory.axioms, m))


def do_force(config, theory, budget, cache):
    prop = theory.forcing_property(budget)
    report = forcing.check_forcing_axioms(prop)
    result = {'violations': report.violations,
              'unverified': report.unverified}
    status = OK if report.ok else REFUTED
    if config.sentences:
        p = config.condition or prop.least
        if config.at is None:
            raise HDFOLRError('force needs --at with a nominal')
        forced = {}
        for sentence in _sentences(config, prop.signature):
            forced[str(sentence)] = forcing.forces(prop, p, config.at,
                                                   sentence)
        result.update(condition=p, at=config.at, forces=forced)
    if status == OK and report.unverified:
        status = UNKNOWN
    return status, result, None


def do_generic(config, theory, budget, cache):
    prop = theory.forcing_property(budget)
    p = config.condition or prop.least
    if p is None:
        raise HDFOLRError('generic needs --condition when there is no least '
                          'condition')
    sentences = _sentences(config, prop.signature)
    if not sentences:
        for q in prop.conditions:
            sentences.extend(prop.label(q))
        sentences = sorted(set(sentences), key=str)
    chain = forcing.build_generic(prop, p, sentences)
    m = forcing.generic_model(chain)
    decisions = [{'sentence': str(d.sentence), 'positive': d.positive,
                  'condition': str(d.condition)} for d in chain.decisions]
    return OK, {'decisions': decisions, 'generic': sorted(chain.generic)}, \
        model_text(m)


def do_omit(config, theory, budget, cache):
    sig = theory.signature
    types = list(theory.types)
    for path in config.paths[1:]:
        types.extend(load(path, sig).types)
    parts = _partition(config, sig)
    if config.nominal_type:
        types.append(omitting.nominal_type(sig))
    if parts is not None:
        for sort in sorted(parts.constrained):
            types.append(omitting.constructor_type(sig, parts, sort,
                                                   budget.term_depth))
    m, audit = omitting.omitting_model(sig, theory.axioms, types, budget,
                                       cache=cache)
    result = {'audit': audit.as_dict()}
    if parts is not None:
        result['constructor_based'] = is_constructor_based(
            m, parts, budget.term_depth).name
    return OK, result, dumps(Theory(sig, theory.axioms, m))


def do_entail(config, theory, budget, cache):
    sig = theory.signature
    goals = _sentences(config, sig)
    if not goals:
        raise HDFOLRError('entail needs a sentence')
    parts = _partition(config, sig)
    results, status = [], OK
    for goal in goals:
        result = omitting.constructor_entail(sig, theory.axioms, goal, parts,
                                             budget, cache=cache)
        if not result:
            status = UNKNOWN
        results.append({
            'sentence': str(goal), 'verdict': result.verdict,
            'derivation': result.derivation.as_dict()
            if result.derivation else None})
    return status, {'results': results}, None


HANDLERS = {
    'validate': do_validate, 'check': do_check, 'translate': do_translate,
    'rigidify': do_rigidify, 'encode': do_encode, 'decode': do_decode,
    'sat': do_sat, 'force': do_force, 'generic': do_generic,
    'omit': do_omit, 'entail': do_entail,
}

INPUT_ERRORS = (HDFOLRError, ImproperlyConfigured, OSError)
BUDGET_ERRORS = (BudgetExceeded, EmptyForcingProperty)
FAILURES = (OmissionFailure, InconsistentGenericModel, InconsistentTheory)


def run(config):
    """Runs one command; returns ``(status, report)``."""
    report = {'command': config.command, 'paths': list(config.paths),
              'seed': config.seed}
    try:
        budget = get_budget(**config.budget)
        report['budget'] = budget.as_dict()
        cache = get_sat_cache()
        if config.command == 'decode':
            theory = None
        else:
            theory = load(config.paths[0])
        status, result, artifact = HANDLERS[config.command](
            config, theory, budget, cache)
    except BUDGET_ERRORS as e:
        logger.warning('%s: %s', config.command, e)
        report.update(status=UNKNOWN, error=str(e))
        return UNKNOWN, report
    except FAILURES as e:
        logger.warning('%s: %s', config.command, e)
        report.update(status=REFUTED, error=str(e))
        audit = getattr(e, 'audit', None)
        if audit is not None:
            report['audit'] = audit.as_dict()
        return REFUTED, report
    except INPUT_ERRORS as e:
        logger.error('%s: %s', config.command, e)
        report.update(status=INPUT_ERROR, error=str(e))
        return INPUT_ERROR, report
    report.update(result)
    report['status'] = status
    if artifact is not None:
        if config.output:
            with open(config.output, 'w') as f:
                f.write(artifact)
            report['output'] = config.output
        else:
            report['artifact'] = artifact
    return status, report


def render(report):
    return json.dumps(report, cls=DjangoJSONEncoder, sort_keys=True,
                      indent=2)


def configure(verbosity=0):
    """Configures Django with in-memory defaults unless a settings module
    is given in the environment.
    """
    from django.conf import settings
    if not settings.configured and \
            not os.environ.get('DJANGO_SETTINGS_MODULE'):
        level = logging.getLevelName(VERBOSITY_LEVELS.get(verbosity,
                                                          logging.DEBUG))
        settings.configure(
            INSTALLED_APPS=['hdfolr'],
            CACHES={'default': {
                'BACKEND': 'django.core.cache.backends.locmem.LocMemCache'}},
            LOGGING={
                'version': 1,
                'disable_existing_loggers': False,
                'handlers': {'console': {'class': 'logging.StreamHandler'}},
                'loggers': {'hdfolr': {'handlers': ['console'],
                                       'level': level}},
            })
    import django
    django.setup()


def main(argv=None):
    parser = add_arguments(argparse.ArgumentParser(prog='hdfolr'))
    parser.add_argument('-v', '--verbosity', type=int, default=0,
                        choices=sorted(VERBOSITY_LEVELS))
    options = vars(parser.parse_args(argv))
    configure(options['verbosity'])
    try:
        config = RunConfig.from_options(options)
    except ImproperlyConfigured as e:
        sys.stderr.write('%s\n' % e)
        return INPUT_ERROR
    status, report = run(config)
    sys.stdout.write(render(report) + '\n')
    return status


if __name__ == '__main__':
    sys.exit(main())
